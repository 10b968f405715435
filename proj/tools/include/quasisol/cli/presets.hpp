#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "quasisol/cli/config.hpp"

namespace quasisol::cli {

/// Named parameter bundle for one published experiment.
struct ExperimentPreset {
  std::string name;
  std::string description;
  std::string command;
  std::map<std::string, std::string> full;  ///< published resolution
  std::map<std::string, std::string> desk;  ///< overrides for a laptop-scale run
  std::vector<std::string> checklist;       ///< what the outputs should show
};

const std::vector<ExperimentPreset>& presets();
const ExperimentPreset& find_preset(std::string_view name);

/// Validated description of a preset, with the desk overrides applied when
/// desk is true.
RunDescription preset_description(const ExperimentPreset& preset, bool desk, const std::string& out = "");

}  // namespace quasisol::cli
