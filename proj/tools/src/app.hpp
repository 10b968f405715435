#pragma once

#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "quasisol/cli/config.hpp"

namespace quasisol::cli {

struct AppState {
  std::string selected;  ///< name of the parsed subcommand
  std::string config_path;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::map<std::string, std::string>> storage;
  std::string preset_name;
  std::string preset_out;
  bool desk = false;
  bool list = false;
};

/// Command-line parser with one subcommand per command spec plus preset.
/// The returned app stores into state, which must outlive it.
std::unique_ptr<CLI::App> make_app(AppState& state);

RunDescription description_from_state(const AppState& state);

}  // namespace quasisol::cli
