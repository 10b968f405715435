#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quasisol::cli {

struct KeySpec {
  std::string name;
  std::optional<std::string> default_value;  ///< absent means required
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string description;
  std::vector<KeySpec> keys;
};

/// Specs of the run subcommands (everything except preset).
const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(std::string_view name);

/// Merged, typed-on-demand key/value description of one run.
struct RunDescription {
  std::string command;
  std::map<std::string, std::string> values;
  std::vector<std::string> explicit_keys;  ///< keys given by flag or file

  [[nodiscard]] bool given(const std::string& key) const;
  [[nodiscard]] const std::string& text(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] long integer(const std::string& key) const;
  [[nodiscard]] bool flag(const std::string& key) const;
  /// Comma-separated list of numbers; empty string gives an empty list.
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
};

/// Reads a config file: a JSON object, or lines of `key = value` with `#`
/// comments.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Defaults < file values < flag values. Unknown keys and missing required
/// keys raise usage_error naming the key.
RunDescription merge_config(const CommandSpec& spec, const std::map<std::string, std::string>& file_values,
                            const std::map<std::string, std::string>& flag_values);

/// Checks the description against the module preconditions; failures are
/// reported as usage_error.
void validate(const RunDescription& description);

/// Full parse of a command line (argv without the program name) into a
/// validated description. Throws usage_error. preset is not handled here.
RunDescription parse_config(const std::vector<std::string>& args);

/// Output directory: the `out` key when given, else $QUASISOL_OUT, else
/// "quasisol_out/<command>".
std::filesystem::path output_directory(const RunDescription& description);

}  // namespace quasisol::cli
