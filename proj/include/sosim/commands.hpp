#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosim/io.hpp"

namespace sosim {

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

/// One CLI invocation: command, flat parameter object, sweeps and overrides.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::string out;  // empty means stdout
  OutputFormat format = OutputFormat::csv;
  std::vector<SweepSpec> sweeps;
  std::optional<double> tol;
  std::optional<int> fock_dim;
  std::optional<nlohmann::json> state;  // validate: state to check

  void validate() const;
  /// Parameters merged over the command defaults, with sweeps and options.
  nlohmann::json effective() const;
};

struct CommandOutput {
  nlohmann::json report = nlohmann::json::object();
  Table table;
  int exit_code = 0;                  // 0, or 3 when a numeric check fails
  std::vector<std::string> messages;  // human-readable lines for stderr
};

const std::vector<std::string>& command_names();

/// Default parameter bundle of a command.
nlohmann::json default_params(const std::string& command);

/// Runs the command at every sweep point. Sweep tables are concatenated with
/// the swept parameters as leading columns. Throws ValidationError for bad
/// configs and NumericalError for numerical failures.
CommandOutput run_command(const RunConfig& config);

/// CSV or JSON rendering of an output, including the effective config.
std::string render(const RunConfig& config, const CommandOutput& out);

}  // namespace sosim
