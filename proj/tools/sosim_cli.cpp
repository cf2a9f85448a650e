#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sosim/commands.hpp"
#include "sosim/errors.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> sweeps;
  std::optional<double> tol;
  std::optional<int> fock_dim;
  std::vector<std::string> params;
  std::optional<double> D, omega0, T;
  std::optional<double> c_minus, phase, horizon;
  std::vector<int> criteria;
  std::string state_path;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sosim::ValidationError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw sosim::ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// "key=value"; the value is read as JSON when possible, else as a string.
void apply_param(nlohmann::json& params, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw sosim::ValidationError("--param expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  params[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
}

sosim::RunConfig build_config(const std::string& command, const CliArgs& a) {
  sosim::RunConfig cfg;
  cfg.command = command;
  if (!a.config_path.empty()) cfg.params = read_json_file(a.config_path);
  if (!cfg.params.is_object()) throw sosim::ValidationError("--config must hold a flat JSON object");
  for (const auto& kv : a.params) apply_param(cfg.params, kv);
  auto set = [&](const char* key, const std::optional<double>& v) {
    if (v) cfg.params[key] = *v;
  };
  set("D", a.D);
  set("omega0", a.omega0);
  set("T", a.T);
  set("c_minus", a.c_minus);
  set("phase", a.phase);
  set("horizon", a.horizon);
  if (!a.criteria.empty()) cfg.params["criteria"] = a.criteria;
  if (!a.state_path.empty()) cfg.state = read_json_file(a.state_path);
  cfg.out = a.out;
  cfg.format = sosim::output_format_from_string(a.format);
  for (const auto& s : a.sweeps) cfg.sweeps.push_back(sosim::SweepSpec::parse(s));
  cfg.tol = a.tol;
  cfg.fock_dim = a.fock_dim;
  return cfg;
}

void add_common(CLI::App* sub, CliArgs& a, bool physical) {
  sub->add_option("--config", a.config_path, "JSON file with a flat parameter object");
  sub->add_option("--out", a.out, "Output path (default stdout)");
  sub->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--param", a.params, "Parameter override key=value (repeatable)");
  if (sub->get_name() != "validate") {
    sub->add_option("--sweep", a.sweeps, "Sweep param:min:max:count:lin|log (repeatable)");
  }
  sub->add_option("--tol", a.tol, "Tolerance of the numeric check");
  sub->add_option("--fock-dim", a.fock_dim, "Fock space dimension");
  if (physical) {
    sub->add_option("--D", a.D, "Coupling D");
    sub->add_option("--omega0", a.omega0, "Oscillator frequency");
    sub->add_option("--T", a.T, "Bath temperature");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-oscillator measurement model: analytic results and Lindblad oracle"};
  app.require_subcommand(1);
  CliArgs a;

  auto* deco = app.add_subcommand("decoherence", "Cat-state coherence: propagator vs integrator");
  add_common(deco, a, true);
  deco->add_option("--c-minus", a.c_minus, "Magnitude of the spin-minus amplitude");
  deco->add_option("--phase", a.phase, "Phase of the spin-minus amplitude");
  deco->add_option("--horizon", a.horizon, "End time (0 picks 10/gamma)");

  auto* tun = app.add_subcommand("tunneling", "Tunneling rate: closed forms vs integrator flow");
  add_common(tun, a, true);

  auto* meas = app.add_subcommand("measure", "Measurement protocol: pulse then relaxation");
  add_common(meas, a, true);
  meas->add_option("--c-minus", a.c_minus, "Magnitude of c_minus");
  meas->add_option("--phase", a.phase, "Phase of c_minus");
  meas->add_option("--horizon", a.horizon, "End time (0 picks 20/gamma_net)");

  auto* szi = app.add_subcommand("szilard", "Szilard engine efficiency curve and cycle ledger");
  add_common(szi, a, false);
  szi->add_option("--T", a.T, "Bath temperature");

  auto* cost = app.add_subcommand("cost", "Minimal work of an N-gate computation");
  add_common(cost, a, false);

  auto* val = app.add_subcommand("validate", "Acceptance suite and state checks");
  add_common(val, a, false);
  val->add_option("--criteria", a.criteria, "Criterion ids to run (default all)");
  val->add_option("--state", a.state_path, "State JSON file to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const sosim::RunConfig cfg = build_config(command, a);
    const sosim::CommandOutput out = sosim::run_command(cfg);
    const std::string text = sosim::render(cfg, out);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw sosim::ValidationError("cannot write '" + cfg.out + "'");
      f << text;
    }
    for (const auto& m : out.messages) std::cerr << m << '\n';
    return out.exit_code;
  } catch (const sosim::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const sosim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
