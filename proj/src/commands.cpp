#include "sosim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "sosim/analytic.hpp"
#include "sosim/costmodel.hpp"
#include "sosim/errors.hpp"
#include "sosim/measurement.hpp"
#include "sosim/szilard.hpp"
#include "sosim/validation.hpp"

namespace sosim {

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ValidationError("format must be csv or json, got '" + s + "'");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"decoherence", "tunneling", "measure", "szilard", "cost", "validate"};
  return names;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json sos_defaults() { return SosParams{}.to_json(); }

nlohmann::json merged(nlohmann::json base, const nlohmann::json& over) {
  for (auto it = over.begin(); it != over.end(); ++it) base[it.key()] = it.value();
  return base;
}

void check_keys(const std::string& command, const nlohmann::json& params) {
  // Keys accepted without a default value.
  std::set<std::string> optional_keys;
  if (command == "cost") optional_keys = {"omega0", "T"};
  if (command == "szilard") optional_keys = {"E0"};
  if (command == "validate") optional_keys = {"criteria"};
  const nlohmann::json defaults = default_params(command);
  for (auto it = params.begin(); it != params.end(); ++it)
    if (!defaults.contains(it.key()) && !optional_keys.count(it.key()))
      throw ValidationError(command + ": unknown parameter '" + it.key() + "'");
}

double number(const nlohmann::json& p, const char* key) {
  const auto& v = p.at(key);
  if (!v.is_number()) throw ValidationError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const nlohmann::json& p, const char* key, int min_value) {
  const double v = number(p, key);
  if (v != std::floor(v) || v < min_value)
    throw ValidationError(std::string("parameter '") + key + "' must be an integer ≥ " + std::to_string(min_value));
  return static_cast<int>(v);
}

double trace_norm(const Matrix& m) { return Eigen::BDCSVD<Matrix>(m).singularValues().sum(); }

int measurement_dim(const SosParams& p) {
  if (p.D <= 1.5 && p.T <= p.omega0) return 48;
  return std::max(64, FockRep::auto_dim(std::abs(p.D), p.omega0, p.T));
}

nlohmann::json stats_json(const OdeStats& s) {
  return {{"accepted", s.accepted}, {"rejected", s.rejected}, {"rhs_evals", s.rhs_evals}};
}

nlohmann::json cplx_json(cplx z) { return {z.real(), z.imag()}; }

// Coherence |ρ_{+−}| of a spin cat state c₊|+; α₊⟩ + c₋|−; α₋⟩, from the
// rank-1 propagator and from the integrator.
CommandOutput cmd_decoherence(const nlohmann::json& prm, const RunConfig& cfg) {
  const SosParams p = SosParams::from_json(prm);
  if (p.T > 0.0) throw UnsupportedRegime("decoherence: the rank-1 propagator is exact only at T = 0");
  const double c_minus = number(prm, "c_minus");
  if (!(c_minus >= 0.0 && c_minus <= 1.0)) throw ValidationError("parameter 'c_minus' must lie in [0, 1]");
  const double phase = number(prm, "phase");
  const cplx alpha_plus(number(prm, "alpha_plus"), 0.0);
  const cplx alpha_minus(number(prm, "alpha_minus"), 0.0);
  const int samples = integer(prm, "samples", 2);
  const DerivedRates rates = derive_rates(p);
  double horizon = number(prm, "horizon");
  if (horizon == 0.0) horizon = 10.0 / (rates.gamma > 0.0 ? rates.gamma : p.omega0);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("parameter 'horizon' must be positive");
  const double tol = cfg.tol.value_or(1e-5);

  const std::vector<CoherentComponent> psi = {
      {1, alpha_plus, cplx(std::sqrt(1.0 - c_minus * c_minus), 0.0)},
      {-1, alpha_minus, std::polar(c_minus, phase)}};
  const auto blocks = blocks_from_superposition(psi);
  const double alpha_max = std::max({std::abs(alpha_plus), std::abs(alpha_minus), std::abs(p.D)});
  const FockRep rep(cfg.fock_dim.value_or(FockRep::auto_dim(alpha_max, p.omega0, p.T)));
  const auto grid = linspace(0.0, horizon, samples);
  const QuantumState rho0 = QuantumState::spin_oscillator(assemble_blocks(blocks, rep), rep.dim());
  const Trajectory traj = evolve(build_sos_generator(p, rep), rho0, grid);

  CommandOutput out;
  out.table.columns = {"t", "coherence_analytic", "coherence_oracle", "abs_diff"};
  const int n = rep.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double analytic = 0.0;
    for (const auto& b : blocks)
      if (b.mu == 1 && b.nu == -1) analytic += std::abs(propagate_rank1(b, grid[k], p).amp);
    const double oracle = trace_norm(traj.states[k].matrix().block(0, n, n, n));
    const double diff = std::abs(analytic - oracle);
    worst = std::max(worst, diff);
    out.table.add_row({grid[k], analytic, oracle, diff});
  }
  const bool passed = worst <= tol;
  out.exit_code = passed ? 0 : 3;
  out.report = {{"max_abs_diff", worst},
                {"tol", tol},
                {"passed", passed},
                {"fock_dim", n},
                {"horizon", horizon},
                {"max_trace_drift", traj.max_trace_drift},
                {"min_eigenvalue", traj.min_eigenvalue},
                {"max_hermiticity_defect", traj.max_hermiticity_defect},
                {"ode", stats_json(traj.stats)}};
  std::ostringstream msg;
  msg << "decoherence: max |analytic - oracle| = " << format_number(worst) << " (tol " << format_number(tol) << ")";
  out.messages.push_back(msg.str());
  return out;
}

CommandOutput cmd_tunneling(const nlohmann::json& prm, const RunConfig& cfg) {
  const SosParams p = SosParams::from_json(prm);
  const double tol = cfg.tol.value_or(1e-3);
  const TunnelingResult closed = p.T > 0.0 ? tunneling_rate_finite_t(p) : tunneling_rate_zero_t(p);
  const FockRep rep(cfg.fock_dim.value_or(std::max(48, FockRep::auto_dim(std::abs(p.D), p.omega0, p.T))));
  const double oracle =
      initial_spin_flow(build_sos_generator(p, rep, {true, 1}), biased_gibbs_state(-1, p, rep));
  const double ratio = closed.rate > 0.0 ? oracle / closed.rate : (oracle == 0.0 ? 1.0 : kNaN);
  const bool passed = std::abs(ratio - 1.0) <= tol;

  CommandOutput out;
  out.table.columns = {"D", "T", "rate_exact", "rate_leading", "rate_uncorrected", "rate_oracle", "oracle_ratio"};
  out.table.add_row({p.D, p.T, closed.rate, closed.rate_leading, closed.rate_uncorrected, oracle, ratio});
  out.exit_code = passed ? 0 : 3;
  out.report = {{"rate_exact", closed.rate},
                {"rate_leading", closed.rate_leading},
                {"rate_uncorrected", closed.rate_uncorrected},
                {"rate_oracle", oracle},
                {"oracle_ratio", ratio},
                {"theta_prime", closed.exponent_temperature},
                {"regime", to_string(closed.regime)},
                {"fock_dim", rep.dim()},
                {"tol", tol},
                {"passed", passed}};
  if (!passed)
    out.messages.push_back("tunneling: oracle/exact = " + format_number(ratio) + " at D=" + format_number(p.D) +
                           ", T=" + format_number(p.T));
  return out;
}

nlohmann::json report_json(const MeasurementReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"t", s.t},
                       {"displacement", cplx_json(s.displacement)},
                       {"expected_displacement", cplx_json(s.expected_displacement)},
                       {"coherence", s.coherence},
                       {"observed_deviation", s.observed_deviation}});
  const StageTimes& st = r.stages;
  return {{"work_invested", r.work_invested},
          {"work_expected", r.work_expected},
          {"average_work", r.average_work},
          {"p_minus", r.p_minus},
          {"p_plus", r.p_plus},
          {"horizon", r.horizon},
          {"pointer_distance", r.pointer_distance},
          {"pointer_distance_moving", r.pointer_distance_moving},
          {"max_displacement_error", r.max_displacement_error},
          {"max_observed_deviation", r.max_observed_deviation},
          {"coherence_monotone", r.coherence_monotone},
          {"stages",
           {{"t_M", st.t_M},
            {"t_D", st.t_D},
            {"t_R", st.t_R},
            {"t_E", st.t_E},
            {"ordering_applicable", st.ordering_applicable},
            {"ordering_holds", st.ordering_holds}}},
          {"samples", samples},
          {"max_trace_drift", r.max_trace_drift},
          {"min_eigenvalue", r.min_eigenvalue},
          {"max_hermiticity_defect", r.max_hermiticity_defect},
          {"warnings", r.warnings}};
}

CommandOutput cmd_measure(const nlohmann::json& prm, const RunConfig& cfg) {
  const SosParams p = SosParams::from_json(prm);
  const double c_minus = number(prm, "c_minus");
  if (!(c_minus >= 0.0 && c_minus <= 1.0)) throw ValidationError("parameter 'c_minus' must lie in [0, 1]");
  ObservedSystem sys;
  sys.c_minus = std::polar(c_minus, number(prm, "phase"));
  sys.c_plus = cplx(std::sqrt(1.0 - c_minus * c_minus), 0.0);
  ProtocolOptions opts;
  opts.horizon = number(prm, "horizon");
  opts.samples = integer(prm, "samples", 2);
  if (cfg.tol) opts.state_tol = *cfg.tol;
  const FockRep rep(cfg.fock_dim.value_or(measurement_dim(p)));
  const MeasurementReport r = run_protocol(sys, p, rep, opts);

  CommandOutput out;
  out.report = report_json(r);
  out.report["fock_dim"] = rep.dim();
  out.table.columns = {"t",          "displacement_re", "displacement_im", "expected_re",
                       "expected_im", "coherence",       "observed_deviation"};
  for (const auto& s : r.samples)
    out.table.add_row({s.t, s.displacement.real(), s.displacement.imag(), s.expected_displacement.real(),
                       s.expected_displacement.imag(), s.coherence, s.observed_deviation});
  for (const auto& w : r.warnings) out.messages.push_back("measure: warning: " + w);
  std::ostringstream msg;
  msg << "measure: p_minus=" << format_number(r.p_minus) << " p_plus=" << format_number(r.p_plus)
      << " work=" << format_number(r.work_invested);
  out.messages.push_back(msg.str());
  return out;
}

nlohmann::json branch_json(const BranchLedger& b) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : b.stages)
    stages.push_back({{"name", s.name}, {"work", s.work}, {"heat", s.heat}, {"energy_change", s.energy_change}});
  return {{"probability", b.probability},
          {"work_extracted", b.work_extracted},
          {"closure_error", b.closure_error},
          {"stages", stages}};
}

CommandOutput cmd_szilard(const nlohmann::json& prm, const RunConfig&) {
  const double T = number(prm, "T");
  double theta = number(prm, "theta");
  if (theta == 0.0) theta = T;
  if (!(T > 0.0) || !(theta > 0.0)) throw ValidationError("szilard: T and theta must be positive");
  const double eps_min = number(prm, "eps_min");
  const double eps_max = number(prm, "eps_max");
  if (!(eps_min > 0.0 && eps_min < eps_max && eps_max <= 0.5))
    throw ValidationError("szilard: need 0 < eps_min < eps_max ≤ 0.5");
  const int count = integer(prm, "count", 2);

  CommandOutput out;
  out.table.columns = {"epsilon", "eta", "E0_star", "w_max", "w_max_closed"};
  for (double eps : logspace(eps_min, eps_max, count)) {
    const FaultyOptimum opt = w_se_max(eps, T);
    out.table.add_row({eps, efficiency(eps, T, theta), opt.E0_star, opt.work, opt.work_closed});
  }
  const EfficiencyOptimum best = maximize_efficiency(T, theta);
  out.report = {{"eps_bar", best.eps_bar}, {"eta_bar", best.eta_bar}, {"evaluations", best.evaluations},
                {"T", T},                  {"theta", theta}};
  out.messages.push_back("szilard: eps_bar=" + format_number(best.eps_bar) +
                         " eta_bar=" + format_number(best.eta_bar));

  if (prm.contains("E0")) {
    SzilardCycle cycle{T, number(prm, "E0"), number(prm, "epsilon")};
    cycle.validate();
    const double rate = number(prm, "rate");
    if (!(rate > 0.0)) throw ValidationError("szilard: 'rate' must be positive");
    if (!prm.at("shape").is_string()) throw ValidationError("parameter 'shape' must be a string");
    QuasistaticOptions qopts;
    qopts.shape = ramp_shape_from_string(prm.at("shape").get<std::string>());
    const double ramp_time = number(prm, "ramp_time") / rate;
    const CycleLedger led = quasistatic_cycle(cycle, ramp_time, rate, qopts);
    out.report["cycle"] = {{"E0", cycle.E0},
                           {"epsilon", cycle.epsilon},
                           {"ramp_time", ramp_time},
                           {"shape", to_string(qopts.shape)},
                           {"work_extracted", led.work_extracted},
                           {"work_invested_stage_iii", led.work_invested_stage_iii},
                           {"heat_absorbed", led.heat_absorbed},
                           {"energy_change", led.energy_change},
                           {"closure_error", led.closure_error},
                           {"quasistatic_reference", led.quasistatic_reference},
                           {"relative_deficit", (led.work_extracted - led.quasistatic_reference) /
                                                    led.quasistatic_reference},
                           {"correct", branch_json(led.correct)},
                           {"faulty", branch_json(led.faulty)},
                           {"ode", stats_json(led.stats)}};
  }
  return out;
}

CommandOutput cmd_cost(const nlohmann::json& prm, const RunConfig&) {
  const CostInputs in = CostInputs::from_json(prm);
  const WorkEstimate w = min_total_work(in);
  const Temperature theta = in.resolved_theta();
  const FailureProbability back = failure_probability(in.N, in.kappa, w.per_gate, theta.value);
  const double roundtrip = std::abs(back.delta - in.delta) / in.delta;

  CommandOutput out;
  out.table.columns = {"N",           "kappa",        "delta",           "theta",
                       "work_natural", "work_joules", "landauer_natural", "landauer_joules"};
  out.table.add_row({in.N, in.kappa, in.delta, theta.value, w.natural, w.joules.value_or(kNaN), w.landauer,
                     w.landauer_joules.value_or(kNaN)});
  out.report = {{"inputs", in.to_json()},
                {"theta", theta.str()},
                {"work_natural", w.natural},
                {"work_per_gate", w.per_gate},
                {"landauer_natural", w.landauer},
                {"delta_roundtrip_rel_err", roundtrip},
                {"warnings", w.warnings}};
  if (w.joules) {
    out.report["work_joules"] = *w.joules;
    out.report["log10_work_joules"] = std::log10(*w.joules);
    out.report["landauer_joules"] = *w.landauer_joules;
  }
  for (const auto& s : w.warnings) out.messages.push_back("cost: warning: " + s);
  out.messages.push_back("cost: W = " + format_number(w.natural) +
                         (w.joules ? " (" + format_number(*w.joules) + " J)" : std::string()));
  return out;
}

CommandOutput cmd_validate(const nlohmann::json& prm, const RunConfig& cfg) {
  CommandOutput out;
  out.table.columns = {"id", "passed", "seconds"};
  out.report = {{"results", nlohmann::json::array()}};
  bool ok = true;

  if (cfg.state) {
    const QuantumState s = state_from_json(*cfg.state);
    const StateDiagnostics d = s.diagnostics();
    out.report["state"] = {{"dim", s.dim()},
                           {"trace_deviation", d.trace_deviation},
                           {"min_eigenvalue", d.min_eigenvalue},
                           {"hermiticity_defect", d.hermiticity_defect}};
    s.check();
    out.messages.push_back("[PASS] state: dim " + std::to_string(s.dim()) + ", trace deviation " +
                           format_number(d.trace_deviation) + ", min eig " + format_number(d.min_eigenvalue));
  }

  std::vector<int> ids;
  if (prm.contains("criteria")) {
    if (!prm.at("criteria").is_array()) throw ValidationError("parameter 'criteria' must be an array of ids");
    for (const auto& v : prm.at("criteria")) {
      if (!v.is_number_integer()) throw ValidationError("parameter 'criteria' must be an array of ids");
      const int id = v.get<int>();
      if (id < 1 || id > kCriterionCount)
        throw ValidationError("criterion id " + std::to_string(id) + " is out of range 1.." +
                              std::to_string(kCriterionCount));
      ids.push_back(id);
    }
  } else if (!cfg.state) {
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  }

  HygieneLog log;
  int passed = 0;
  for (int id : ids) {
    const CheckResult r = run_criterion(id, log);
    ok = ok && r.passed;
    passed += r.passed ? 1 : 0;
    out.table.add_row({static_cast<double>(r.id), r.passed ? 1.0 : 0.0, r.seconds});
    out.report["results"].push_back({{"id", r.id},
                                     {"name", r.name},
                                     {"passed", r.passed},
                                     {"detail", r.detail},
                                     {"seconds", r.seconds},
                                     {"metrics", r.metrics}});
    out.messages.push_back(format_result_line(r));
  }
  out.report["passed"] = passed;
  out.report["total"] = ids.size();
  if (!ids.empty())
    out.messages.push_back(std::to_string(passed) + "/" + std::to_string(ids.size()) + " criteria passed");
  out.exit_code = ok ? 0 : 3;
  return out;
}

using CommandFn = CommandOutput (*)(const nlohmann::json&, const RunConfig&);

CommandFn lookup(const std::string& command) {
  if (command == "decoherence") return cmd_decoherence;
  if (command == "tunneling") return cmd_tunneling;
  if (command == "measure") return cmd_measure;
  if (command == "szilard") return cmd_szilard;
  if (command == "cost") return cmd_cost;
  if (command == "validate") return cmd_validate;
  throw ValidationError("unknown command '" + command + "'");
}

std::vector<SweepSpec> default_sweeps(const std::string& command) {
  if (command == "tunneling") return {SweepSpec{"D", 0.25, 1.5, 6, SweepScale::lin}};
  return {};
}

}  // namespace

nlohmann::json default_params(const std::string& command) {
  if (command == "decoherence") {
    auto j = sos_defaults();
    j["c_minus"] = std::sqrt(0.5);
    j["phase"] = 0.0;
    j["alpha_plus"] = 1.0;
    j["alpha_minus"] = 1.0;
    j["horizon"] = 0.0;
    j["samples"] = 41;
    return j;
  }
  if (command == "tunneling") return sos_defaults();
  if (command == "measure") {
    auto j = sos_defaults();
    j["c_minus"] = std::sqrt(0.5);
    j["phase"] = 0.0;
    j["horizon"] = 0.0;
    j["samples"] = 41;
    return j;
  }
  if (command == "szilard")
    return {{"T", 1.0},         {"theta", 0.0}, {"eps_min", 1e-4}, {"eps_max", 0.5},       {"count", 64},
            {"epsilon", 0.0},   {"rate", 1.0},  {"ramp_time", 100.0}, {"shape", "optimal"}};
  if (command == "cost") return {{"N", 1e21}, {"kappa", 1e-8}, {"delta", 1e-4}, {"theta", "300K"}};
  if (command == "validate") return nlohmann::json::object();
  throw ValidationError("unknown command '" + command + "'");
}

void RunConfig::validate() const {
  lookup(command);
  if (!params.is_object()) throw ValidationError("parameters must be a flat JSON object");
  check_keys(command, params);
  for (const auto& s : sweeps) {
    s.validate();
    if (command == "validate") throw ValidationError("validate does not take sweeps");
    check_keys(command, nlohmann::json{{s.param, 0.0}});
  }
  if (tol && !(*tol > 0.0)) throw ValidationError("--tol must be positive");
  if (fock_dim && *fock_dim < 2) throw ValidationError("--fock-dim must be at least 2");
}

nlohmann::json RunConfig::effective() const {
  nlohmann::json j = {{"command", command}, {"params", merged(default_params(command), params)}};
  std::vector<std::string> sw;
  for (const auto& s : (sweeps.empty() ? default_sweeps(command) : sweeps)) sw.push_back(s.str());
  j["sweeps"] = sw;
  j["tol"] = tol ? nlohmann::json(*tol) : nlohmann::json(nullptr);
  j["fock_dim"] = fock_dim ? nlohmann::json(*fock_dim) : nlohmann::json(nullptr);
  return j;
}

CommandOutput run_command(const RunConfig& config) {
  config.validate();
  const CommandFn fn = lookup(config.command);
  const nlohmann::json base = merged(default_params(config.command), config.params);
  const auto sweeps = config.sweeps.empty() ? default_sweeps(config.command) : config.sweeps;
  const auto points = sweep_points(sweeps);
  if (sweeps.empty()) return fn(base, config);

  CommandOutput out;
  out.report = {{"points", nlohmann::json::array()}};
  for (const auto& point : points) {
    nlohmann::json prm = base;
    nlohmann::json where = nlohmann::json::object();
    for (const auto& [key, value] : point) {
      prm[key] = value;
      where[key] = value;
    }
    CommandOutput one = fn(prm, config);
    if (out.table.columns.empty()) {
      for (const auto& [key, value] : point)
        if (std::find(one.table.columns.begin(), one.table.columns.end(), key) == one.table.columns.end())
          out.table.columns.push_back(key);
      out.table.columns.insert(out.table.columns.end(), one.table.columns.begin(), one.table.columns.end());
    }
    for (auto& row : one.table.rows) {
      std::vector<double> full;
      for (const auto& [key, value] : point)
        if (std::find(one.table.columns.begin(), one.table.columns.end(), key) == one.table.columns.end())
          full.push_back(value);
      full.insert(full.end(), row.begin(), row.end());
      out.table.add_row(std::move(full));
    }
    out.report["points"].push_back({{"sweep", where}, {"report", one.report}});
    out.exit_code = std::max(out.exit_code, one.exit_code);
    out.messages.insert(out.messages.end(), one.messages.begin(), one.messages.end());
  }
  return out;
}

std::string render(const RunConfig& config, const CommandOutput& out) {
  const nlohmann::json cfg = config.effective();
  if (config.format == OutputFormat::json) {
    nlohmann::json j = {{"config", cfg}, {"report", out.report}, {"table", out.table.to_json()}};
    return dump_json(j);
  }
  std::ostringstream os;
  write_csv(os, out.table, cfg);
  return os.str();
}

}  // namespace sosim
