#include "sosim/costmodel.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "sosim/errors.hpp"
#include "sosim/sos_model.hpp"

namespace sosim {

Temperature Temperature::parse(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  Temperature t;
  if (!s.empty() && (s.back() == 'K' || s.back() == 'k')) {
    t.kelvin = true;
    s.pop_back();
  }
  std::size_t used = 0;
  try {
    t.value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse temperature '" + text + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw ValidationError("cannot parse temperature '" + text + "'");
  if (!(t.value > 0.0) || !std::isfinite(t.value)) throw ValidationError("temperature must be positive: '" + text + "'");
  return t;
}

Temperature Temperature::from_json(const nlohmann::json& j) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("temperature must be positive");
    return {v, false};
  }
  if (j.is_string()) return parse(j.get<std::string>());
  throw ValidationError("temperature must be a number or a string like \"300K\"");
}

std::string Temperature::str() const {
  std::ostringstream os;
  os.precision(12);
  os << value;
  if (kelvin) os << "K";
  return os.str();
}

void CostInputs::validate() const {
  if (!(N >= 1.0) || !std::isfinite(N)) throw ValidationError("cost: N must be ≥ 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("cost: delta must lie in (0, 1)");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw ValidationError("cost: kappa must lie in (0, 1]");
  if (omega0.has_value() != T.has_value()) throw ValidationError("cost: omega0 and T must be given together");
  if (omega0 && (!(*omega0 > 0.0) || !(*T >= 0.0))) throw ValidationError("cost: need omega0 > 0 and T ≥ 0");
  if (!omega0 && !(theta.value > 0.0)) throw ValidationError("cost: theta must be positive");
}

Temperature CostInputs::resolved_theta() const {
  if (omega0) return {noise_temperature(*omega0, *T), false};
  return theta;
}

CostInputs CostInputs::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("cost inputs must be a JSON object");
  CostInputs c;
  auto num = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ValidationError(std::string("cost: '") + key + "' must be a number");
    dst = j.at(key).get<double>();
  };
  if (j.contains("theta")) c.theta = Temperature::from_json(j.at("theta"));
  num("N", c.N);
  num("delta", c.delta);
  num("kappa", c.kappa);
  if (j.contains("omega0")) {
    double w = 0.0;
    num("omega0", w);
    c.omega0 = w;
  }
  if (j.contains("T")) {
    double t = 0.0;
    num("T", t);
    c.T = t;
  }
  c.validate();
  return c;
}

nlohmann::json CostInputs::to_json() const {
  nlohmann::json j = {{"theta", theta.str()}, {"N", N}, {"delta", delta}, {"kappa", kappa}};
  if (omega0) j["omega0"] = *omega0;
  if (T) j["T"] = *T;
  return j;
}

FailureProbability failure_probability(double N, double kappa, double w_bar, double theta) {
  if (!(N >= 1.0)) throw ValidationError("failure_probability: N must be ≥ 1");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw ValidationError("failure_probability: kappa must lie in (0, 1]");
  if (!(w_bar >= 0.0)) throw ValidationError("failure_probability: work must be non-negative");
  if (!(theta > 0.0)) throw ValidationError("failure_probability: theta must be positive");
  FailureProbability f;
  f.log_delta = std::log(N) - std::log(kappa) - w_bar / theta;
  if (f.log_delta >= 0.0) {
    f.clamped = true;
    f.delta = 1.0;
  } else {
    f.delta = std::exp(f.log_delta);
  }
  return f;
}

WorkEstimate min_total_work(const CostInputs& in) {
  in.validate();
  const Temperature th = in.resolved_theta();
  WorkEstimate w;
  const double logs = std::log(in.N) - std::log(in.delta) - std::log(in.kappa);
  w.per_gate = th.value * logs;
  w.natural = in.N * w.per_gate;
  w.landauer = th.value * in.N * std::log(2.0);
  if (th.kelvin) {
    w.joules = kBoltzmann * w.natural;
    w.landauer_joules = kBoltzmann * w.landauer;
  }
  // δκ ≫ 1/N, read as at least two decades of margin.
  if (std::log10(in.delta * in.kappa * in.N) < 2.0)
    w.warnings.push_back("delta*kappa is not much larger than 1/N; the failure estimate is outside its validity range");
  return w;
}

}  // namespace sosim
