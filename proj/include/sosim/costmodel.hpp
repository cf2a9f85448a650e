#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sosim {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

/// A temperature either in natural units or tagged as kelvin ("300K").
struct Temperature {
  double value = 0.0;
  bool kelvin = false;

  static Temperature parse(const std::string& text);
  static Temperature from_json(const nlohmann::json& j);
  std::string str() const;
};

struct CostInputs {
  Temperature theta{1.0, false};
  double N = 1.0;
  double delta = 0.5;
  double kappa = 1.0;
  // When set, Θ is derived from ω₀ and T as the noise temperature.
  std::optional<double> omega0;
  std::optional<double> T;

  void validate() const;
  Temperature resolved_theta() const;
  static CostInputs from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct FailureProbability {
  double delta = 0.0;
  double log_delta = 0.0;
  bool clamped = false;  // raw value ≥ 1, reported as 1
};

/// δ = (1/κ) N e^{−W̄/Θ}, evaluated in log space.
FailureProbability failure_probability(double N, double kappa, double w_bar, double theta);

struct WorkEstimate {
  double natural = 0.0;             // units of Θ's scale
  std::optional<double> joules;     // present when Θ is kelvin-tagged
  double per_gate = 0.0;            // Θ (ln N + ln 1/δ + ln 1/κ)
  double landauer = 0.0;            // Θ N ln 2 at the same temperature
  std::optional<double> landauer_joules;
  std::vector<std::string> warnings;
};

/// W̄_N = Θ N (ln N + ln 1/δ + ln 1/κ). Warns unless δκ ≫ 1/N.
WorkEstimate min_total_work(const CostInputs& in);

}  // namespace sosim
