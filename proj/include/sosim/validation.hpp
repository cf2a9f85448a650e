#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sosim/lindblad.hpp"

namespace sosim {

/// Integrator health accumulated over oracle runs.
struct HygieneLog {
  int runs = 0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_hermiticity_defect = 0.0;

  void absorb(double trace_drift, double min_eig, double herm_defect);
  void absorb(const Trajectory& t);
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  nlohmann::json metrics = nlohmann::json::object();
};

inline constexpr int kCriterionCount = 10;

/// Runs one acceptance criterion (1–10). Oracle runs feed `log`; criterion 10
/// evaluates the log, first filling it with its own runs when it is empty.
CheckResult run_criterion(int id, HygieneLog& log);

/// All criteria in order, sharing one hygiene log.
std::vector<CheckResult> run_all_criteria();

/// "[PASS] C3 tunneling, zero T: ..." style line.
std::string format_result_line(const CheckResult& r);

}  // namespace sosim
