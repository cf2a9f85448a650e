#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sosim/lindblad.hpp"
#include "sosim/state.hpp"

namespace sosim {

/// Numeric table with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  nlohmann::json to_json() const;
};

/// "%.12g" with '.' separator; non-finite values print as nan, inf, -inf.
std::string format_number(double v);

/// Copy of `j` with doubles rounded to 12 significant digits and non-finite
/// doubles replaced by null. Object keys are already sorted.
nlohmann::json canonical_json(const nlohmann::json& j);

/// Pretty-printed canonical JSON followed by a newline.
std::string dump_json(const nlohmann::json& j);

/// "# config: {...}" line, header row, then one line per row.
void write_csv(std::ostream& os, const Table& table, const nlohmann::json& config);

enum class SweepScale { lin, log };

/// "param:min:max:count:lin|log".
struct SweepSpec {
  std::string param;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  SweepScale scale = SweepScale::lin;

  static SweepSpec parse(const std::string& text);
  void validate() const;
  std::vector<double> values() const;
  std::string str() const;
};

/// Cartesian product of sweeps, first sweep slowest. One empty point when
/// `sweeps` is empty.
std::vector<std::vector<std::pair<std::string, double>>> sweep_points(const std::vector<SweepSpec>& sweeps);

/// {dim, real_part, imag_part} with row-major arrays, plus the factor layout.
nlohmann::json state_to_json(const QuantumState& s);
QuantumState state_from_json(const nlohmann::json& j);

/// Columns t, trace, min_eig followed by ⟨O⟩ (real part) for each observable.
Table trajectory_table(const Trajectory& traj, const std::vector<std::pair<std::string, Matrix>>& observables = {});

}  // namespace sosim
