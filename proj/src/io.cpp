#include "sosim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "sosim/errors.hpp"

namespace sosim {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw ValidationError("table row has " + std::to_string(row.size()) + " entries, expected " +
                          std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

nlohmann::json Table::to_json() const {
  nlohmann::json out = {{"columns", columns}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) out["rows"].push_back(r);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json canonical_json(const nlohmann::json& j) {
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonical_json(it.value());
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(canonical_json(v));
    return out;
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v).c_str(), nullptr);
  }
  return j;
}

std::string dump_json(const nlohmann::json& j) { return canonical_json(j).dump(2) + "\n"; }

void write_csv(std::ostream& os, const Table& table, const nlohmann::json& config) {
  os << "# config: " << canonical_json(config).dump() << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
}

SweepSpec SweepSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 5) throw ValidationError("sweep '" + text + "' must have the form param:min:max:count:lin|log");
  SweepSpec s;
  s.param = parts[0];
  auto number = [&](const std::string& field, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0') throw ValidationError("sweep '" + text + "': bad " + what + " '" + field + "'");
    return v;
  };
  s.min = number(parts[1], "min");
  s.max = number(parts[2], "max");
  const double count = number(parts[3], "count");
  if (count != std::floor(count)) throw ValidationError("sweep '" + text + "': count must be an integer");
  s.count = static_cast<int>(count);
  if (parts[4] == "lin")
    s.scale = SweepScale::lin;
  else if (parts[4] == "log")
    s.scale = SweepScale::log;
  else
    throw ValidationError("sweep '" + text + "': scale must be lin or log");
  s.validate();
  return s;
}

void SweepSpec::validate() const {
  if (param.empty()) throw ValidationError("sweep parameter name is empty");
  if (!std::isfinite(min) || !std::isfinite(max)) throw ValidationError("sweep " + param + ": bounds must be finite");
  if (min > max) throw ValidationError("sweep " + param + ": min must not exceed max");
  if (count < 2) throw ValidationError("sweep " + param + ": count must be at least 2");
  if (scale == SweepScale::log && min <= 0.0) throw ValidationError("sweep " + param + ": log scale needs min > 0");
}

std::vector<double> SweepSpec::values() const {
  validate();
  return scale == SweepScale::lin ? linspace(min, max, count) : logspace(min, max, count);
}

std::string SweepSpec::str() const {
  return param + ":" + format_number(min) + ":" + format_number(max) + ":" + std::to_string(count) + ":" +
         (scale == SweepScale::lin ? "lin" : "log");
}

std::vector<std::vector<std::pair<std::string, double>>> sweep_points(const std::vector<SweepSpec>& sweeps) {
  std::vector<std::vector<std::pair<std::string, double>>> points(1);
  for (const auto& s : sweeps) {
    std::vector<std::vector<std::pair<std::string, double>>> next;
    for (const auto& p : points)
      for (double v : s.values()) {
        auto q = p;
        q.emplace_back(s.param, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

namespace {

Subsystem subsystem_from_string(const std::string& s) {
  if (s == "observed") return Subsystem::observed;
  if (s == "spin") return Subsystem::spin;
  if (s == "oscillator") return Subsystem::oscillator;
  throw ValidationError("unknown subsystem '" + s + "'");
}

}  // namespace

nlohmann::json state_to_json(const QuantumState& s) {
  const Matrix& m = s.matrix();
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  std::vector<std::string> parts;
  for (auto p : s.parts()) parts.push_back(to_string(p));
  return {{"dim", s.dim()}, {"real_part", re}, {"imag_part", im}, {"parts", parts}, {"dims", s.dims()}};
}

QuantumState state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("real_part") || !j.contains("imag_part"))
    throw ValidationError("state JSON needs dim, real_part and imag_part");
  if (!j.at("dim").is_number_integer()) throw ValidationError("state field 'dim' must be an integer");
  const int n = j.at("dim").get<int>();
  if (n < 1) throw ValidationError("state field 'dim' must be positive");
  const auto re = j.at("real_part").get<std::vector<double>>();
  const auto im = j.at("imag_part").get<std::vector<double>>();
  const auto size = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (re.size() != size) throw ValidationError("state field 'real_part' must have dim^2 entries");
  if (im.size() != size) throw ValidationError("state field 'imag_part' must have dim^2 entries");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m(i, k) = cplx(re[i * n + k], im[i * n + k]);
  std::vector<Subsystem> parts;
  std::vector<int> dims;
  if (j.contains("parts")) {
    for (const auto& p : j.at("parts")) parts.push_back(subsystem_from_string(p.get<std::string>()));
    dims = j.at("dims").get<std::vector<int>>();
  } else {
    parts = {Subsystem::oscillator};
    dims = {n};
  }
  return QuantumState(std::move(m), std::move(parts), std::move(dims));
}

Table trajectory_table(const Trajectory& traj, const std::vector<std::pair<std::string, Matrix>>& observables) {
  Table t;
  t.columns = {"t", "trace", "min_eig"};
  for (const auto& [name, op] : observables) t.columns.push_back(name);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Matrix& rho = traj.states[k].matrix();
    std::vector<double> row = {traj.times[k], rho.trace().real(), min_eigenvalue(0.5 * (rho + rho.adjoint()))};
    for (const auto& [name, op] : observables) {
      if (op.rows() != rho.rows()) throw ValidationError("observable '" + name + "' has the wrong dimension");
      row.push_back((op * rho).trace().real());
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace sosim
