#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sosim/commands.hpp"
#include "sosim/errors.hpp"
#include "sosim/io.hpp"

using namespace sosim;

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e21) == "1e+21");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("canonical JSON") {
  nlohmann::json j = {{"b", 1.0 / 3.0}, {"a", std::numeric_limits<double>::infinity()}, {"c", {1, 2.5}}};
  const std::string s = dump_json(j);
  CHECK(s == "{\n  \"a\": null,\n  \"b\": 0.333333333333,\n  \"c\": [\n    1,\n    2.5\n  ]\n}\n");
}

TEST_CASE("CSV layout") {
  Table t;
  t.columns = {"x", "y"};
  t.add_row({1.0, 0.5});
  t.add_row({2.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(t.add_row({1.0}), ValidationError);
  std::ostringstream os;
  write_csv(os, t, {{"k", 1}});
  CHECK(os.str() == "# config: {\"k\":1}\nx,y\n1,0.5\n2,nan\n");
}

TEST_CASE("sweep specs") {
  const SweepSpec s = SweepSpec::parse("D:0.5:1.5:3:lin");
  CHECK(s.param == "D");
  CHECK(s.values() == std::vector<double>{0.5, 1.0, 1.5});
  const SweepSpec g = SweepSpec::parse("T:0.01:1:3:log");
  CHECK(g.values()[1] == doctest::Approx(0.1));
  CHECK(g.str() == "T:0.01:1:3:log");
  CHECK_THROWS_AS(SweepSpec::parse("D:2:1:3:lin"), ValidationError);
  CHECK_THROWS_AS(SweepSpec::parse("D:0:1:1:lin"), ValidationError);
  CHECK_THROWS_AS(SweepSpec::parse("D:0:1:3:cubic"), ValidationError);
  CHECK_THROWS_AS(SweepSpec::parse("D:0:1:3:log"), ValidationError);
  CHECK_THROWS_AS(SweepSpec::parse("D:0:1"), ValidationError);
  const auto pts = sweep_points({s, SweepSpec::parse("T:0:1:2:lin")});
  CHECK(pts.size() == 6);
  CHECK(pts[1][1].second == 1.0);
  CHECK(sweep_points({}).size() == 1);
}

TEST_CASE("state JSON round trip") {
  const FockRep rep(6);
  const QuantumState s = displaced_thermal_state({cplx(0.2, 0.1), 1.0, 0.5}, rep, 1e-3);
  const QuantumState back = state_from_json(state_to_json(s));
  CHECK(back.same_layout(s));
  CHECK((back.matrix() - s.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const auto bare = state_from_json({{"dim", 2}, {"real_part", {0.5, 0, 0, 0.5}}, {"imag_part", {0, 0, 0, 0}}});
  CHECK(bare.dim() == 2);
  CHECK_THROWS_AS(state_from_json({{"dim", 2}, {"real_part", {1.0}}, {"imag_part", {0.0}}}), ValidationError);
}

TEST_CASE("trajectory table") {
  GeneratorSpec zero;
  zero.hamiltonian = Matrix::Zero(3, 3);
  const QuantumState s = QuantumState::oscillator(Matrix::Identity(3, 3) / 3.0);
  const Trajectory traj = evolve(zero, s, linspace(0.0, 1.0, 3));
  const Table t = trajectory_table(traj, {{"n", FockRep(3).number()}});
  CHECK(t.columns == std::vector<std::string>{"t", "trace", "min_eig", "n"});
  CHECK(t.rows.size() == 3);
  CHECK(t.rows[2][3] == doctest::Approx(1.0));
}

TEST_CASE("tunneling command") {
  RunConfig cfg;
  cfg.command = "tunneling";
  const CommandOutput out = run_command(cfg);
  CHECK(out.exit_code == 0);
  REQUIRE(out.table.rows.size() == 6);
  for (const auto& row : out.table.rows) {
    CHECK(row[2] == doctest::Approx(0.5 * 0.02 * std::exp(-4.0 * row[0] * row[0])).epsilon(1e-12));
    CHECK(std::abs(row[6] - 1.0) < 1e-3);
  }
  CHECK(render(cfg, out) == render(cfg, run_command(cfg)));

  cfg.params = {{"D", 0.0}, {"T", 0.5}};
  cfg.sweeps = {SweepSpec::parse("T:0:1:3:lin")};
  const CommandOutput flat = run_command(cfg);
  for (const auto& row : flat.table.rows) CHECK(row[2] == doctest::Approx(0.01).epsilon(1e-12));

  cfg.params = {{"gamma", 1.0}};
  CHECK_THROWS_AS(run_command(cfg), ValidationError);
}

TEST_CASE("decoherence command") {
  RunConfig cfg;
  cfg.command = "decoherence";
  cfg.params = {{"samples", 11}};
  const CommandOutput out = run_command(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.report["max_abs_diff"].get<double>() < 1e-5);

  // No damping and no dephasing: constant coherence.
  cfg.params = {{"G_o_omega0", 0.0}, {"G_o_0", 0.0}, {"G_3_0", 0.0}, {"samples", 6}};
  const CommandOutput still = run_command(cfg);
  for (const auto& row : still.table.rows) {
    CHECK(row[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row[2] == doctest::Approx(0.5).epsilon(1e-7));
  }

  // D = 0 and equal pointers: only spin dephasing acts.
  cfg.params = {{"D", 0.0}, {"G_3_0", 0.0}, {"alpha_plus", 0.5}, {"alpha_minus", 0.5}, {"samples", 6}};
  const CommandOutput flat = run_command(cfg);
  for (const auto& row : flat.table.rows) CHECK(row[1] == doctest::Approx(0.5).epsilon(1e-12));

  cfg.params = {{"T", 0.5}};
  CHECK_THROWS_AS(run_command(cfg), UnsupportedRegime);
}

TEST_CASE("szilard and cost commands") {
  RunConfig s;
  s.command = "szilard";
  const CommandOutput sz = run_command(s);
  CHECK(std::abs(sz.report["eps_bar"].get<double>() - 0.06) <= 0.01);
  CHECK(std::abs(sz.report["eta_bar"].get<double>() - 0.17) <= 0.01);
  CHECK(sz.table.rows.size() == 64);

  RunConfig c;
  c.command = "cost";
  c.format = OutputFormat::json;
  const CommandOutput co = run_command(c);
  CHECK(std::abs(co.report["log10_work_joules"].get<double>() - 2.0) <= 0.5);
  const auto parsed = nlohmann::json::parse(render(c, co));
  CHECK(parsed["config"]["params"]["theta"] == "300K");

  RunConfig v;
  v.command = "validate";
  v.sweeps = {SweepSpec::parse("D:0:1:2:lin")};
  CHECK_THROWS_AS(run_command(v), ValidationError);
  v.sweeps.clear();
  v.params = {{"criteria", {5, 7}}};
  const CommandOutput vo = run_command(v);
  CHECK(vo.exit_code == 0);
  CHECK(vo.table.rows.size() == 2);
  v.params = {{"criteria", {11}}};
  CHECK_THROWS_AS(run_command(v), ValidationError);
}
