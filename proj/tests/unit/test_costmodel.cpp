#include <doctest.h>

#include <cmath>
#include <limits>

#include "sosim/costmodel.hpp"
#include "sosim/errors.hpp"

using namespace sosim;

TEST_CASE("temperature parsing") {
  const Temperature k = Temperature::parse("300K");
  CHECK(k.kelvin);
  CHECK(k.value == 300.0);
  CHECK(k.str() == "300K");
  const Temperature n = Temperature::parse("1.5");
  CHECK_FALSE(n.kelvin);
  CHECK(n.value == 1.5);
  CHECK(Temperature::from_json(nlohmann::json(2.0)).value == 2.0);
  CHECK_THROWS_AS(Temperature::parse("hot"), ValidationError);
  CHECK_THROWS_AS(Temperature::parse("-3K"), ValidationError);
  CHECK_THROWS_AS(Temperature::from_json(nlohmann::json::array()), ValidationError);
}

TEST_CASE("failure probability") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(failure_probability(1e6, 1e-8, inf, 1.0).delta == 0.0);
  CHECK(failure_probability(1.0, 1.0, std::log(2.0), 1.0).delta == doctest::Approx(0.5).epsilon(1e-15));
  const FailureProbability f = failure_probability(1e6, 1e-8, 40.0, 1.0);
  CHECK(f.delta == doctest::Approx(0.0004248354255291589).epsilon(1e-12));
  CHECK(f.log_delta == doctest::Approx(14.0 * std::log(10.0) - 40.0).epsilon(1e-14));
  CHECK_FALSE(f.clamped);
  const FailureProbability c = failure_probability(1e6, 1e-8, 1.0, 1.0);
  CHECK(c.clamped);
  CHECK(c.delta == 1.0);
  CHECK_THROWS_AS(failure_probability(0.5, 1e-8, 1.0, 1.0), ValidationError);
}

TEST_CASE("minimal total work") {
  CostInputs single;
  single.N = 1.0;
  single.delta = 0.5;
  single.kappa = 1.0;
  single.theta = {0.8, false};
  CHECK(min_total_work(single).natural == doctest::Approx(0.8 * std::log(2.0)).epsilon(1e-15));
  CHECK_FALSE(min_total_work(single).joules.has_value());

  const CostInputs sc = CostInputs::from_json({{"N", 1e21}, {"kappa", 1e-8}, {"delta", 1e-4}, {"theta", "300K"}});
  const WorkEstimate w = min_total_work(sc);
  REQUIRE(w.joules.has_value());
  CHECK(*w.joules == doctest::Approx(314.72711879965647).epsilon(1e-12));
  CHECK(std::abs(std::log10(*w.joules) - 2.0) <= 0.5);
  CHECK(*w.landauer_joules == doctest::Approx(2.870978885078724).epsilon(1e-12));
  CHECK(*w.joules / *w.landauer_joules == doctest::Approx(109.6).epsilon(1e-3));
  CHECK(w.warnings.empty());

  // Round trip: the per-gate work gives back δ.
  const FailureProbability back = failure_probability(sc.N, sc.kappa, w.per_gate, 300.0);
  CHECK(back.delta == doctest::Approx(sc.delta).epsilon(1e-12));

  // δκ close to 1/N triggers the validity warning.
  CostInputs edge = sc;
  edge.N = 1e6;
  edge.delta = 0.5;
  CHECK_FALSE(min_total_work(edge).warnings.empty());
}

TEST_CASE("cost inputs from JSON") {
  const CostInputs c = CostInputs::from_json({{"N", 100.0}, {"omega0", 1.0}, {"T", 1.0}});
  CHECK(c.resolved_theta().value == doctest::Approx(1.0819767068693265).epsilon(1e-13));
  CHECK_THROWS_AS(CostInputs::from_json({{"omega0", 1.0}}), ValidationError);
  CHECK_THROWS_AS(CostInputs::from_json({{"delta", 1.5}}), ValidationError);
  CHECK_THROWS_AS(CostInputs::from_json({{"N", "many"}}), ValidationError);
  CHECK(CostInputs::from_json(c.to_json()).N == 100.0);
}
