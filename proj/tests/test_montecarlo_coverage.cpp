#include <doctest.h>

#include <cmath>
#include <sstream>

#include "t2t/montecarlo_coverage.hpp"

using namespace t2t;
using namespace t2t::coverage;

namespace {

CoverageExperiment experiment(double side, std::vector<std::size_t> counts, std::size_t runs) {
  CoverageExperiment e;
  e.area_side = side;
  e.tag_counts = std::move(counts);
  e.runs_per_point = runs;
  e.base_seed = 2024;
  return e;
}

// Pair-connectivity probabilities from tests/oracles/coverage_pair_oracle.py.
constexpr double kPairS30 = 8.543556e-04;
constexpr double kPairS8 = 9.470787e-02;

void check_against(double estimate, double oracle, std::size_t n) {
  const double sigma = std::sqrt(oracle * (1.0 - oracle) / static_cast<double>(n));
  CHECK(std::abs(estimate - oracle) <= 4.0 * sigma);
}

}  // namespace

TEST_CASE("wilson half-width") {
  CHECK(wilson_halfwidth(50, 100) == doctest::Approx(0.09616846963400436).epsilon(1e-12));
  CHECK(wilson_halfwidth(0, 1000) == doctest::Approx(0.0019133792427775617).epsilon(1e-12));
  CHECK(wilson_halfwidth(1000, 1000) == doctest::Approx(0.0019133792427775617).epsilon(1e-12));
  CHECK(wilson_halfwidth(0, 0) == 0.0);
}

TEST_CASE("single tag is trivially connected") {
  const auto pts = run_coverage(experiment(30.0, {1}, 50));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].sh_probability == 1.0);
  CHECK(pts[0].mh_probability == 1.0);
}

TEST_CASE("tiny area keeps every link alive") {
  auto e = experiment(1.5, {2, 4, 6}, 200);
  e.exciter = {0.0, 0.0};
  for (const auto& p : run_coverage(e)) {
    CHECK(p.sh_probability == 1.0);
    CHECK(p.mh_probability == 1.0);
  }
}

TEST_CASE("pair connectivity matches the integration oracle") {
  const std::size_t runs30 = 400000;
  const auto p30 = run_coverage(experiment(30.0, {2}, runs30))[0];
  CHECK(p30.mh_probability == p30.sh_probability);
  check_against(p30.sh_probability, kPairS30, runs30);

  const std::size_t runs8 = 20000;
  const auto p8 = run_coverage(experiment(8.0, {2}, runs8))[0];
  CHECK(p8.mh_probability == p8.sh_probability);
  check_against(p8.sh_probability, kPairS8, runs8);
}

TEST_CASE("shape properties on a small area") {
  auto e = experiment(3.0, {2, 3, 4, 5, 6, 8, 10}, 400);
  const auto off = run_coverage(e);
  e.cancellation = topology::GeometricCancellation{};
  const auto geo = run_coverage(e);
  for (std::size_t i = 0; i < off.size(); ++i) {
    CHECK(off[i].mh_probability >= off[i].sh_probability - off[i].confidence_halfwidth);
    CHECK(geo[i].mh_probability >= geo[i].sh_probability - geo[i].confidence_halfwidth);
    CHECK(geo[i].sh_probability <= off[i].sh_probability + off[i].confidence_halfwidth);
    CHECK(geo[i].mh_probability <= off[i].mh_probability + off[i].confidence_halfwidth);
    if (i > 0) {
      CHECK(off[i].sh_probability <=
            off[i - 1].sh_probability + off[i].confidence_halfwidth + off[i - 1].confidence_halfwidth);
    }
  }
  CHECK(off.back().sh_probability < off.front().sh_probability);
}

TEST_CASE("identical seeds give identical csv") {
  auto e = experiment(5.0, {2, 3, 4}, 300);
  e.cancellation = topology::BernoulliCancellation{0.2};
  std::ostringstream a, b;
  write_coverage_csv(a, run_coverage(e), e.cancellation);
  write_coverage_csv(b, run_coverage(e), e.cancellation);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("N,sh_prob,mh_prob,ci,mode,seed\n", 0) == 0);
  e.base_seed = 7;
  std::ostringstream c;
  write_coverage_csv(c, run_coverage(e), e.cancellation);
  CHECK(c.str() != a.str());
}

TEST_CASE("experiment validation") {
  CHECK_THROWS_AS(run_coverage(experiment(30.0, {}, 10)), ConfigError);
  CHECK_THROWS_AS(run_coverage(experiment(30.0, {2}, 0)), ConfigError);
}

TEST_CASE("max range curve") {
  const auto env = rf::RfEnvironment::standard();
  const auto steps = run_max_range_curve(env, 3.0, analysis::kDefaultAntennaDimension, 1000);
  REQUIRE(steps.size() == 122);
  const double df = analysis::fraunhofer_distance(analysis::kDefaultAntennaDimension, env.wavelength());
  for (std::size_t i = 1; i < steps.size(); ++i) {
    CHECK(steps[i].range_m >= steps[i - 1].range_m);
    if (i > 1) CHECK(steps[i].spacing_m < steps[i - 1].spacing_m);
    CHECK(steps[i].spacing_m >= df);
  }
  std::ostringstream csv;
  write_range_csv(csv, steps);
  CHECK(csv.str().rfind("N,range_m,d_N_m\n", 0) == 0);
}
