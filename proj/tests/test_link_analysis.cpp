#include <doctest.h>

#include <cmath>
#include <random>

#include "t2t/link_analysis.hpp"

using namespace t2t;
using namespace t2t::analysis;

namespace {
const rf::RfEnvironment kEnv = rf::RfEnvironment::standard();
const rf::Position kE{0.0, 0.0};
}  // namespace

TEST_CASE("line topology cumulative lengths") {
  LineTopology line({3.0, 1.5, 1.0, 0.5});
  CHECK(line.tag_count() == 4);
  CHECK(line.cumulative(1, 4) == doctest::Approx(6.0));
  CHECK(line.cumulative(2, 3) == doctest::Approx(2.5));
  CHECK(line.cumulative(3, 2) == 0.0);
  CHECK(LineTopology::equally_spaced(5, 2.0).cumulative(1, 5) == doctest::Approx(10.0));
}

TEST_CASE("asymmetry ratio") {
  // Forward from the nearer tag: ratio > 1.
  CHECK(asymmetry_ratio(kEnv, kE, {1.0, 0.0}, {3.0, 0.0}) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(asymmetry_ratio(kEnv, kE, {3.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(asymmetry_ratio(kEnv, kE, {0.0, 2.0}, {2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(asymmetry_ratio(kEnv, kE, {1.5, 0.0}, {0.0, 3.0}) == doctest::Approx(4.0).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  const auto sector = kEnv.with_gain_pattern(rf::GainPattern::kSector);
  for (int i = 0; i < 1000; ++i) {
    const rf::Position n{u(rng), u(rng)}, m{u(rng), u(rng)};
    for (const auto& env : {kEnv, sector}) {
      CHECK(asymmetry_ratio(env, kE, n, m) ==
            doctest::Approx(rf::received_power(env, kE, n, m) / rf::received_power(env, kE, m, n))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("backward multi-hop gain") {
  for (std::size_t n = 3; n <= 50; ++n) {
    const auto line = LineTopology::equally_spaced(n, 0.05 * static_cast<double>(n));
    CHECK(optimal_relay_index(line) == 2);
    for (std::size_t i = 2; i < n; ++i) {
      CHECK(backward_multihop_gain(line, i) == doctest::Approx(equal_spacing_gain(n, i)).epsilon(1e-12));
    }
  }
  CHECK(equal_spacing_gain(3, 2) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(equal_spacing_gain(4, 2) == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(optimal_relay_index(LineTopology::equally_spaced(5, 0.3)) == 2);
  CHECK(optimal_relay_index(LineTopology::equally_spaced(3, 4.0)) == 2);

  const LineTopology odd({1.0, 0.1, 5.0, 5.0});
  std::size_t brute = 2;
  for (std::size_t i = 3; i < 4; ++i) {
    if (odd.cumulative(1, i) * odd.cumulative(2, i) < odd.cumulative(1, brute) * odd.cumulative(2, brute)) brute = i;
  }
  CHECK(optimal_relay_index(odd) == brute);
  CHECK_THROWS_AS(optimal_relay_index(LineTopology::equally_spaced(2, 1.0)), ConfigError);
  CHECK_THROWS(backward_multihop_gain(LineTopology::equally_spaced(4, 1.0), 1));
  CHECK_THROWS(backward_multihop_gain(LineTopology::equally_spaced(4, 1.0), 4));
}

TEST_CASE("gain exceeds one and the best relay is tag 2") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::uniform_int_distribution<std::size_t> tags(3, 12);
  for (int g = 0; g < 2000; ++g) {
    const std::size_t n = tags(rng);
    std::vector<double> s(n);
    for (auto& x : s) x = u(rng);
    LineTopology line(s);
    for (std::size_t i = 2; i < n; ++i) CHECK(backward_multihop_gain(line, i) > 1.0);
    CHECK(optimal_relay_index(line) == 2);
  }
}

TEST_CASE("spacing epsilon and optimal spacing") {
  const double ge = kEnv.exciter_boresight_gain();
  const double eps = spacing_epsilon(kEnv, ge);
  CHECK(eps == doctest::Approx(6.76460151894).epsilon(1e-10));
  const double d2 = optimal_spacing(kEnv, 3.0, ge);
  CHECK(d2 == doctest::Approx(1.50243260023).epsilon(1e-10));
  CHECK(std::abs(d2 * d2 + 3.0 * d2 - eps) < 1e-9 * eps);
  CHECK(optimal_spacing(kEnv, 0.0, ge) == doctest::Approx(std::sqrt(eps)).epsilon(1e-14));
  CHECK(optimal_spacing(kEnv, LineTopology({3.0}), 2, ge) == doctest::Approx(d2).epsilon(1e-14));

  // Back-substitution: tag at 3 + d2 reaching tag at 3 sits on the sensitivity.
  const double p = rf::received_power(kEnv, kE, {3.0 + d2, 0.0}, {3.0, 0.0});
  CHECK(p == doctest::Approx(kEnv.tag_sensitivity()).epsilon(1e-6));
  CHECK_THROWS_AS(spacing_epsilon(kEnv, 0.0), ConfigError);
}

TEST_CASE("fraunhofer distance and range ladder") {
  CHECK(fraunhofer_distance(0.17, kEnv.wavelength()) == doctest::Approx(0.167350440817).epsilon(1e-10));
  const auto ladder = max_range_ladder(kEnv, 3.0, kDefaultAntennaDimension, 1000);
  REQUIRE(ladder.size() == 122);
  CHECK(ladder[0].range_m == doctest::Approx(3.0));
  CHECK(ladder[1].spacing_m == doctest::Approx(1.50243260023).epsilon(1e-10));
  CHECK(ladder[2].spacing_m == doctest::Approx(1.18863491016).epsilon(1e-10));
  CHECK(ladder[3].spacing_m == doctest::Approx(1.00954910655).epsilon(1e-10));
  CHECK(ladder[4].spacing_m == doctest::Approx(0.891055538306).epsilon(1e-10));
  CHECK(ladder[4].range_m == doctest::Approx(7.59167215524).epsilon(1e-10));
  CHECK(ladder.back().range_m == doctest::Approx(40.366190061).epsilon(1e-9));
  for (std::size_t i = 2; i < ladder.size(); ++i) {
    CHECK(ladder[i].spacing_m < ladder[i - 1].spacing_m);
    CHECK(ladder[i].range_m > ladder[i - 1].range_m);
  }
  const double df = fraunhofer_distance(0.17, kEnv.wavelength());
  CHECK(ladder.back().spacing_m >= df);
  CHECK(optimal_spacing(kEnv, ladder.back().range_m, kEnv.exciter_boresight_gain()) < df);

  CHECK(max_range_ladder(kEnv, 3.0, kDefaultAntennaDimension, 4).size() == 4);
}
