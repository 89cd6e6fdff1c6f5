#include <doctest.h>

#include <random>

#include "t2t/rf_propagation.hpp"

using namespace t2t;
using namespace t2t::rf;

namespace {
const RfEnvironment kEnv = RfEnvironment::standard();
const Position kE{0.0, 0.0};
}  // namespace

TEST_CASE("wavelength and table defaults") {
  CHECK(kEnv.wavelength() == doctest::Approx(0.345383016129).epsilon(1e-12));
  CHECK(kEnv.exciter_boresight_gain() == doctest::Approx(2.51188643).epsilon(1e-8));
  CHECK(kEnv.tag_sensitivity() == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK(kEnv.exciter_power() == doctest::Approx(1.99526231).epsilon(1e-8));
}

TEST_CASE("exciter gain patterns") {
  CHECK(exciter_gain_toward(kEnv, kE, {3.0, 7.0}) == doctest::Approx(2.51188643).epsilon(1e-8));
  const auto sector = kEnv.with_gain_pattern(GainPattern::kSector);
  // Beam points at -45 deg, 40 deg wide.
  CHECK(exciter_gain_toward(sector, kE, {1.0, -1.0}) == doctest::Approx(2.51188643).epsilon(1e-8));
  CHECK(exciter_gain_toward(sector, kE, {1.0, 1.0}) == doctest::Approx(0.01));
  CHECK_THROWS_AS(exciter_gain_toward(kEnv, kE, kE), DomainError);
}

TEST_CASE("available power") {
  CHECK(available_power(kEnv, kE, {3.0, 0.0}) == doctest::Approx(4.20668233734e-4).epsilon(1e-9));
  const double p3 = available_power(kEnv, kE, {3.0, 0.0});
  const double p6 = available_power(kEnv, kE, {6.0, 0.0});
  CHECK(p3 / p6 == doctest::Approx(4.0).epsilon(1e-14));
  const auto half = kEnv.with_exciter_gain(kEnv.exciter_boresight_gain() / 2.0);
  CHECK(available_power(half, kE, {3.0, 0.0}) == doctest::Approx(p3 / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(available_power(kEnv, kE, kE), DomainError);
}

TEST_CASE("received power and link liveness") {
  const Position tx{3.0, 0.0};
  CHECK(received_power(kEnv, kE, tx, {3.0, 2.0}) == doctest::Approx(1.27110649194e-8).epsilon(1e-9));
  CHECK(received_power(kEnv, kE, tx, {3.0, 3.0}) == doctest::Approx(5.64936218642e-9).epsilon(1e-9));
  CHECK(link_alive(kEnv, kE, tx, {3.0, 2.0}));
  CHECK_FALSE(link_alive(kEnv, kE, tx, {3.0, 3.0}));
  const auto k2 = kEnv.with_k0(2.0 * kEnv.k0());
  CHECK(received_power(k2, kE, tx, {3.0, 2.0}) ==
        doctest::Approx(4.0 * received_power(kEnv, kE, tx, {3.0, 2.0})).epsilon(1e-14));
  CHECK_THROWS_AS(received_power(kEnv, kE, tx, tx), DomainError);
  CHECK_THROWS_AS(link_alive(kEnv, kE, kE, tx), DomainError);
}

TEST_CASE("received power properties over random geometry") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.2, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const Position tx{a, 0.0};
    // rx on a circle of radius b around tx: move farther from tx.
    const double near = received_power(kEnv, kE, tx, {a, b});
    const double far = received_power(kEnv, kE, tx, {a, b + c});
    CHECK(far < near);
    const double nearer_tx = received_power(kEnv, kE, {a, 0.0}, {a + b, 0.0});
    const double farther_tx = received_power(kEnv, kE, {a + c, 0.0}, {a + c + b, 0.0});
    CHECK(farther_tx < nearer_tx);

    const Position n{u(rng), u(rng)}, m{u(rng), u(rng)};
    if (distance(n, m) < 1e-6) continue;
    const double ratio = received_power(kEnv, kE, n, m) / received_power(kEnv, kE, m, n);
    const double expect = (exciter_gain_toward(kEnv, kE, n) / exciter_gain_toward(kEnv, kE, m)) *
                          std::pow(distance(kE, m) / distance(kE, n), 2);
    CHECK(ratio == doctest::Approx(expect).epsilon(1e-12));

    const double s = u(rng);
    const auto scaled = kEnv.with_exciter_power(kEnv.exciter_power() * s);
    CHECK(available_power(scaled, kE, n) ==
          doctest::Approx(s * available_power(kEnv, kE, n)).epsilon(1e-12));
    const auto f2 = kEnv.with_carrier_frequency(kEnv.carrier_frequency() / s);
    CHECK(available_power(f2, kE, n) ==
          doctest::Approx(s * s * available_power(kEnv, kE, n)).epsilon(1e-12));
  }
}

TEST_CASE("cancellation angle") {
  const auto theta = cancellation_angle(0.4, 0.9, kEnv.wavelength(), 3.0, 3.0, 2.0, 1.0);
  REQUIRE(theta);
  CHECK(*theta == doctest::Approx(1.57972897541).epsilon(1e-10));
  const auto zero = cancellation_angle(0.0, 0.0, kEnv.wavelength(), 3.0, 3.0, 2.0, 1.0);
  REQUIRE(zero);
  CHECK(*zero == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK_FALSE(cancellation_angle(0.4, 0.9, kEnv.wavelength(), 300.0, 0.01, 0.01, 1.0));
  const auto via_env = phase_cancellation_angle(kEnv, kE, {3.0, 0.0}, {3.0 * std::cos(0.7297), 3.0 * std::sin(0.7297)}, 1.0);
  CHECK(via_env.has_value());
}

TEST_CASE("phase difference of arrival") {
  CHECK(phase_difference_of_arrival(kEnv, kE, {3.0, 0.0}, {3.0, 2.0}) ==
        doctest::Approx(0.234979036793).epsilon(1e-9));
  // Excess path of exactly one wavelength: tx behind the exciter on the rx line.
  const double lam = kEnv.wavelength();
  const double p = phase_difference_of_arrival(kEnv, kE, {-lam / 2.0, 0.0}, {1.0, 0.0});
  CHECK((p < 1e-9 || p > kTwoPi - 1e-9));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const Position tx{u(rng), u(rng)}, rx{u(rng), u(rng)};
    if (distance(tx, kE) < 1e-6 || distance(tx, rx) < 1e-6) continue;
    const double ph = phase_difference_of_arrival(kEnv, kE, tx, rx);
    CHECK(ph >= 0.0);
    CHECK(ph < kTwoPi);
  }
}

TEST_CASE("cancellation band") {
  CHECK(is_cancelled(1.0, 1.1));
  CHECK_FALSE(is_cancelled(1.0, 1.3));
  CHECK(is_cancelled(kTwoPi - 1.0, 1.0));  // negative branch
  CHECK_FALSE(is_cancelled(1.0, std::nullopt));
  CHECK(is_cancelled(1.0, 1.25, 0.3));
}
