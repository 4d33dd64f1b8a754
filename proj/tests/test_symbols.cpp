#include <doctest.h>

#include <cmath>
#include <random>

#include "cylcs/errors.hpp"
#include "cylcs/symbols.hpp"
#include "oracles.hpp"

using namespace cylcs;

namespace {

QuantizeOptions generic() { return {QuantizeMethod::generic, 1e-12, Exec::parallel}; }

// Brute-force d_m(J) from the density itself.
double d_oracle(const ActionDistribution& d, double J, int m) {
  double num = 0.0, den = 0.0;
  for (int r = -200; r <= 200; ++r) {
    num += std::sqrt(d.density(J - r) * d.density(J - r - m));
    den += d.density(J - r);
  }
  return num / den;
}

}  // namespace

TEST_CASE("lower symbols of simple operators") {
  const auto h = ActionDistribution::uniform(0.5);
  const auto J = quantize(h, ObservableSpec::action(), 4);
  CHECK(std::abs(lower_symbol(h, J, PhasePoint(0.2, 1.0))) < 1e-15);
  CHECK(std::abs(lower_symbol(h, J, PhasePoint(1.3, 1.0)) - 1.0) < 1e-15);
  const auto J2 = quantize(h, ObservableSpec::action_squared(), 4);
  CHECK(std::abs(lower_symbol(h, J2, PhasePoint(0.2, 1.0)) - 1.0 / 12.0) < 1e-15);

  for (const auto& d : {ActionDistribution::gaussian(0.6), ActionDistribution::uniform(0.8)}) {
    const auto I = identity_operator(d, 20);
    CHECK(std::abs(lower_symbol(d, I, PhasePoint(0.4, 2.2)) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(lower_symbol(ActionDistribution::gaussian(2.0), J, PhasePoint(0, 0)), DimensionMismatch);
  const auto g = ActionDistribution::gaussian(1.0);
  CHECK_THROWS_AS(lower_symbol(g, quantize(g, ObservableSpec::action(), 2), PhasePoint(0, 0)), TruncationInsufficient);
}

TEST_CASE("angle lower symbol") {
  const auto u1 = ActionDistribution::uniform(1.0);
  CHECK(lower_symbol_angle_closed(u1, PhasePoint(0.2, oracle::pi)) == doctest::Approx(oracle::pi));
  CHECK(lower_symbol_angle_closed(ActionDistribution::uniform(0.5), PhasePoint(0.2, 1.0)) == doctest::Approx(oracle::pi));
  const PhasePoint p(0.5, oracle::pi / 2);
  CHECK(lower_symbol_angle_closed(u1, p) == doctest::Approx(oracle::pi - 0.5));
  CHECK(std::abs(lower_symbol(u1, angle_operator(u1, 6), p) - (oracle::pi - 0.5)) < 1e-14);
}

TEST_CASE("d coefficients") {
  for (const auto& d : {ActionDistribution::gaussian(0.7), ActionDistribution::uniform(0.75),
                        ActionDistribution::gaussian(3.0)}) {
    for (double J : {0.0, 0.3, -1.6}) {
      const auto dc = d_coefficients(d, J, 5);
      CHECK(dc.at(0) == doctest::Approx(1.0).epsilon(1e-14));
      for (int m = 1; m <= 5; ++m) {
        CHECK(std::abs(dc.at(m) - dc.at(-m)) < 1e-14);
        CHECK(dc.at(m) <= 1.0 + 1e-14);
        CHECK(dc.at(m) >= 0.0);
        CHECK(std::abs(dc.at(m) - d_oracle(d, J, m)) < 1e-12);
      }
    }
  }
  const auto u = d_coefficients(ActionDistribution::uniform(0.9), 0.4, 4);
  CHECK(u.at(2) == 0.0);
  CHECK(u.at(-3) == 0.0);
  const auto big = d_coefficients(ActionDistribution::gaussian(50.0), 0.0, 1);
  CHECK(std::abs(big.at(1) - 1.0) < 1e-3);
  CHECK(big.at(1) == doctest::Approx(oracle::d1_s50).epsilon(1e-12));
  CHECK(harmonic_cutoff(ActionDistribution::uniform(0.75)) == 1);
  CHECK(harmonic_cutoff(ActionDistribution::uniform(0.5)) == 0);
}

TEST_CASE("lower symbols from Fourier coefficients") {
  const auto u = ActionDistribution::uniform(0.8);
  const PhasePoint p(0.3, 0.9);
  CHECK(std::abs(lower_symbol_fourier(u, ObservableSpec::harmonic(1), p) - uniform_closed::harmonic(u, 1, p)) < 1e-14);
  CHECK(std::abs(lower_symbol_fourier(u, ObservableSpec::constant(1.0), p) - 1.0) < 1e-15);
  for (const auto& d : {ActionDistribution::gaussian(0.9), u}) {
    const auto f = ObservableSpec::saw(12);
    const auto A = quantize(d, f, 30);
    for (const PhasePoint q : {PhasePoint(0.1, 0.3), PhasePoint(-0.7, 4.0)})
      CHECK(std::abs(lower_symbol_fourier(d, f, q) - lower_symbol(d, A, q)) < 1e-9);
  }
  // the smoothed saw tends to B(phi) away from the jump as sigma grows
  double prev = 1.0;
  for (double s : {2.0, 5.0, 20.0}) {
    const double err = std::abs(lower_symbol_fourier(ActionDistribution::gaussian(s), ObservableSpec::saw(400),
                                                     PhasePoint(0.0, 1.0)) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("commutator lower symbol") {
  const auto u1 = ActionDistribution::uniform(1.0);
  CHECK(std::abs(commutator_lower_symbol(u1, PhasePoint(0.3, oracle::pi / 2))) < 1e-15);
  CHECK(std::abs(commutator_lower_symbol(u1, PhasePoint(0.3, 0.0)) - cdouble(0, 0.5)) < 1e-15);
  const auto g = ActionDistribution::gaussian(20.0);
  const auto v = commutator_lower_symbol(g, PhasePoint(0.0, oracle::pi));
  CHECK(std::abs(v - cdouble(0, -1)) < 5e-2);
  CHECK(std::abs(v.imag() - oracle::comm_symbol_s20_pi_imag) < 1e-9);
  CHECK(std::abs(v.real()) < 1e-15);
  // agrees with the lower symbol of the assembled operator
  const auto g1 = ActionDistribution::gaussian(1.0);
  const auto C = action_angle_commutator(g1, 30);
  for (const PhasePoint p : {PhasePoint(0.2, 0.5), PhasePoint(-0.4, 3.0)})
    CHECK(std::abs(commutator_lower_symbol(g1, p) - lower_symbol(g1, C, p)) < 1e-12);
}

TEST_CASE("uniform closed forms against assembled operators") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> J(-3.0, 3.0), phi(0.0, 2.0 * oracle::pi), sig(0.5, 1.0);
  for (int i = 0; i < 40; ++i) {
    const auto u = ActionDistribution::uniform(sig(rng));
    const PhasePoint p(J(rng), phi(rng));
    const int N = 8;
    CHECK(std::abs(uniform_closed::action(u, p) - lower_symbol(u, quantize(u, ObservableSpec::action(), N, generic()), p)) < 1e-9);
    CHECK(std::abs(uniform_closed::energy(u, p) - lower_symbol(u, quantize(u, ObservableSpec::action_squared(), N, generic()), p)) < 1e-9);
    CHECK(std::abs(uniform_closed::angle(u, p) - lower_symbol(u, quantize(u, ObservableSpec::saw(2 * N), N, generic()), p)) < 1e-9);
    for (int s : {1, -1}) {
      const auto H = quantize(u, ObservableSpec::harmonic(s), N, generic());
      CHECK(std::abs(uniform_closed::harmonic(u, s, p) - lower_symbol(u, H, p)) < 1e-9);
      const auto C = commutator(quantize(u, ObservableSpec::action_squared(), N, generic()), H);
      CHECK(std::abs(uniform_closed::energy_harmonic_commutator(u, s, p) - lower_symbol(u, C, p)) < 1e-9);
    }
    const auto AC = commutator(quantize(u, ObservableSpec::action(), N, generic()),
                               quantize(u, ObservableSpec::saw(2 * N), N, generic()));
    CHECK(std::abs(uniform_closed::action_angle_commutator(u, p) - lower_symbol(u, AC, p)) < 1e-9);
  }
  CHECK_THROWS_AS(uniform_closed::angle(ActionDistribution::gaussian(1.0), PhasePoint(0, 0)), ConfigError);
}

TEST_CASE("lower symbols of Hermitian operators are real") {
  const auto g = ActionDistribution::gaussian(0.8);
  const auto A = quantize(g, ObservableSpec::cosine(1.5), 20);
  const auto field = lower_symbol_field(g, A, PhaseGrid{-1, 1, 7, 8}.points());
  for (const auto& v : field.values) CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("relative error") {
  const auto u = ActionDistribution::uniform(0.75);
  const auto pts = PhaseGrid{-1, 1, 5, 4}.points();
  const auto c = relative_error(u, ObservableSpec::constant(2.5), 10, pts, 0.0);
  for (const auto& v : c.values) CHECK(std::abs(v) < 1e-15);
  const auto e = relative_error(u, ObservableSpec::action_squared(), 10, {PhasePoint(0.0, 0.0)}, 1.0);
  CHECK(e.values[0].real() == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK_THROWS_AS(relative_error(u, ObservableSpec::action(), 10, {PhasePoint(0.0, 0.0)}, 0.0), DenominatorVanishes);
  // integer actions are exact for the narrowest uniform distribution
  const auto h = ActionDistribution::uniform(0.5);
  CHECK(std::abs(relative_error(h, ObservableSpec::action(), 6, {PhasePoint(2.0, 0.4), PhasePoint(-1.0, 3.0)})
                     .values[0]) < 1e-15);
  // default C = 1 + |min f| keeps the denominator away from zero
  CHECK_NOTHROW(relative_error(u, ObservableSpec::action(), 10, pts));
}
