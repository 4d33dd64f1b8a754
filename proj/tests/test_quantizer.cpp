#include <doctest.h>

#include <cmath>
#include <random>

#include "cylcs/custom_density.hpp"
#include "cylcs/errors.hpp"
#include "cylcs/operator.hpp"
#include "oracles.hpp"

using namespace cylcs;

namespace {

ActionDistribution triangle() {
  SampledDensity t;
  t.samples = {{0.0, 1.0}, {1.0, 0.0}};
  t.name = "triangle";
  return ActionDistribution::custom(make_shape(t), 0.9);
}

QuantizeOptions generic() { return {QuantizeMethod::generic, 1e-12, Exec::parallel}; }

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("action is quantized to diag(n)") {
  for (const auto& d : {ActionDistribution::gaussian(0.7), ActionDistribution::uniform(0.75), triangle()}) {
    const auto A = quantize(d, ObservableSpec::action(), 6);
    const double tol = d.kind() == DistKind::custom ? 1e-10 : 1e-13;
    for (int n = -6; n <= 6; ++n)
      for (int m = -6; m <= 6; ++m) CHECK(std::abs(A.at(n, m) - cdouble(n == m ? n : 0.0)) < tol);
    CHECK(A.bandwidth() == 0);
    CHECK(A.fully_trusted());
  }
}

TEST_CASE("energy") {
  for (double s : {0.5, 0.75, 1.0}) {
    const auto A = quantize(ActionDistribution::uniform(s), ObservableSpec::action_squared(), 8);
    for (int n = -8; n <= 8; ++n) CHECK(std::abs(A.at(n, n) - (n * n + s * s / 3.0)) < 1e-12);
    CHECK(A.bandwidth() == 0);
  }
  const auto G = quantize(ActionDistribution::gaussian(1.0), ObservableSpec::action_squared(), 8);
  for (int n = -8; n <= 8; ++n) CHECK(std::abs(G.at(n, n) - (n * n + 1.0)) < 1e-12);
}

TEST_CASE("angle operator") {
  const auto half = angle_operator(ActionDistribution::uniform(0.5), 5);
  CHECK(max_abs(half.mat - oracle::pi * Eigen::MatrixXcd::Identity(11, 11)) < 1e-15);
  const auto one = angle_operator(ActionDistribution::uniform(1.0), 5);
  CHECK(std::abs(one.at(1, 0) - cdouble(0, 0.5)) < 1e-15);
  CHECK(std::abs(one.at(0, 1) - cdouble(0, -0.5)) < 1e-15);
  CHECK(one.at(2, 0) == cdouble(0.0));
  // the closed form is the quantized saw with enough harmonics
  for (const auto& d : {ActionDistribution::uniform(0.8), ActionDistribution::gaussian(1.2)}) {
    const int N = 10;
    const auto A = angle_operator(d, N);
    const auto S = quantize(d, ObservableSpec::saw(2 * N), N);
    CHECK(max_abs(A.mat - S.mat) < 1e-10);
    CHECK(A.hermiticity_defect() < 1e-15);
  }
}

TEST_CASE("saw Fourier coefficients from direct integration") {
  const auto saw = ObservableSpec::saw(5);
  for (int m = -5; m <= 5; ++m) {
    // (1/2pi) int_0^{2pi} phi e^{-i m phi} dphi by the trapezoid rule on the smooth part
    const int K = 200000;
    cdouble acc = 0.0;
    for (int k = 0; k < K; ++k) {
      const double phi = (k + 0.5) * 2.0 * oracle::pi / K;
      acc += phi * std::polar(1.0, -m * phi);
    }
    acc /= static_cast<double>(K);
    CHECK(std::abs(saw.angle_coefficient(m) - acc) < 1e-6);
  }
}

TEST_CASE("Fourier harmonics") {
  const auto u = ActionDistribution::uniform(1.0);
  const auto E = quantize(u, ObservableSpec::harmonic(1), 6);
  for (int n = -5; n <= 6; ++n) CHECK(std::abs(E.at(n, n - 1) - 0.5) < 1e-15);
  CHECK(E.bandwidth() == 1);
  CHECK(max_abs(quantize(ActionDistribution::uniform(0.5), ObservableSpec::harmonic(1), 6).mat) < 1e-15);
  const auto G = quantize(ActionDistribution::gaussian(1.0), ObservableSpec::harmonic(1), 6);
  for (int n = -5; n <= 6; ++n) CHECK(std::abs(G.at(n, n - 1) - std::exp(-0.125)) < 1e-14);
  for (const auto& d : {ActionDistribution::gaussian(0.9), ActionDistribution::uniform(0.7)}) {
    const auto P = quantize(d, ObservableSpec::harmonic(1), 7);
    const auto M = quantize(d, ObservableSpec::harmonic(-1), 7);
    CHECK(max_abs(adjoint(P).mat - M.mat) < 1e-15);
    CHECK(max_abs(P.mat - fourier_harmonic(d, 1, 7).mat) < 1e-13);
    CHECK(max_abs(M.mat - fourier_harmonic(d, -1, 7).mat) < 1e-13);
  }
}

TEST_CASE("commutators and trust") {
  const auto g = ActionDistribution::gaussian(1.0);
  const int N = 12;
  const auto J = quantize(g, ObservableSpec::action(), N);
  const auto P = quantize(g, ObservableSpec::harmonic(1), N);
  const auto C = commutator(J, P);
  CHECK(trusted_deviation(C, P) < 1e-13);
  CHECK(C.trusted.count() > 0);

  const auto cs = quantize(g, ObservableSpec::cosine(1.0), N);
  const auto sn = quantize(g, ObservableSpec::sine(1.0), N);
  CHECK(interior_deviation(commutator(cs, sn), scaled(identity_operator(g, N), 0.0), 1) < 1e-14);
  CHECK(max_abs(commutator(cs, cs).mat) == 0.0);

  const auto A = angle_operator(g, N);
  const auto JA = commutator(J, A);
  // J is diagonal, so [J, A_phi] needs no label outside the window
  CHECK(JA.fully_trusted());
  CHECK(max_abs(JA.mat - action_angle_commutator(g, N).mat) < 1e-12);
  CHECK_FALSE(multiply(A, A).fully_trusted());

  CHECK_THROWS_AS(multiply(J, quantize(g, ObservableSpec::action(), N + 1)), DimensionMismatch);
  CHECK_THROWS_AS(multiply(J, quantize(ActionDistribution::gaussian(2.0), ObservableSpec::action(), N)),
                  DimensionMismatch);
}

TEST_CASE("trust mask of a product of banded factors") {
  const auto u = ActionDistribution::uniform(1.0);
  const int N = 6;
  const auto P = quantize(u, ObservableSpec::harmonic(1), N);
  const auto PP = multiply(P, adjoint(P));
  // edges need a label outside the window
  CHECK_FALSE(PP.trusted(0, 0));
  CHECK(PP.trusted(1, 1));
  CHECK(PP.trusted(2 * N, 2 * N));
  // entries whose inner range is empty are exact zeros
  CHECK(PP.trusted(0, 2 * N));
}

TEST_CASE("closed-form commutators") {
  const auto u = ActionDistribution::uniform(1.0);
  const auto E = energy_harmonic_commutator(u, 1, 6);
  for (int n = -6; n < 6; ++n) CHECK(std::abs(E.at(n + 1, n) - 0.5 * (1.0 + 2.0 * n)) < 1e-15);
  CHECK(max_abs(energy_harmonic_commutator(ActionDistribution::uniform(0.5), 1, 6).mat) == 0.0);
  const auto AC = action_angle_commutator(u, 6);
  for (int n = -5; n <= 6; ++n) CHECK(std::abs(AC.at(n, n - 1) - cdouble(0, 0.5)) < 1e-15);

  for (const auto& d : {ActionDistribution::gaussian(0.8), ActionDistribution::uniform(0.75)})
    for (int sign : {1, -1}) {
      const int N = 10;
      const auto J2 = quantize(d, ObservableSpec::action_squared(), N);
      const auto H = quantize(d, ObservableSpec::harmonic(sign), N);
      CHECK(trusted_deviation(commutator(J2, H), energy_harmonic_commutator(d, sign, N)) < 1e-12);
    }
}

TEST_CASE("hermiticity and band structure") {
  std::map<int, cdouble> c{{0, 0.3}, {1, cdouble(0.2, -0.1)}, {-1, cdouble(0.2, 0.1)}, {3, 0.5}, {-3, 0.5}};
  const auto f = ObservableSpec::from_angle_coefficients(c, "mix");
  REQUIRE(f.is_real());
  for (const auto& d : {ActionDistribution::gaussian(0.6), ActionDistribution::uniform(0.9), triangle()}) {
    const auto A = quantize(d, f, 8);
    CHECK(A.hermiticity_defect() < 1e-12);
    CHECK(A.bandwidth() <= 3);
    for (const auto& obs : {ObservableSpec::saw(8), ObservableSpec::cosine(2.0), ObservableSpec::action_squared()})
      CHECK(quantize(d, obs, 8).hermiticity_defect() < 1e-12);
  }
}

TEST_CASE("fast paths agree with the generic path") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), sig(0.5, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ObservableTerm> terms;
    for (int m = -3; m <= 3; ++m) {
      std::vector<cdouble> poly;
      for (int k = 0; k < 4; ++k) poly.emplace_back(coef(rng), coef(rng));
      ObservableTerm t;
      t.m = m;
      t.poly = poly;
      t.g = [poly](double J) {
        cdouble v = 0.0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * J + *it;
        return v;
      };
      terms.push_back(t);
    }
    const ObservableSpec f(terms, "random");
    const auto u = ActionDistribution::uniform(sig(rng));
    CHECK(max_abs(quantize(u, f, 6).mat - quantize(u, f, 6, generic()).mat) < 1e-9);
    const auto g = ActionDistribution::gaussian(0.3 + 2.0 * (sig(rng) - 0.5));
    CHECK(max_abs(quantize(g, f, 6).mat - quantize(g, f, 6, generic()).mat) < 1e-9);
  }
  const auto table = parse_observable(
      "{\"terms\": [{\"m\": 0, \"table\": {\"J\": [-3, 0, 3], \"re\": [1, 0, 2], \"im\": [0, 0, 0]}}]}");
  const auto g = ActionDistribution::gaussian(0.8);
  CHECK(max_abs(quantize(g, table, 4).mat - quantize(g, table, 4, generic()).mat) < 1e-10);
}

TEST_CASE("pseudo-unitarity of the harmonic") {
  for (const auto& d : {ActionDistribution::gaussian(1.0), ActionDistribution::uniform(0.75)}) {
    const auto P = quantize(d, ObservableSpec::harmonic(1), 10);
    const double w10 = overlap_entry(d, 1, 0);
    const auto PPd = multiply(P, adjoint(P));
    CHECK(trusted_deviation(PPd, scaled(identity_operator(d, 10), w10 * w10)) < 1e-13);
  }
}

TEST_CASE("gaussian entries against an independent quadrature oracle") {
  std::vector<cdouble> poly{0.3, -0.7, 0.9, 0.5};
  for (double s : {0.3, 0.6, 1.3})
    for (int m : {0, 1, 3}) {
      ObservableTerm t;
      t.m = m;
      t.poly = poly;
      t.g = [poly](double J) { return poly[0] + J * (poly[1] + J * (poly[2] + J * poly[3])); };
      const ObservableSpec f({t}, "cubic");
      const auto g = ActionDistribution::gaussian(s);
      const auto fast = quantize(g, f, 6), slow = quantize(g, f, 6, generic());
      for (int n = -6 + m; n <= 6; ++n) {
        const int n2 = n - m;
        auto integrand = [&](double J) {
          return std::sqrt(oracle::gauss_density(s, J - n) * oracle::gauss_density(s, J - n2)) * t.g(J).real();
        };
        const double mid = 0.5 * (n + n2);
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, mid - 40 * s,
                                                                                          mid + 40 * s, 20, 1e-15);
        CHECK(std::abs(fast.at(n, n2).real() - ref) < 1e-12);
        CHECK(std::abs(slow.at(n, n2).real() - ref) < 1e-11);
      }
    }
}
