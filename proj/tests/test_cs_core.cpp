#include <doctest.h>

#include <cmath>
#include <random>

#include "cylcs/coherent_state.hpp"
#include "cylcs/custom_density.hpp"
#include "cylcs/errors.hpp"
#include "oracles.hpp"

using namespace cylcs;

TEST_CASE("normalization examples") {
  const auto u = ActionDistribution::uniform(0.75);
  CHECK(normalization(u, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(normalization(u, 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(normalization(ActionDistribution::gaussian(10.0), 0.37) - 1.0) < 1e-12);

  CHECK(normalization(ActionDistribution::gaussian(0.2), 0.3) == doctest::Approx(oracle::N_gauss_s02_J03).epsilon(1e-14));
  CHECK(normalization(ActionDistribution::gaussian(1.0), 0.3) == doctest::Approx(oracle::N_gauss_s1_J03).epsilon(1e-14));
  CHECK(normalization(ActionDistribution::gaussian(5.0), 0.7) == doctest::Approx(oracle::N_gauss_s5_J07).epsilon(1e-14));
  CHECK(normalization(ActionDistribution::gaussian(0.2), 0.0) == doctest::Approx(oracle::N_gauss_s02_J0).epsilon(1e-14));
}

TEST_CASE("normalization: direct, Poisson and the long-double oracle agree") {
  for (double s : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    const auto g = ActionDistribution::gaussian(s);
    for (int i = 0; i < 50; ++i) {
      const double J = -3.0 + 0.123 * i;
      const double ref = oracle::gauss_N(s, J);
      CHECK(std::abs(normalization(g, J, NormMethod::direct_sum) - ref) < 1e-13);
      CHECK(std::abs(normalization(g, J, NormMethod::poisson_sum) - ref) < 1e-13);
      CHECK(std::abs(normalization(g, J, NormMethod::closed_form) - ref) < 1e-13);
    }
  }
  for (double s : {0.5, 0.6, 0.75, 1.0}) {
    const auto u = ActionDistribution::uniform(s);
    for (int i = 0; i < 80; ++i) {
      const double J = -2.0123 + 0.05 * i;  // off the support edges
      CHECK(normalization(u, J) == doctest::Approx(oracle::uniform_N(s, J)).epsilon(1e-14));
      CHECK(normalization(u, J, NormMethod::direct_sum) == doctest::Approx(oracle::uniform_N(s, J)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(normalization(ActionDistribution::uniform(0.75), 0.1, NormMethod::poisson_sum), CutoffInsufficient);
}

TEST_CASE("normalization is 1-periodic") {
  SampledDensity t;
  t.samples = {{0.0, 1.0}, {0.6, 0.5}, {1.2, 0.0}};
  const auto c = ActionDistribution::custom(make_shape(t), 1.0);
  for (const auto& d : {ActionDistribution::gaussian(0.2), ActionDistribution::gaussian(1.0),
                        ActionDistribution::gaussian(5.0), ActionDistribution::uniform(0.75), c}) {
    std::vector<double> Js, shifted;
    for (int i = 0; i < 1000; ++i) {
      Js.push_back(-5.0 + 0.01 * i);
      shifted.push_back(Js.back() + 1.0);
    }
    const auto a = normalization_grid(d, Js), b = normalization_grid(d, shifted);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK_MESSAGE(worst < 1e-12, d.label());
  }
}

TEST_CASE("coherent state coefficients") {
  SUBCASE("uniform 1/2 at J = 0 is the basis vector e_0") {
    const auto cs = coherent_state(ActionDistribution::uniform(0.5), PhasePoint(0.0, 0.0), 2);
    for (int n = -2; n <= 2; ++n) CHECK(std::abs(cs.coeff(n) - cdouble(n == 0 ? 1.0 : 0.0)) < 1e-15);
  }
  SUBCASE("rotation covariance is exact") {
    const auto g = ActionDistribution::gaussian(0.8);
    const double theta = 0.731;
    const auto a = coherent_state(g, PhasePoint(0.4, 1.1), 15);
    const auto b = coherent_state(g, PhasePoint(0.4, 1.1 + theta), 15);
    for (int n = -15; n <= 15; ++n) CHECK(std::abs(b.coeff(n) - std::polar(1.0, -n * theta) * a.coeff(n)) < 1e-15);
  }
  SUBCASE("half-integer action has equal weight on both neighbours") {
    const auto cs = coherent_state(ActionDistribution::gaussian(1.0), PhasePoint(0.5, 0.0), 20);
    CHECK(std::abs(std::abs(cs.coeff(0)) - std::abs(cs.coeff(1))) < 1e-15);
  }
  SUBCASE("unit norm") {
    for (double J : {-0.7, 0.0, 0.25, 1.5}) {
      CHECK(std::abs(coherent_state(ActionDistribution::gaussian(1.3), PhasePoint(J, 2.0), 25).coeffs.norm() - 1.0) < 1e-14);
      CHECK(std::abs(coherent_state(ActionDistribution::uniform(0.8), PhasePoint(J, 2.0), 5).coeffs.norm() - 1.0) < 1e-14);
    }
  }
  SUBCASE("window too small") {
    CHECK_THROWS_AS(coherent_state(ActionDistribution::gaussian(1.0), PhasePoint(0.0, 0.0), 2), TruncationInsufficient);
    CHECK_NOTHROW(coherent_state(ActionDistribution::gaussian(1.0), PhasePoint(0.0, 0.0), required_truncation(ActionDistribution::gaussian(1.0), 0.0)));
  }
}

TEST_CASE("cs_overlap") {
  const auto g1 = ActionDistribution::gaussian(1.0);
  SUBCASE("self overlap") {
    for (const auto& d : {g1, ActionDistribution::uniform(0.75), ActionDistribution::gaussian(0.3)})
      CHECK(std::abs(cs_overlap(d, PhasePoint(0.3, 2.0), PhasePoint(0.3, 2.0), 20) - 1.0) < 1e-14);
  }
  SUBCASE("frozen values") {
    const auto a = cs_overlap(g1, PhasePoint(0.0, 0.0), PhasePoint(0.0, oracle::pi), 20);
    CHECK(std::abs(a - oracle::overlap_s1_pi) < 1e-14);
    const auto b = cs_overlap(g1, PhasePoint(0.3, 0.4), PhasePoint(-1.2, 2.5), 20);
    CHECK(std::abs(b - oracle::overlap_s1_generic) < 1e-14);
  }
  SUBCASE("direct and Poisson forms of the kernel") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> J(-2.0, 2.0), phi(0.0, 2.0 * oracle::pi), s(0.3, 4.0);
    for (int i = 0; i < 50; ++i) {
      const double sigma = s(rng);
      const PhasePoint p(J(rng), phi(rng)), q(J(rng), phi(rng));
      const auto d = gaussian_overlap_direct(sigma, p, q);
      CHECK(std::abs(d - gaussian_overlap_poisson(sigma, p, q)) < 1e-10);
      CHECK(std::abs(d - cs_overlap(ActionDistribution::gaussian(sigma), p, q, 60)) < 1e-12);
    }
  }
  SUBCASE("hermitian symmetry") {
    for (const auto& d : {g1, ActionDistribution::uniform(0.9)}) {
      const PhasePoint p(0.2, 0.5), q(-0.6, 4.0);
      CHECK(std::abs(cs_overlap(d, p, q, 20) - std::conj(cs_overlap(d, q, p, 20))) < 1e-15);
    }
  }
  SUBCASE("limits") {
    CHECK(std::abs(cs_overlap(ActionDistribution::gaussian(0.05), PhasePoint(0, 0), PhasePoint(1, 0), 5)) < 1e-6);
    const auto g50 = ActionDistribution::gaussian(50.0);
    const int N = required_truncation(g50, 0.0);
    CHECK(std::abs(cs_overlap(g50, PhasePoint(0, 0), PhasePoint(0, oracle::pi), N)) < 1e-3);
    CHECK(std::abs(cs_overlap(g50, PhasePoint(0, 0), PhasePoint(3, 0), N)) > 0.99);
  }
  SUBCASE("kernel grid matches pointwise calls") {
    const PhaseGrid grid{-1.0, 1.0, 5, 4};
    const auto pts = grid.points();
    const auto k = overlap_kernel_grid(g1, PhasePoint(0.1, 0.2), pts, 20);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(k[i] == cs_overlap(g1, PhasePoint(0.1, 0.2), pts[i], 20));
  }
}

TEST_CASE("discrete and continuous distributions") {
  auto dd = discrete_distribution(ActionDistribution::uniform(0.5), 0.25, 3);
  CHECK(dd[3] == doctest::Approx(1.0));
  dd = discrete_distribution(ActionDistribution::uniform(1.0), 0.5, 3);
  CHECK(dd[3] == doctest::Approx(0.5));
  CHECK(dd[4] == doctest::Approx(0.5));
  CHECK(dd[2] == 0.0);
  dd = discrete_distribution(ActionDistribution::gaussian(0.05), 3.0, 6);
  CHECK(dd[9] > 1.0 - 1e-12);
  double total = 0.0;
  for (double v : discrete_distribution(ActionDistribution::gaussian(1.7), 0.4, 40)) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(continuous_distribution(ActionDistribution::gaussian(1.0), 2, 2.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * oracle::pi)));
}

TEST_CASE("resolution of the identity") {
  CHECK(resolution_of_identity_residual(ActionDistribution::uniform(0.75), 10) < 1e-12);
  CHECK(resolution_of_identity_residual(ActionDistribution::uniform(0.5), 10) < 1e-12);
  CHECK(resolution_of_identity_residual(ActionDistribution::gaussian(1.0), 30, QuadraturePlan{10.0, 10, 1e-13}) < 1e-10);
  // With no margin the window edge cuts the translate of label N - 2 at 2 sigma.
  const double r = resolution_of_identity_residual(ActionDistribution::gaussian(1.0), 30, QuadraturePlan{0.0, 2, 1e-13});
  CHECK(r == doctest::Approx(oracle::normal_upper_tail(2.0)).epsilon(1e-8));
}

TEST_CASE("phase grid") {
  const PhaseGrid g{-1.0, 1.0, 3, 4};
  const auto pts = g.points();
  REQUIRE(pts.size() == 12);
  CHECK(pts[0].J() == -1.0);
  CHECK(pts[4].J() == 0.0);
  CHECK(pts[5].phi() == doctest::Approx(oracle::pi / 2));
  CHECK(PhasePoint(0.0, -0.5).phi() == doctest::Approx(2.0 * oracle::pi - 0.5));
  CHECK_THROWS_AS((PhaseGrid{1.0, -1.0, 3, 4}.validate()), ConfigError);
}
