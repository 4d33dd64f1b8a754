#include <doctest.h>

#include <cmath>
#include <random>

#include "cylcs/admissibility.hpp"
#include "cylcs/custom_density.hpp"
#include "cylcs/distribution.hpp"
#include "cylcs/errors.hpp"
#include "oracles.hpp"

using namespace cylcs;

namespace {

ActionDistribution custom_gaussian(double sigma) {
  SampledDensity t;
  // out to 12 widths, so far translates still overlap on tabulated values
  for (int i = 0; i <= 6000; ++i) {
    const double x = i * 0.002;
    t.samples.emplace_back(x, std::exp(-0.5 * x * x));
  }
  t.interpolation = Interpolation::cubic;
  t.name = "tabgauss";
  return ActionDistribution::custom(make_shape(t), sigma);
}

const ConditionRecord& cond(const AdmissibilityReport& r, const char* id) {
  for (const auto& c : r.conditions)
    if (c.id == id) return c;
  throw std::logic_error("no condition");
}

}  // namespace

TEST_CASE("density_translate") {
  CHECK(density_translate(ActionDistribution::uniform(0.5), 0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const auto g = ActionDistribution::gaussian(1.0);
  CHECK(density_translate(g, 0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * oracle::pi)).epsilon(1e-15));
  for (const auto& d : {g, ActionDistribution::uniform(0.75), ActionDistribution::gaussian(0.3)})
    CHECK(density_translate(d, 5, 5.0) == d.density(0.0));
  // half-open support [-sigma, sigma)
  const auto u = ActionDistribution::uniform(0.75);
  CHECK(u.density(-0.75) > 0.0);
  CHECK(u.density(0.75) == 0.0);
}

TEST_CASE("uniform sigma range") {
  CHECK_THROWS_AS(ActionDistribution::uniform(0.4), ConfigError);
  CHECK_THROWS_AS(ActionDistribution::uniform(1.5), ConfigError);
  CHECK_NOTHROW(ActionDistribution::uniform(1.5, true));
  CHECK_THROWS_AS(ActionDistribution::gaussian(0.0), ConfigError);
  CHECK_THROWS_AS(ActionDistribution::gaussian(-1.0), ConfigError);
  const auto wide = ActionDistribution::uniform(1.5, true);
  CHECK(overlap_entry(wide, 1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(overlap_entry(wide, 2, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("overlap_entry closed forms") {
  CHECK(overlap_entry(ActionDistribution::uniform(1.0), 1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(overlap_entry(ActionDistribution::uniform(0.5), 1, 0) == 0.0);
  CHECK(overlap_entry(ActionDistribution::gaussian(1.0), 1, 0) ==
        doctest::Approx(std::exp(-0.125)).epsilon(1e-15));
  for (double s : {0.5, 0.6, 0.75, 0.9, 1.0}) {
    const auto u = ActionDistribution::uniform(s);
    for (int d = -4; d <= 4; ++d) CHECK(overlap_entry(u, d, 0) == doctest::Approx(oracle::uniform_overlap(s, d)));
    CHECK(overlap_entry(u, 2, 0) == 0.0);
  }
}

TEST_CASE("gaussian overlap against quadrature oracle") {
  for (double s : {0.5, 1.0, 2.0}) {
    const auto g = ActionDistribution::gaussian(s);
    for (int d = 0; d <= 10; ++d) CHECK(std::abs(overlap_entry(g, d, 0) - oracle::gauss_overlap_quadrature(s, d, 0)) < 1e-10);
  }
}

TEST_CASE("overlap symmetry and Cauchy-Schwarz") {
  const auto c = custom_gaussian(0.8);
  for (const auto& d : {ActionDistribution::gaussian(0.7), ActionDistribution::uniform(0.8), c}) {
    for (int n = -3; n <= 3; ++n)
      for (int m = -3; m <= 3; ++m) {
        const double a = overlap_entry(d, n, m), b = overlap_entry(d, m, n);
        CHECK(std::abs(a - b) < 1e-10);
        CHECK(a <= 1.0 + 1e-10);
        CHECK(a >= 0.0);
      }
    CHECK(std::abs(overlap_entry(d, 4, 4) - 1.0) < 1e-10);
    CHECK(std::abs(overlap_entry(d, 3, 1) - overlap_entry(d, 2, 0)) < 1e-12);
  }
}

TEST_CASE("fourier transform") {
  for (const auto& d : {ActionDistribution::gaussian(0.4), ActionDistribution::uniform(0.75), custom_gaussian(1.3)})
    CHECK(d.fourier(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * oracle::pi)).epsilon(1e-9));
  const auto u = ActionDistribution::uniform(0.75);
  CHECK(u.fourier(2.0) == doctest::Approx(std::sin(1.5) / 1.5 / std::sqrt(2.0 * oracle::pi)).epsilon(1e-13));
  const auto g = ActionDistribution::gaussian(0.5);
  CHECK(g.fourier(3.0) == doctest::Approx(std::exp(-0.5 * 0.25 * 9.0) / std::sqrt(2.0 * oracle::pi)).epsilon(1e-13));
}

TEST_CASE("custom densities") {
  SUBCASE("tabulated Gaussian reproduces the closed form") {
    const auto c = custom_gaussian(1.0);
    const auto g = ActionDistribution::gaussian(1.0);
    for (double J : {-2.0, -0.3, 0.0, 0.7, 1.9}) CHECK(std::abs(c.density(J) - g.density(J)) < 1e-9);
    for (int d = 0; d <= 4; ++d) CHECK(std::abs(overlap_entry(c, d, 0) - overlap_entry(g, d, 0)) < 1e-9);
    // far offsets: the integrand peaks between the two centres
    const auto cn = custom_gaussian(0.4), gn = ActionDistribution::gaussian(0.4);
    for (int d = 1; d <= 4; ++d) CHECK(std::abs(overlap_entry(cn, d, 0) - overlap_entry(gn, d, 0)) < 1e-9);
    CHECK(c.fourier(1.0) == doctest::Approx(g.fourier(1.0)).epsilon(1e-8));
  }
  SUBCASE("renormalized and even") {
    SampledDensity t;
    t.samples = {{0.0, 3.0}, {0.5, 1.5}, {1.0, 0.0}};
    const auto c = ActionDistribution::custom(make_shape(t), 1.0);
    CHECK(c.density(0.2) == c.density(-0.2));
    CHECK(c.density(0.0) == doctest::Approx(1.0).epsilon(1e-12));  // triangle of unit area
    CHECK(c.support_radius() == doctest::Approx(1.0));
    const auto c2 = c.with_sigma(2.0);
    CHECK(c2.density(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("parse errors") {
    CHECK_THROWS_AS(parse_sampled_density(""), ConfigError);
    CHECK_THROWS_AS(make_shape(parse_sampled_density("{\"samples\": [[0, -1], [1, 0]]}")), ConfigError);
    CHECK_THROWS_AS(parse_sampled_density("{\"samples\": [[0, 1], [1, 0]], \"symmetrize\": \"odd\"}"), ConfigError);
    CHECK_THROWS_AS(parse_sampled_density("{\"samples\": [[0, 1]"), ConfigError);
    const auto t = parse_sampled_density(
        "{\"name\": \"tri\", \"samples\": [[0, 2], [1, 0]], \"interpolation\": \"cubic\", \"support_radius\": 1}");
    CHECK(t.name == "tri");
    CHECK(t.interpolation == Interpolation::cubic);
    CHECK(t.samples.size() == 2);
  }
  SUBCASE("pchip stays non-negative") {
    SampledDensity t;
    t.samples = {{0.0, 1.0}, {0.5, 0.0}, {1.0, 0.0}, {1.5, 1.0}, {2.0, 0.0}};
    t.interpolation = Interpolation::cubic;
    const auto c = ActionDistribution::custom(make_shape(t), 1.0);
    for (int i = 0; i <= 400; ++i) CHECK(c.density(-2.0 + 0.01 * i) >= 0.0);
  }
}

TEST_CASE("overlap matrix bandwidth") {
  CHECK(OverlapMatrix(ActionDistribution::uniform(1.0), 4).half_bandwidth() == 1);
  CHECK(OverlapMatrix(ActionDistribution::uniform(0.75), 4).half_bandwidth() == 1);
  CHECK(OverlapMatrix(ActionDistribution::uniform(0.5), 4).half_bandwidth() == 0);
  CHECK_FALSE(OverlapMatrix(ActionDistribution::gaussian(1.0), 4).half_bandwidth().has_value());
  const OverlapMatrix m(ActionDistribution::gaussian(1.0), 3);
  CHECK(m.entry(7, 0) == overlap_entry(ActionDistribution::gaussian(1.0), 7, 0));
}

TEST_CASE("admissibility verifier") {
  SUBCASE("gaussian passes everything") {
    const auto r = verify_admissibility(ActionDistribution::gaussian(1.0));
    for (const auto& c : r.conditions) CHECK_MESSAGE(c.status == Verdict::pass, c.id);
    CHECK_FALSE(r.any_failed());
    CHECK(r.N0.has_value());
  }
  SUBCASE("uniform 3/4 is pass or inconclusive") {
    const auto r = verify_admissibility(ActionDistribution::uniform(0.75));
    CHECK(cond(r, "i").status == Verdict::pass);
    CHECK(cond(r, "ii").status == Verdict::pass);
    CHECK(cond(r, "iii").status == Verdict::inconclusive);
    CHECK(cond(r, "iv").status == Verdict::inconclusive);
    CHECK(cond(r, "v").status == Verdict::inconclusive);
    bool decay_pass = false;
    for (const auto& [name, v] : cond(r, "v").subchecks)
      if (name.find("decay") != std::string::npos && v == Verdict::pass) decay_pass = true;
    CHECK(decay_pass);
    CHECK_FALSE(r.any_failed());
  }
  SUBCASE("tabulated Gaussian gets the same verdicts") {
    SamplingPlan plan;
    plan.tol = 1e-8;
    const auto a = verify_admissibility(ActionDistribution::gaussian(1.0), plan);
    const auto b = verify_admissibility(custom_gaussian(1.0), plan);
    for (std::size_t i = 0; i < a.conditions.size(); ++i) {
      CHECK_MESSAGE(a.conditions[i].status == b.conditions[i].status, a.conditions[i].id);
      CHECK(std::abs(a.conditions[i].max_deviation - b.conditions[i].max_deviation) < 1e-6);
    }
  }
  SUBCASE("a density with vanishing normalization fails (i)") {
    // narrow bump: N(J) = 0 between the translates
    SampledDensity t;
    t.samples = {{0.0, 1.0}, {0.2, 0.0}};
    t.support_radius = 0.2;
    const auto c = ActionDistribution::custom(make_shape(t), 1.0);
    SamplingPlan plan;
    plan.sigma_sweep = {1.0};
    const auto r = verify_admissibility(c, plan);
    CHECK(cond(r, "i").status == Verdict::fail);
    CHECK(r.any_failed());
  }
}
