#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "cylcs/errors.hpp"

namespace cylcs::quad {

struct Options {
  double abs_tol = 1e-12;
  int max_depth = 48;
  long max_panels = 200000;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

[[noreturn]] void throw_not_converged(double a, double b, double err, double tol);

}  // namespace detail

// Adaptive composite Gauss-Legendre on [a, b] with an absolute tolerance.
// Each panel compares the 10- and 20-point rules and is bisected until the
// difference falls below its share of the tolerance. Integrands with kinks
// or jumps should list them in `breakpoints`; the range is split there first.
template <typename F>
auto integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
               const Options& opt = {}) -> decltype(f(a)) {
  using Value = decltype(f(a));
  using boost::math::quadrature::gauss;
  if (!(b > a)) return Value{};

  std::vector<double> edges{a};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const double width = b - a;
  Value total{};
  double err_total = 0.0;
  bool converged = true;
  long panels = 0;

  struct Panel {
    double lo, hi;
    int depth;
  };
  std::vector<Panel> stack;
  for (std::size_t e = edges.size() - 1; e > 0; --e) stack.push_back({edges[e - 1], edges[e], 0});

  // Depth-first, left to right: the summation order is deterministic.
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const Value coarse = gauss<double, 10>::integrate(std::ref(f), p.lo, p.hi);
    const Value fine = gauss<double, 20>::integrate(std::ref(f), p.lo, p.hi);
    const double err = detail::magnitude(fine - coarse);
    const double local_tol = opt.abs_tol * (p.hi - p.lo) / width;
    if (err <= local_tol || p.depth >= opt.max_depth || panels >= opt.max_panels) {
      if (err > local_tol) converged = false;
      total += fine;
      err_total += err;
      ++panels;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    stack.push_back({mid, p.hi, p.depth + 1});
    stack.push_back({p.lo, mid, p.depth + 1});
  }
  if (!converged && err_total > opt.abs_tol) detail::throw_not_converged(a, b, err_total, opt.abs_tol);
  return total;
}

// Gauss-Hermite rule for expectations against the standard normal density:
// E[g(Z)] ~= sum_i weights[i] * g(nodes[i]). Exact for polynomials of
// degree <= 2 * points - 1.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rules are built once per size and cached; the returned reference is stable.
const HermiteRule& hermite_rule(int points);

template <typename G>
auto normal_expectation(G&& g, double mean, double sd, const HermiteRule& rule) -> decltype(g(mean)) {
  using Value = decltype(g(mean));
  Value acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * g(mean + sd * rule.nodes[i]);
  return acc;
}

}  // namespace cylcs::quad
