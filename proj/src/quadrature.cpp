#include "cylcs/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>

namespace cylcs::quad {

namespace detail {

void throw_not_converged(double a, double b, double err, double tol) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "adaptive quadrature on [" << a << ", " << b << "] did not reach tolerance " << tol
      << " (estimated error " << err << ")";
  throw QuadratureNotConverged(msg.str());
}

}  // namespace detail

namespace {

// Orthonormal probabilists' Hermite recurrence:
//   x p_k = sqrt(k+1) p_{k+1} + sqrt(k) p_{k-1},  p_0 = 1.
// Returns p_n(x) and sum_{k<n} p_k(x)^2, with p_{n-1} via out-param.
double orthonormal_hermite(int n, double x, double& p_prev, double& christoffel_sum) {
  double pm1 = 0.0;
  double p = 1.0;
  christoffel_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    christoffel_sum += p * p;
    const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm1) / std::sqrt(static_cast<double>(k + 1));
    pm1 = p;
    p = next;
  }
  p_prev = pm1;
  return p;
}

HermiteRule build_rule(int n) {
  // Golub-Welsch for starting values, then Newton polish and Christoffel weights.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    double prev = 0.0, csum = 0.0;
    for (int it = 0; it < 6; ++it) {
      const double pn = orthonormal_hermite(n, x, prev, csum);
      const double deriv = std::sqrt(static_cast<double>(n)) * prev;
      if (deriv == 0.0) break;
      const double step = pn / deriv;
      x -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    orthonormal_hermite(n, x, prev, csum);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / csum;
  }
  return rule;
}

}  // namespace

const HermiteRule& hermite_rule(int points) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<HermiteRule>(build_rule(points));
  return *slot;
}

}  // namespace cylcs::quad
