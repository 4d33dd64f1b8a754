#include "cylcs/coherent_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cylcs/errors.hpp"
#include "cylcs/quadrature.hpp"

namespace cylcs {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double direct_sum(const ActionDistribution& dist, double J) {
  const double R = dist.effective_radius();
  const long lo = static_cast<long>(std::ceil(J - R));
  const long hi = static_cast<long>(std::floor(J + R));
  double acc = 0.0;
  for (long n = lo; n <= hi; ++n) acc += dist.density(J - static_cast<double>(n));
  return acc;
}

double gaussian_theta(double sigma, double J) {
  const double frac = J - std::floor(J);
  const double a = 2.0 * kPi * kPi * sigma * sigma;
  double acc = 1.0;
  for (int k = 1;; ++k) {
    const double w = std::exp(-a * k * k);
    if (w < 1e-18) break;
    acc += 2.0 * w * std::cos(kTwoPi * k * frac);
  }
  return acc;
}

double poisson_sum(const ActionDistribution& dist, double J) {
  if (dist.kind() == DistKind::gaussian) return gaussian_theta(dist.sigma(), J);
  if (!dist.smooth())
    throw CutoffInsufficient("Poisson series of N^sigma does not converge pointwise for " + dist.label() +
                             " (density has jumps or kinks)");
  const double frac = J - std::floor(J);
  const double root = std::sqrt(kTwoPi);
  double acc = root * dist.fourier(0.0);
  int small = 0;
  for (int k = 1; k <= 4096; ++k) {
    const double c = root * dist.fourier(kTwoPi * k);
    acc += 2.0 * c * std::cos(kTwoPi * k * frac);
    small = std::abs(c) < 1e-17 ? small + 1 : 0;
    if (small >= 3) return acc;
  }
  throw CutoffInsufficient("Poisson series of N^sigma not converged after 4096 modes for " + dist.label());
}

double uniform_crenel(double sigma, double J) {
  // Labels n with n - sigma <= J < n + sigma, i.e. n in (J - sigma, J + sigma].
  const double count = std::floor(J + sigma) - std::floor(J - sigma);
  return count / (2.0 * sigma);
}

double checked_normalization(const ActionDistribution& dist, double J) {
  const double value = normalization(dist, J);
  if (!(value > 0) || !std::isfinite(value) || value < 1e-300)
    throw NormalizationVanishes("N^sigma(" + num(J) + ") vanishes for " + dist.label());
  return value;
}

}  // namespace

double reduce_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double PhaseGrid::J_at(int i) const { return J_steps == 1 ? J_min : J_min + (J_max - J_min) * i / (J_steps - 1); }
double PhaseGrid::phi_at(int j) const { return kTwoPi * j / phi_steps; }
double PhaseGrid::dJ() const { return J_steps == 1 ? 0.0 : (J_max - J_min) / (J_steps - 1); }
double PhaseGrid::dphi() const { return kTwoPi / phi_steps; }

void PhaseGrid::validate() const {
  if (J_steps < 1 || phi_steps < 1) throw ConfigError("grid: step counts must be >= 1");
  if (!(J_max >= J_min)) throw ConfigError("grid: J_max must be >= J_min");
}

std::vector<PhasePoint> PhaseGrid::points() const {
  validate();
  std::vector<PhasePoint> out;
  out.reserve(size());
  for (int i = 0; i < J_steps; ++i)
    for (int j = 0; j < phi_steps; ++j) out.emplace_back(J_at(i), phi_at(j));
  return out;
}

double normalization(const ActionDistribution& dist, double J, NormMethod method) {
  switch (method) {
    case NormMethod::direct_sum:
      return direct_sum(dist, J);
    case NormMethod::poisson_sum:
      return poisson_sum(dist, J);
    case NormMethod::closed_form:
      if (dist.kind() == DistKind::uniform) return uniform_crenel(dist.sigma(), J);
      if (dist.kind() == DistKind::gaussian) return gaussian_theta(dist.sigma(), J);
      throw ConfigError("normalization: no closed form for " + dist.label());
    case NormMethod::automatic:
      switch (dist.kind()) {
        case DistKind::gaussian:
          return dist.sigma() <= 1.0 ? direct_sum(dist, J) : gaussian_theta(dist.sigma(), J);
        case DistKind::uniform:
          return uniform_crenel(dist.sigma(), J);
        case DistKind::custom:
          return direct_sum(dist, J);
      }
  }
  return direct_sum(dist, J);
}

std::vector<double> normalization_grid(const ActionDistribution& dist, const std::vector<double>& Js,
                                       NormMethod method, Exec exec) {
  std::vector<double> out(Js.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(Js.size()),
                 [&](std::ptrdiff_t i) { out[i] = normalization(dist, Js[i], method); });
  return out;
}

double tail_mass(const ActionDistribution& dist, double J, int N) {
  const double R = dist.effective_radius();
  double acc = 0.0;
  const long hi = static_cast<long>(std::floor(J + R));
  for (long n = N + 1L; n <= hi; ++n) acc += dist.density(J - static_cast<double>(n));
  const long lo = static_cast<long>(std::ceil(J - R));
  for (long n = -N - 1L; n >= lo; --n) acc += dist.density(J - static_cast<double>(n));
  return acc;
}

int required_truncation(const ActionDistribution& dist, double J) {
  const double reach = std::abs(J) + dist.effective_radius();
  return std::max(1, static_cast<int>(std::ceil(reach)) + 1);
}

Eigen::VectorXcd window_coefficients(const ActionDistribution& dist, const PhasePoint& p, int N) {
  const double norm = checked_normalization(dist, p.J());
  Eigen::VectorXcd c(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    const double w = density_translate(dist, n, p.J());
    c(n + N) = std::polar(std::sqrt(w / norm), -static_cast<double>(n) * p.phi());
  }
  return c;
}

CoherentState coherent_state(const ActionDistribution& dist, const PhasePoint& p, int N, double tail_tol) {
  if (N < 0) throw ConfigError("coherent_state: truncation must be non-negative");
  const double norm = checked_normalization(dist, p.J());
  const double tail = tail_mass(dist, p.J(), N);
  if (tail > tail_tol * norm)
    throw TruncationInsufficient("window [-" + std::to_string(N) + ", " + std::to_string(N) + "] misses mass " +
                                 num(tail / norm) + " of the state at J = " + num(p.J()) + " for " + dist.label());
  return CoherentState{p, N, window_coefficients(dist, p, N)};
}

cdouble cs_overlap(const ActionDistribution& dist, const PhasePoint& p, const PhasePoint& q, int N) {
  const auto a = coherent_state(dist, p, N);
  const auto b = coherent_state(dist, q, N);
  return a.coeffs.dot(b.coeffs);  // Eigen's dot conjugates the first argument
}

std::vector<cdouble> overlap_kernel_grid(const ActionDistribution& dist, const PhasePoint& p,
                                         const std::vector<PhasePoint>& grid, int N, Exec exec) {
  const auto base = coherent_state(dist, p, N);
  std::vector<cdouble> out(grid.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t i) {
    out[i] = base.coeffs.dot(coherent_state(dist, grid[i], N).coeffs);
  });
  return out;
}

cdouble gaussian_overlap_direct(double sigma, const PhasePoint& p, const PhasePoint& q) {
  const auto dist = ActionDistribution::gaussian(sigma);
  const double Np = checked_normalization(dist, p.J());
  const double Nq = checked_normalization(dist, q.J());
  const double a = 0.5 * (p.J() + q.J());
  const double theta = p.phi() - q.phi();
  const double reach = 9.0 * sigma + 1.0;
  cdouble acc = 0.0;
  for (long n = static_cast<long>(std::ceil(a - reach)); n <= static_cast<long>(std::floor(a + reach)); ++n) {
    const double x = (a - n) / sigma;
    acc += std::polar(std::exp(-0.5 * x * x), static_cast<double>(n) * theta);
  }
  const double dJ = p.J() - q.J();
  return acc * std::exp(-dJ * dJ / (8.0 * sigma * sigma)) / std::sqrt(kTwoPi * sigma * sigma * Np * Nq);
}

cdouble gaussian_overlap_poisson(double sigma, const PhasePoint& p, const PhasePoint& q) {
  const auto dist = ActionDistribution::gaussian(sigma);
  const double Np = checked_normalization(dist, p.J());
  const double Nq = checked_normalization(dist, q.J());
  const double a = 0.5 * (p.J() + q.J());
  const double theta = p.phi() - q.phi();
  const double centre = theta / kTwoPi;
  const double reach = 9.0 / (kTwoPi * sigma) + 1.0;
  cdouble acc = 0.0;
  for (long k = static_cast<long>(std::ceil(centre - reach)); k <= static_cast<long>(std::floor(centre + reach)); ++k) {
    const double x = theta - kTwoPi * static_cast<double>(k);
    acc += std::polar(std::exp(-0.5 * sigma * sigma * x * x), -kPi * static_cast<double>(k) * 2.0 * a);
  }
  const double dJ = p.J() - q.J();
  return acc * std::polar(std::exp(-dJ * dJ / (8.0 * sigma * sigma)), a * theta) / std::sqrt(Np * Nq);
}

std::vector<double> discrete_distribution(const ActionDistribution& dist, double J, int N) {
  const double norm = checked_normalization(dist, J);
  std::vector<double> out(2 * static_cast<std::size_t>(N) + 1);
  for (int n = -N; n <= N; ++n) out[n + N] = density_translate(dist, n, J) / norm;
  return out;
}

double resolution_of_identity_residual(const ActionDistribution& dist, int N, const QuadraturePlan& plan, Exec exec) {
  if (plan.buffer < 0 || plan.buffer > N) throw ConfigError("resolution residual: buffer must lie in [0, N]");
  if (plan.margin < 0) throw ConfigError("resolution residual: margin must be non-negative");
  const int interior = N - plan.buffer;
  const double lo = -N - plan.margin;
  const double hi = N + plan.margin;
  const double R = dist.effective_radius();
  std::vector<double> deviation(2 * static_cast<std::size_t>(interior) + 1);

  for_each_index(exec, static_cast<std::ptrdiff_t>(deviation.size()), [&](std::ptrdiff_t idx) {
    const int n = static_cast<int>(idx) - interior;
    std::vector<double> bps;
    for (double b : dist.breakpoints()) bps.push_back(n + b);
    // N(J) |<e_n|J,phi>|^2 through the coefficient path.
    auto integrand = [&](double J) {
      const double norm = normalization(dist, J);
      if (!(norm > 0)) return 0.0;
      const double amp = std::sqrt(density_translate(dist, n, J) / norm);
      return norm * amp * amp;
    };
    const double a = std::max(lo, n - R);
    const double b = std::min(hi, n + R);
    const double mass = quad::integrate(integrand, a, b, bps, {.abs_tol = plan.tol});
    deviation[idx] = std::abs(mass - 1.0);
  });
  return *std::max_element(deviation.begin(), deviation.end());
}

}  // namespace cylcs
