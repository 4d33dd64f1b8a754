#include "cylcs/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cylcs/errors.hpp"

namespace cylcs {

namespace {

std::string point_str(const PhasePoint& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(J=%.17g, phi=%.17g)", p.J(), p.phi());
  return buf;
}

void require_uniform(const ActionDistribution& dist, const char* what) {
  if (dist.kind() != DistKind::uniform) throw ConfigError(std::string(what) + ": closed form needs the uniform family");
  if (dist.sigma() < 0.5 || dist.sigma() > 1.0)
    throw ConfigError(std::string(what) + ": closed form holds for 1/2 <= sigma <= 1 only");
}

double omega(const ActionDistribution& dist) { return 1.0 - 1.0 / (2.0 * dist.sigma()); }

// Sum over labels n with n - lo_off <= J < n + hi_off of weight(n).
template <typename W>
double indicator_sum(double J, double lo_off, double hi_off, W weight) {
  // n in (J - hi_off, J + lo_off]
  const long first = static_cast<long>(std::floor(J - hi_off)) + 1;
  const long last = static_cast<long>(std::floor(J + lo_off));
  double acc = 0.0;
  for (long n = first; n <= last; ++n) acc += weight(static_cast<double>(n));
  return acc;
}

// 1 - 1/(2 sigma N(J)), the uniform-family value of d_1.
double uniform_d1(const ActionDistribution& dist, double J) {
  return 1.0 - 1.0 / (2.0 * dist.sigma() * normalization(dist, J, NormMethod::closed_form));
}

}  // namespace

cdouble lower_symbol(const ActionDistribution& dist, const TruncatedOperator& A, const PhasePoint& p) {
  if (A.dist_label != dist.label())
    throw DimensionMismatch("lower_symbol: operator built on " + A.dist_label + ", state on " + dist.label());
  const auto cs = coherent_state(dist, p, A.N);
  return cs.coeffs.dot(A.mat * cs.coeffs);
}

LowerSymbolField lower_symbol_field(const ActionDistribution& dist, const TruncatedOperator& A,
                                    const std::vector<PhasePoint>& grid, Exec exec) {
  LowerSymbolField out{grid, std::vector<cdouble>(grid.size()), A.label};
  for_each_index(exec, static_cast<std::ptrdiff_t>(grid.size()),
                 [&](std::ptrdiff_t i) { out.values[i] = lower_symbol(dist, A, grid[i]); });
  return out;
}

DCoefficients d_coefficients(const ActionDistribution& dist, double J, int M, int N) {
  if (M < 0) throw ConfigError("d_coefficients: M must be non-negative");
  if (N <= 0) N = required_truncation(dist, J);
  const double norm = normalization(dist, J);
  if (!(norm > 0)) throw NormalizationVanishes("d_coefficients: N(J) vanishes");
  const double tail = tail_mass(dist, J, N);
  if (tail > kTailTolerance * norm)
    throw TruncationInsufficient("d_coefficients: window [-" + std::to_string(N) + ", " + std::to_string(N) +
                                 "] misses mass at J");

  std::vector<double> roots(2 * static_cast<std::size_t>(N) + 1);
  for (int r = -N; r <= N; ++r) roots[r + N] = std::sqrt(density_translate(dist, r, J));
  DCoefficients out{J, M, std::vector<double>(2 * static_cast<std::size_t>(M) + 1)};
  for (int m = 0; m <= M; ++m) {
    double acc = 0.0;
    for (int r = -N; r + m <= N; ++r) acc += roots[r + N] * roots[r + m + N];
    out.values[M + m] = acc / norm;
    out.values[M - m] = out.values[M + m];
  }
  return out;
}

int harmonic_cutoff(const ActionDistribution& dist) {
  constexpr int kCap = 1000000;
  if (std::isfinite(dist.support_radius())) {
    // Overlaps vanish once the supports stop intersecting.
    const int bound = static_cast<int>(std::ceil(2.0 * dist.support_radius()));
    int last = 0;
    for (int m = 1; m <= bound; ++m)
      if (overlap_entry(dist, m, 0) > 0.0) last = m;
    return last;
  }
  for (int m = 1; m <= kCap; ++m)
    if (overlap_entry(dist, m, 0) < 1e-16) return m - 1;
  throw CutoffInsufficient("harmonic_cutoff: overlaps still above 1e-16 at offset " + std::to_string(kCap));
}

cdouble lower_symbol_fourier(const ActionDistribution& dist, const ObservableSpec& f, const PhasePoint& p, int M) {
  if (!f.is_pure_angle()) throw ConfigError("lower_symbol_fourier: observable '" + f.label() + "' depends on J");
  if (M < 0) M = f.max_harmonic();
  const auto d = d_coefficients(dist, p.J(), M, required_truncation(dist, p.J()) + M);
  cdouble acc = f.angle_coefficient(0);
  for (int m = -M; m <= M; ++m) {
    if (m == 0) continue;
    const cdouble c = f.angle_coefficient(m);
    if (c == cdouble(0.0)) continue;
    acc += d.at(m) * overlap_entry(dist, 0, m) * c * std::polar(1.0, m * p.phi());
  }
  return acc;
}

cdouble commutator_lower_symbol(const ActionDistribution& dist, const PhasePoint& p, int M) {
  if (M < 0) M = harmonic_cutoff(dist);
  const auto d = d_coefficients(dist, p.J(), M, required_truncation(dist, p.J()) + M);
  cdouble acc = 0.0;
  // Pair m with -m so the sum stays symmetric: 2 d_m w_{0,m} cos(m phi).
  for (int m = M; m >= 1; --m) acc += 2.0 * d.at(m) * overlap_entry(dist, 0, m) * std::cos(m * p.phi());
  return cdouble(0.0, 1.0) * acc;
}

namespace uniform_closed {

double action(const ActionDistribution& dist, const PhasePoint& p) {
  require_uniform(dist, "uniform_closed::action");
  const double s = dist.sigma();
  const double norm = normalization(dist, p.J(), NormMethod::closed_form);
  return indicator_sum(p.J(), s, s, [&](double n) { return n / (2.0 * s); }) / norm;
}

double energy(const ActionDistribution& dist, const PhasePoint& p) {
  require_uniform(dist, "uniform_closed::energy");
  const double s = dist.sigma();
  const double norm = normalization(dist, p.J(), NormMethod::closed_form);
  return s * s / 3.0 + indicator_sum(p.J(), s, s, [&](double n) { return n * n / (2.0 * s); }) / norm;
}

double angle(const ActionDistribution& dist, const PhasePoint& p) {
  require_uniform(dist, "uniform_closed::angle");
  return kPi - 2.0 * omega(dist) * uniform_d1(dist, p.J()) * std::sin(p.phi());
}

cdouble harmonic(const ActionDistribution& dist, int sign, const PhasePoint& p) {
  require_uniform(dist, "uniform_closed::harmonic");
  if (sign != 1 && sign != -1) throw ConfigError("uniform_closed::harmonic: sign must be +1 or -1");
  return omega(dist) * uniform_d1(dist, p.J()) * std::polar(1.0, sign * p.phi());
}

cdouble action_angle_commutator(const ActionDistribution& dist, const PhasePoint& p) {
  require_uniform(dist, "uniform_closed::action_angle_commutator");
  return cdouble(0.0, 2.0 * omega(dist) * uniform_d1(dist, p.J()) * std::cos(p.phi()));
}

cdouble energy_harmonic_commutator(const ActionDistribution& dist, int sign, const PhasePoint& p) {
  require_uniform(dist, "uniform_closed::energy_harmonic_commutator");
  if (sign != 1 && sign != -1) throw ConfigError("uniform_closed::energy_harmonic_commutator: sign must be +1 or -1");
  const double s = dist.sigma();
  const double norm = normalization(dist, p.J(), NormMethod::closed_form);
  // sign +: n + 1 - sigma <= J < n + sigma;  sign -: n - sigma <= J < n - 1 + sigma
  const double total = sign > 0 ? indicator_sum(p.J(), s - 1.0, s, [](double n) { return 2.0 * n + 1.0; })
                                 : indicator_sum(p.J(), s, s - 1.0, [](double n) { return 1.0 - 2.0 * n; });
  return omega(dist) * total / (2.0 * s * norm) * std::polar(1.0, sign * p.phi());
}

}  // namespace uniform_closed

double lower_symbol_angle_closed(const ActionDistribution& dist, const PhasePoint& p) {
  return uniform_closed::angle(dist, p);
}

LowerSymbolField relative_error(const ActionDistribution& dist, const ObservableSpec& f, const TruncatedOperator& A_f,
                                const std::vector<PhasePoint>& grid, std::optional<double> C, Exec exec) {
  if (grid.empty()) throw ConfigError("relative_error: empty grid");
  std::vector<cdouble> classical(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) classical[i] = f(grid[i].J(), grid[i].phi());
  if (!C) {
    double lowest = kInf;
    for (const auto& v : classical) lowest = std::min(lowest, v.real());
    C = 1.0 + std::abs(lowest);
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(classical[i] + *C) <= 1e-14 * (1.0 + std::abs(*C)))
      throw DenominatorVanishes("relative_error: f + C vanishes at " + point_str(grid[i]));

  auto field = lower_symbol_field(dist, A_f, grid, exec);
  for (std::size_t i = 0; i < grid.size(); ++i)
    field.values[i] = std::abs(field.values[i] - classical[i]) / std::abs(classical[i] + *C);
  field.provenance = "relative error of " + A_f.label;
  return field;
}

LowerSymbolField relative_error(const ActionDistribution& dist, const ObservableSpec& f, int N,
                                const std::vector<PhasePoint>& grid, std::optional<double> C, Exec exec) {
  return relative_error(dist, f, quantize(dist, f, N, {.exec = exec}), grid, C, exec);
}

}  // namespace cylcs
