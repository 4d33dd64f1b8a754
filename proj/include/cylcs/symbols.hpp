#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cylcs/coherent_state.hpp"
#include "cylcs/observable.hpp"
#include "cylcs/operator.hpp"

namespace cylcs {

struct LowerSymbolField {
  std::vector<PhasePoint> grid;
  std::vector<cdouble> values;
  std::string provenance;
};

// <p|A|p> through the coherent-state coefficients in A's window. Throws
// DimensionMismatch if A was built on another distribution and
// TruncationInsufficient if the window does not hold the state.
cdouble lower_symbol(const ActionDistribution& dist, const TruncatedOperator& A, const PhasePoint& p);

LowerSymbolField lower_symbol_field(const ActionDistribution& dist, const TruncatedOperator& A,
                                    const std::vector<PhasePoint>& grid, Exec exec = Exec::parallel);

// d_m(J) = N(J)^{-1} sum_r sqrt(w_r(J) w_{m+r}(J)), m in [-M, M].
struct DCoefficients {
  double J = 0.0;
  int M = 0;
  std::vector<double> values;  // index m + M

  double at(int m) const { return values[static_cast<std::size_t>(m + M)]; }
};

// N is the basis window used for the r-sum; its tail certificate is the one
// of coherent_state. N <= 0 picks a window from the effective radius.
DCoefficients d_coefficients(const ActionDistribution& dist, double J, int M, int N = 0);

// Smallest M with w_{0,m} below 1e-16 for all |m| > M (the support bound
// for compactly supported densities).
int harmonic_cutoff(const ActionDistribution& dist);

// Lower symbol of a pure-angle observable from its Fourier coefficients:
// c_0 + sum_{m != 0, |m| <= M} d_m(J) w_{0,m} c_m e^{i m phi}.
// M < 0 uses the observable's highest harmonic.
cdouble lower_symbol_fourier(const ActionDistribution& dist, const ObservableSpec& f, const PhasePoint& p, int M = -1);

// Lower symbol of [A_J, A_phi]: i sum_{m != 0, |m| <= M} d_m(J) w_{0,m} e^{i m phi}.
// M < 0 uses harmonic_cutoff(dist).
cdouble commutator_lower_symbol(const ActionDistribution& dist, const PhasePoint& p, int M = -1);

// Closed forms for the uniform family (1/2 <= sigma <= 1), with
// omega = 1 - 1/(2 sigma) and chi_I the indicator of I.
namespace uniform_closed {
// (1/N) sum_n n/(2 sigma) chi_[n - sigma, n + sigma)(J)
double action(const ActionDistribution& dist, const PhasePoint& p);
// sigma^2/3 + (1/N) sum_n n^2/(2 sigma) chi_[n - sigma, n + sigma)(J)
double energy(const ActionDistribution& dist, const PhasePoint& p);
// pi - 2 omega (1 - 1/(2 sigma N)) sin phi
double angle(const ActionDistribution& dist, const PhasePoint& p);
// omega (1 - 1/(2 sigma N)) e^{+-i phi}
cdouble harmonic(const ActionDistribution& dist, int sign, const PhasePoint& p);
// 2 i omega (1 - 1/(2 sigma N)) cos phi
cdouble action_angle_commutator(const ActionDistribution& dist, const PhasePoint& p);
// [A_{J^2}, A_{e^{+i phi}}]: omega e^{i phi}/(2 sigma N) sum_n (2n + 1) chi_[n + 1 - sigma, n + sigma)(J)
// [A_{J^2}, A_{e^{-i phi}}]: omega e^{-i phi}/(2 sigma N) sum_n (1 - 2n) chi_[n - sigma, n - 1 + sigma)(J)
cdouble energy_harmonic_commutator(const ActionDistribution& dist, int sign, const PhasePoint& p);
}  // namespace uniform_closed

// Same as uniform_closed::angle; kept under the operation's name.
double lower_symbol_angle_closed(const ActionDistribution& dist, const PhasePoint& p);

// |<p|A_f|p> - f(p)| / |f(p) + C| on the grid. C defaults to 1 + |min Re f|
// over the grid. Throws DenominatorVanishes naming the offending point.
LowerSymbolField relative_error(const ActionDistribution& dist, const ObservableSpec& f, const TruncatedOperator& A_f,
                                const std::vector<PhasePoint>& grid, std::optional<double> C = std::nullopt,
                                Exec exec = Exec::parallel);
LowerSymbolField relative_error(const ActionDistribution& dist, const ObservableSpec& f, int N,
                                const std::vector<PhasePoint>& grid, std::optional<double> C = std::nullopt,
                                Exec exec = Exec::parallel);

}  // namespace cylcs
