#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "cylcs/distribution.hpp"
#include "cylcs/execution.hpp"
#include "cylcs/observable.hpp"

namespace cylcs {

using TrustMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// A_f restricted to the basis window n in [-N, N]; matrix index n + N.
// `trusted` marks entries that equal the corresponding entry of the
// untruncated operator. Quantized operators are trusted everywhere;
// products lose the entries that would need labels outside the window.
struct TruncatedOperator {
  int N = 0;
  Eigen::MatrixXcd mat;
  TrustMask trusted;
  std::string label;
  std::string dist_label;

  int dim() const { return 2 * N + 1; }
  cdouble at(int n, int n2) const { return mat(n + N, n2 + N); }
  // Largest |i - j| with a nonzero entry.
  int bandwidth() const;
  double hermiticity_defect() const;
  bool fully_trusted() const { return trusted.all(); }
};

enum class QuantizeMethod {
  automatic,  // family fast paths: Gauss-Hermite (Gaussian), exact intervals (uniform)
  generic     // adaptive quadrature of sqrt(w_n w_n') g_{n-n'} for every family
};

struct QuantizeOptions {
  QuantizeMethod method = QuantizeMethod::automatic;
  double tol = 1e-12;  // absolute, per entry
  Exec exec = Exec::parallel;
};

// (A_f)_{n n'} = int sqrt(w_n(J) w_n'(J)) g_{n-n'}(J) dJ, with g_m the
// coefficient of e^{i m phi} in f. Entries whose offset n - n' is not a
// harmonic of f are zero.
TruncatedOperator quantize(const ActionDistribution& dist, const ObservableSpec& f, int N,
                           const QuantizeOptions& opt = {});

TruncatedOperator identity_operator(const ActionDistribution& dist, int N);

// pi I + i sum_{n != n'} w_{n,n'} / (n - n') |e_n><e_n'|, the quantized saw.
TruncatedOperator angle_operator(const ActionDistribution& dist, int N);

// w_{1,0} times the shift |e_n><e_{n-1}| (sign +1) or |e_n><e_{n+1}| (sign -1).
TruncatedOperator fourier_harmonic(const ActionDistribution& dist, int sign, int N);

// i sum_{n != n'} w_{n,n'} |e_n><e_n'|, the closed form of [A_J, A_phi].
TruncatedOperator action_angle_commutator(const ActionDistribution& dist, int N);

// Closed form of [A_{J^2}, A_{e^{+-i phi}}] = A_{e^{+-i phi}} +- 2 w_{1,0} sum_n n |e_{n+-1}><e_n|.
TruncatedOperator energy_harmonic_commutator(const ActionDistribution& dist, int sign, int N);

TruncatedOperator adjoint(const TruncatedOperator& A);
// Truncated product; entries that would need labels outside the window, or
// untrusted factor entries, are marked untrusted. Throws DimensionMismatch.
TruncatedOperator multiply(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator commutator(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator scaled(const TruncatedOperator& A, cdouble factor);
TruncatedOperator sum(const TruncatedOperator& A, const TruncatedOperator& B);

// max |A - B| over entries trusted in both.
double trusted_deviation(const TruncatedOperator& A, const TruncatedOperator& B);
// max |A - B| over the block |n|, |n'| <= N - margin.
double interior_deviation(const TruncatedOperator& A, const TruncatedOperator& B, int margin);

}  // namespace cylcs
