#include "cylcs/operator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cylcs/errors.hpp"
#include "cylcs/quadrature.hpp"

namespace cylcs {

namespace {

TruncatedOperator blank(const ActionDistribution& dist, int N, std::string label) {
  if (N < 1) throw ConfigError("truncation N must be >= 1");
  const int D = 2 * N + 1;
  TruncatedOperator op;
  op.N = N;
  op.mat = Eigen::MatrixXcd::Zero(D, D);
  op.trusted = TrustMask::Constant(D, D, true);
  op.label = std::move(label);
  op.dist_label = dist.label();
  return op;
}

std::string tag(const std::string& what, const ActionDistribution& dist) { return what + " " + dist.label(); }

cdouble poly_integral(const std::vector<cdouble>& c, double a, double b) {
  // Horner on the antiderivative sum c_k x^{k+1} / (k+1).
  auto prim = [&](double x) {
    cdouble acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = (acc + c[k] / static_cast<double>(k + 1)) * x;
    return acc;
  };
  return prim(b) - prim(a);
}

cdouble generic_entry(const ActionDistribution& dist, const ObservableTerm& term, int n, int n2, double tol) {
  // Bounded support: the integrand lives on the intersection of the two
  // supports. Unbounded: sqrt(w_n w_n') peaks between the centres and is
  // only negligible outside the union.
  const double R = dist.effective_radius();
  const bool bounded = std::isfinite(dist.support_radius());
  const double lo = bounded ? std::max(n, n2) - R : std::min(n, n2) - R;
  const double hi = bounded ? std::min(n, n2) + R : std::max(n, n2) + R;
  if (!(hi > lo)) return 0.0;
  std::vector<double> bps{0.5 * (n + n2)};
  for (double b : dist.breakpoints()) {
    bps.push_back(n + b);
    bps.push_back(n2 + b);
  }
  bps.insert(bps.end(), term.breakpoints.begin(), term.breakpoints.end());
  auto integrand = [&](double J) {
    const double w = std::sqrt(density_translate(dist, n, J) * density_translate(dist, n2, J));
    return w == 0.0 ? cdouble(0.0) : w * term.g(J);
  };
  return quad::integrate(integrand, lo, hi, bps, {.abs_tol = tol});
}

// E[p(mu + s Z)] for a polynomial p and standard normal Z, from the
// binomial expansion and E[Z^j] = (j - 1)!! for even j.
cdouble normal_poly_moment(const std::vector<cdouble>& c, double mu, double s) {
  const std::size_t deg = c.size() - 1;
  std::vector<double> zmom(deg + 1, 0.0);
  zmom[0] = 1.0;
  for (std::size_t j = 2; j <= deg; j += 2) zmom[j] = zmom[j - 2] * static_cast<double>(j - 1);
  cdouble acc = 0.0;
  for (std::size_t k = 0; k <= deg; ++k) {
    if (c[k] == cdouble(0.0)) continue;
    double term = 0.0, binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j % 2 == 0) term += binom * std::pow(mu, static_cast<double>(k - j)) * std::pow(s, static_cast<double>(j)) * zmom[j];
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    acc += c[k] * term;
  }
  return acc;
}

// sqrt(g_n g_n') = w_{n,n'} times the normal density at the midpoint with sd sigma.
cdouble gaussian_entry(const ActionDistribution& dist, const ObservableTerm& term, int n, int n2, double tol) {
  const double sigma = dist.sigma();
  const double d = n - n2;
  const double weight = std::exp(-d * d / (8.0 * sigma * sigma));
  if (weight == 0.0) return 0.0;
  const double mid = 0.5 * (n + n2);
  if (term.is_polynomial() && term.poly.size() <= 33) return weight * normal_poly_moment(term.poly, mid, sigma);
  if (term.is_polynomial() && term.poly.size() <= 128)
    return weight * quad::normal_expectation(term.g, mid, sigma, quad::hermite_rule(64));
  const cdouble coarse = quad::normal_expectation(term.g, mid, sigma, quad::hermite_rule(48));
  const cdouble fine = quad::normal_expectation(term.g, mid, sigma, quad::hermite_rule(96));
  if (std::abs(fine - coarse) * weight <= tol) return weight * fine;
  return generic_entry(dist, term, n, n2, tol);
}

// Both windows have density 1/(2 sigma) on [n - sigma, n + sigma).
cdouble uniform_entry(const ActionDistribution& dist, const ObservableTerm& term, int n, int n2, double tol) {
  const double sigma = dist.sigma();
  const double lo = std::max(n, n2) - sigma;
  const double hi = std::min(n, n2) + sigma;
  if (!(hi > lo)) return 0.0;
  const double scale = 1.0 / (2.0 * sigma);
  if (term.is_polynomial()) return scale * poly_integral(term.poly, lo, hi);
  return scale * quad::integrate(term.g, lo, hi, term.breakpoints, {.abs_tol = tol});
}

void require_compatible(const TruncatedOperator& A, const TruncatedOperator& B, const char* what) {
  if (A.N != B.N)
    throw DimensionMismatch(std::string(what) + ": truncations differ (" + std::to_string(A.N) + " vs " +
                            std::to_string(B.N) + ")");
  if (A.dist_label != B.dist_label)
    throw DimensionMismatch(std::string(what) + ": operators built on different distributions (" + A.dist_label +
                            " vs " + B.dist_label + ")");
}

// Offsets i - j of the nonzero entries lie in [-above, below]. An empty
// matrix gets an empty range.
struct Band {
  int below;
  int above;
};

Band band_of(const TruncatedOperator& X) {
  Band b{-X.dim(), -X.dim()};
  for (int i = 0; i < X.dim(); ++i)
    for (int j = 0; j < X.dim(); ++j)
      if (X.mat(i, j) != cdouble(0.0)) {
        b.below = std::max(b.below, i - j);
        b.above = std::max(b.above, j - i);
      }
  return b;
}

// Entry (i, j) of the truncated X Y equals the untruncated one when every
// intermediate label k allowed by both band structures lies in the window
// and the factor entries used are themselves trusted.
TrustMask product_mask(const TruncatedOperator& X, const TruncatedOperator& Y) {
  const int D = X.dim();
  const Band bx = band_of(X), by = band_of(Y);
  const bool exact_factors = X.fully_trusted() && Y.fully_trusted();
  TrustMask mask(D, D);
  for_each_index(Exec::parallel, D, [&](std::ptrdiff_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < D; ++j) {
      const int klo = std::max(i - bx.below, j - by.above);
      const int khi = std::min(i + bx.above, j + by.below);
      bool ok = klo > khi || (klo >= 0 && khi < D);
      if (ok && !exact_factors)
        for (int k = std::max(klo, 0); k <= std::min(khi, D - 1) && ok; ++k)
          ok = X.trusted(i, k) && Y.trusted(k, j);
      mask(i, j) = ok;
    }
  });
  return mask;
}

}  // namespace

int TruncatedOperator::bandwidth() const {
  int bw = 0;
  for (int i = 0; i < mat.rows(); ++i)
    for (int j = 0; j < mat.cols(); ++j)
      if (mat(i, j) != cdouble(0.0)) bw = std::max(bw, std::abs(i - j));
  return bw;
}

double TruncatedOperator::hermiticity_defect() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }

TruncatedOperator quantize(const ActionDistribution& dist, const ObservableSpec& f, int N, const QuantizeOptions& opt) {
  if (!(opt.tol > 0)) throw ConfigError("quantize: tolerance must be > 0");
  if (f.terms().empty()) throw ConfigError("quantize: observable has no terms");
  auto op = blank(dist, N, tag("A[" + f.label() + "]", dist));
  const bool generic = opt.method == QuantizeMethod::generic || dist.kind() == DistKind::custom;
  const auto& terms = f.terms();

  for_each_index(opt.exec, op.dim(), [&](std::ptrdiff_t row) {
    const int n = static_cast<int>(row) - N;
    for (const auto& term : terms) {
      const int n2 = n - term.m;
      if (n2 < -N || n2 > N) continue;
      cdouble v;
      if (generic)
        v = generic_entry(dist, term, n, n2, opt.tol);
      else if (dist.kind() == DistKind::gaussian)
        v = gaussian_entry(dist, term, n, n2, opt.tol);
      else
        v = uniform_entry(dist, term, n, n2, opt.tol);
      op.mat(row, n2 + N) = v;
    }
  });
  return op;
}

TruncatedOperator identity_operator(const ActionDistribution& dist, int N) {
  auto op = blank(dist, N, tag("I", dist));
  op.mat.setIdentity();
  return op;
}

TruncatedOperator angle_operator(const ActionDistribution& dist, int N) {
  auto op = blank(dist, N, tag("A[angle]", dist));
  const OverlapMatrix overlaps(dist, 2 * N);
  for (int n = -N; n <= N; ++n)
    for (int n2 = -N; n2 <= N; ++n2)
      op.mat(n + N, n2 + N) = n == n2 ? cdouble(kPi) : cdouble(0.0, overlaps.entry(n, n2) / (n - n2));
  return op;
}

TruncatedOperator fourier_harmonic(const ActionDistribution& dist, int sign, int N) {
  if (sign != 1 && sign != -1) throw ConfigError("fourier_harmonic: sign must be +1 or -1");
  auto op = blank(dist, N, tag(sign > 0 ? "A[exp(+i phi)]" : "A[exp(-i phi)]", dist));
  const double w10 = overlap_entry(dist, 1, 0);
  for (int n = -N; n <= N; ++n) {
    const int n2 = n - sign;
    if (n2 >= -N && n2 <= N) op.mat(n + N, n2 + N) = w10;
  }
  return op;
}

TruncatedOperator action_angle_commutator(const ActionDistribution& dist, int N) {
  auto op = blank(dist, N, tag("[A_J, A_angle]", dist));
  const OverlapMatrix overlaps(dist, 2 * N);
  for (int n = -N; n <= N; ++n)
    for (int n2 = -N; n2 <= N; ++n2)
      if (n != n2) op.mat(n + N, n2 + N) = cdouble(0.0, overlaps.entry(n, n2));
  return op;
}

TruncatedOperator energy_harmonic_commutator(const ActionDistribution& dist, int sign, int N) {
  if (sign != 1 && sign != -1) throw ConfigError("energy_harmonic_commutator: sign must be +1 or -1");
  auto op = blank(dist, N, tag(sign > 0 ? "[A_J2, A[exp(+i phi)]]" : "[A_J2, A[exp(-i phi)]]", dist));
  const double w10 = overlap_entry(dist, 1, 0);
  // Entry (n +- 1, n) = w_{1,0} ((n +- 1)^2 - n^2) = w_{1,0} (1 +- 2n).
  for (int n = -N; n <= N; ++n) {
    const int row = n + sign;
    if (row >= -N && row <= N) op.mat(row + N, n + N) = w10 * (1.0 + 2.0 * sign * n);
  }
  return op;
}

TruncatedOperator adjoint(const TruncatedOperator& A) {
  TruncatedOperator out = A;
  out.mat = A.mat.adjoint();
  out.trusted = A.trusted.transpose();
  out.label = "(" + A.label + ")^dagger";
  return out;
}

TruncatedOperator multiply(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_compatible(A, B, "multiply");
  TruncatedOperator out = A;
  out.mat = A.mat * B.mat;
  out.trusted = product_mask(A, B);
  out.label = "(" + A.label + ")(" + B.label + ")";
  return out;
}

TruncatedOperator commutator(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_compatible(A, B, "commutator");
  TruncatedOperator out = A;
  out.mat = A.mat * B.mat - B.mat * A.mat;
  out.trusted = product_mask(A, B) && product_mask(B, A);
  out.label = "[" + A.label + ", " + B.label + "]";
  return out;
}

TruncatedOperator scaled(const TruncatedOperator& A, cdouble factor) {
  TruncatedOperator out = A;
  out.mat *= factor;
  return out;
}

TruncatedOperator sum(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_compatible(A, B, "sum");
  TruncatedOperator out = A;
  out.mat += B.mat;
  out.trusted = A.trusted && B.trusted;
  out.label = A.label + " + " + B.label;
  return out;
}

double trusted_deviation(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_compatible(A, B, "trusted_deviation");
  double dev = 0.0;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j)
      if (A.trusted(i, j) && B.trusted(i, j)) dev = std::max(dev, std::abs(A.mat(i, j) - B.mat(i, j)));
  return dev;
}

double interior_deviation(const TruncatedOperator& A, const TruncatedOperator& B, int margin) {
  require_compatible(A, B, "interior_deviation");
  const int size = A.dim() - 2 * margin;
  if (size <= 0) throw ConfigError("interior_deviation: margin leaves an empty block");
  return (A.mat.block(margin, margin, size, size) - B.mat.block(margin, margin, size, size)).cwiseAbs().maxCoeff();
}

}  // namespace cylcs
