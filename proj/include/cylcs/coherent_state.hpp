#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cylcs/distribution.hpp"
#include "cylcs/execution.hpp"

namespace cylcs {

using cdouble = std::complex<double>;

// Reduces an angle to [0, 2 pi).
double reduce_angle(double phi);

// A point (J, phi) of the cylinder S^1 x R; phi is stored reduced.
class PhasePoint {
 public:
  PhasePoint() = default;
  PhasePoint(double J, double phi) : J_(J), phi_(reduce_angle(phi)) {}

  double J() const { return J_; }
  double phi() const { return phi_; }

 private:
  double J_ = 0.0;
  double phi_ = 0.0;
};

// Rectangular grid: J_steps points spanning [J_min, J_max] inclusive,
// phi_steps points 2 pi j / phi_steps. Points are ordered J-major.
struct PhaseGrid {
  double J_min = -1.0;
  double J_max = 1.0;
  int J_steps = 21;
  int phi_steps = 16;

  double J_at(int i) const;
  double phi_at(int j) const;
  double dJ() const;
  double dphi() const;
  std::size_t size() const { return static_cast<std::size_t>(J_steps) * static_cast<std::size_t>(phi_steps); }
  std::vector<PhasePoint> points() const;
  void validate() const;
};

enum class NormMethod { automatic, direct_sum, poisson_sum, closed_form };

// N^sigma(J) = sum_n w^sigma(J - n).
//  direct_sum   sum over all translates within the effective radius
//  poisson_sum  sqrt(2 pi) sum_k w^(2 pi k) cos(2 pi k J); throws
//               CutoffInsufficient when the series does not converge
//               pointwise (densities with jumps or kinks)
//  closed_form  uniform crenel count; the Gaussian theta series otherwise
//  automatic    Gaussian: direct for sigma <= 1, Poisson above;
//               uniform: closed form; custom: direct
double normalization(const ActionDistribution& dist, double J, NormMethod method = NormMethod::automatic);

std::vector<double> normalization_grid(const ActionDistribution& dist, const std::vector<double>& Js,
                                       NormMethod method = NormMethod::automatic, Exec exec = Exec::parallel);

// Mass of the translates outside the window: sum_{|n| > N} w_n(J).
double tail_mass(const ActionDistribution& dist, double J, int N);

// A window half-width N for which tail_mass(J, N) is negligible.
int required_truncation(const ActionDistribution& dist, double J);

struct CoherentState {
  PhasePoint label;
  int trunc = 0;
  Eigen::VectorXcd coeffs;  // index n + trunc

  cdouble coeff(int n) const { return coeffs(n + trunc); }
};

// Default tail certificate: missing mass relative to N^sigma(J).
inline constexpr double kTailTolerance = 1e-14;

// |J, phi> = N(J)^{-1/2} sum_n sqrt(w_n(J)) e^{-i n phi} |e_n>, n in [-N, N].
// Throws TruncationInsufficient if the window misses more than
// tail_tol * N^sigma(J), NormalizationVanishes if N^sigma(J) underflows.
CoherentState coherent_state(const ActionDistribution& dist, const PhasePoint& p, int N,
                             double tail_tol = kTailTolerance);

// Window coefficients without a tail certificate. Used where the state is
// projected against a vector that already lives in the window.
Eigen::VectorXcd window_coefficients(const ActionDistribution& dist, const PhasePoint& p, int N);

// <p|q> = sum_n sqrt(w_n(J) w_n(J')) e^{i n (phi - phi')} / sqrt(N(J) N(J')).
cdouble cs_overlap(const ActionDistribution& dist, const PhasePoint& p, const PhasePoint& q, int N);

std::vector<cdouble> overlap_kernel_grid(const ActionDistribution& dist, const PhasePoint& p,
                                         const std::vector<PhasePoint>& grid, int N, Exec exec = Exec::parallel);

// Gaussian overlap kernel as a theta-type series over basis labels, and its
// Poisson dual over winding numbers. Independent of the coefficient path.
cdouble gaussian_overlap_direct(double sigma, const PhasePoint& p, const PhasePoint& q);
cdouble gaussian_overlap_poisson(double sigma, const PhasePoint& p, const PhasePoint& q);

// n -> |<e_n|J,phi>|^2 = w_n(J) / N(J), n in [-N, N] (index n + N).
std::vector<double> discrete_distribution(const ActionDistribution& dist, double J, int N);

// J -> |phi_n(J, phi)|^2 = w_n(J), the classical counterpart.
inline double continuous_distribution(const ActionDistribution& dist, int n, double J) {
  return density_translate(dist, n, J);
}

struct QuadraturePlan {
  double margin = 10.0;  // J range is [-N - margin, N + margin]
  int buffer = 2;        // interior labels |n| <= N - buffer
  double tol = 1e-13;
};

// Max deviation of  int mu(dx) N(J) |x><x|  from the identity on interior
// labels. The phi integral is exact by Fourier orthogonality, leaving
// max_n |int N(J) |<e_n|J,phi>|^2 dJ - 1| over the plan's J range.
double resolution_of_identity_residual(const ActionDistribution& dist, int N, const QuadraturePlan& plan = {},
                                       Exec exec = Exec::parallel);

}  // namespace cylcs
