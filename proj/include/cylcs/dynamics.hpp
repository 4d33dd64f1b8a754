#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cylcs/coherent_state.hpp"
#include "cylcs/operator.hpp"

namespace cylcs {

// e^{-i H t} for a truncated Hermitian H, from one eigendecomposition.
// Diagonal H is propagated directly by phases. Immutable after
// construction; share it between threads.
class Propagator {
 public:
  // Throws NonHermitianHamiltonian if |H - H^dagger| exceeds
  // 1e-12 (1 + max |H|).
  explicit Propagator(const TruncatedOperator& H);

  int N() const { return N_; }
  const std::string& dist_label() const { return dist_label_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const;

 private:
  int N_ = 0;
  std::string dist_label_;
  bool diagonal_ = false;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

// e^{-i H t} |p0>, coefficients in H's window.
Eigen::VectorXcd evolve_state(const ActionDistribution& dist, const Propagator& U, const PhasePoint& p0, double t);
Eigen::VectorXcd evolve_state(const ActionDistribution& dist, const TruncatedOperator& H, const PhasePoint& p0,
                              double t);

struct EvolutionFrame {
  double t = 0.0;
  PhaseGrid grid;
  PhasePoint initial;
  std::vector<double> rho;  // J-major, as PhaseGrid::points()

  // int rho dJ dphi / (2 pi): trapezoid in J, periodic rectangle rule in phi.
  double mass() const;
};

// rho(J, phi) = N(J) |<J, phi|psi(t)>|^2 on the grid.
EvolutionFrame localization_frame(const ActionDistribution& dist, const Propagator& U, const PhasePoint& p0, double t,
                                  const PhaseGrid& grid, Exec exec = Exec::parallel);

// Frames at several times; times are processed in parallel.
std::vector<EvolutionFrame> localization_frames(const ActionDistribution& dist, const Propagator& U,
                                                const PhasePoint& p0, const std::vector<double>& times,
                                                const PhaseGrid& grid, Exec exec = Exec::parallel);

// J range that captures the evolved mass: J0 -+ (8 sigma + motion).
PhaseGrid certified_grid(const ActionDistribution& dist, const PhasePoint& p0, double motion, int J_steps,
                         int phi_steps);

enum class SeriesForm {
  direct,  // sum over basis labels n with the free phases e^{-i n^2 t}
  poisson  // its exact Poisson dual over winding numbers k
};

// rho for the Gaussian family under H = J^2:
//   rho = e^{-(J - J0)^2 / (4 sigma^2)} / (2 pi sigma^2 N(J0)) |S|^2
// with S the n-series (direct) or the k-series (poisson). cutoff is the
// number of terms kept on each side of the dominant one; cutoff < 0 picks
// one from the decay rate. Throws CutoffInsufficient if the first dropped
// term exceeds 1e-14 of the largest.
double gaussian_rho_series(double sigma, const PhasePoint& p0, const PhasePoint& p, double t, SeriesForm form,
                           int cutoff = -1);

// t -> <p0| e^{i H t} A e^{-i H t} |p0>.
std::vector<cdouble> evolved_lower_symbol(const ActionDistribution& dist, const Propagator& U,
                                          const TruncatedOperator& A, const PhasePoint& p0,
                                          const std::vector<double>& times, Exec exec = Exec::parallel);

}  // namespace cylcs
