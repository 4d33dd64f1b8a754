#include "cylcs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cylcs/errors.hpp"

namespace cylcs {

namespace {

void require_match(const ActionDistribution& dist, const Propagator& U, const char* what) {
  if (U.dist_label() != dist.label())
    throw DimensionMismatch(std::string(what) + ": Hamiltonian built on " + U.dist_label() + ", state on " +
                            dist.label());
}

// Terms kept on each side so that exp(-x^2 / (2 s^2)) drops below 1e-16.
int gaussian_reach(double s) { return static_cast<int>(std::ceil(s * std::sqrt(2.0 * std::log(1e16)))) + 1; }

}  // namespace

Propagator::Propagator(const TruncatedOperator& H) : N_(H.N), dist_label_(H.dist_label) {
  const double scale = 1.0 + H.mat.cwiseAbs().maxCoeff();
  const double defect = H.hermiticity_defect();
  if (defect > 1e-12 * scale) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "Hamiltonian %s is not Hermitian (defect %.3g)", H.label.c_str(), defect);
    throw NonHermitianHamiltonian(buf);
  }
  const int D = H.dim();
  diagonal_ = true;
  for (int i = 0; i < D && diagonal_; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j && H.mat(i, j) != cdouble(0.0)) {
        diagonal_ = false;
        break;
      }
  if (diagonal_) {
    eigenvalues_ = H.mat.diagonal().real();
    return;
  }
  const Eigen::MatrixXcd sym = 0.5 * (H.mat + H.mat.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("Propagator: eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& psi, double t) const {
  if (psi.size() != 2 * N_ + 1) throw DimensionMismatch("Propagator: state has the wrong dimension");
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) phases(i) = std::polar(1.0, -eigenvalues_(i) * t);
  if (diagonal_) return phases.cwiseProduct(psi);
  return eigenvectors_ * phases.cwiseProduct(eigenvectors_.adjoint() * psi);
}

Eigen::VectorXcd evolve_state(const ActionDistribution& dist, const Propagator& U, const PhasePoint& p0, double t) {
  require_match(dist, U, "evolve_state");
  return U.apply(coherent_state(dist, p0, U.N()).coeffs, t);
}

Eigen::VectorXcd evolve_state(const ActionDistribution& dist, const TruncatedOperator& H, const PhasePoint& p0,
                              double t) {
  return evolve_state(dist, Propagator(H), p0, t);
}

double EvolutionFrame::mass() const {
  if (rho.size() != grid.size()) throw DimensionMismatch("EvolutionFrame: rho does not match the grid");
  double acc = 0.0;
  for (int i = 0; i < grid.J_steps; ++i) {
    const double wJ = (grid.J_steps > 1 && (i == 0 || i == grid.J_steps - 1)) ? 0.5 : 1.0;
    double row = 0.0;
    for (int j = 0; j < grid.phi_steps; ++j) row += rho[static_cast<std::size_t>(i) * grid.phi_steps + j];
    acc += wJ * row;
  }
  return acc * grid.dJ() * grid.dphi() / kTwoPi;
}

namespace {

// N(J) |<J, phi|psi>|^2 = |sum_n sqrt(w_n(J)) e^{i n phi} psi_n|^2, which
// never divides by N(J).
void fill_frame(const ActionDistribution& dist, const Eigen::VectorXcd& psi, int N, EvolutionFrame& frame, Exec exec) {
  const auto points = frame.grid.points();
  frame.rho.assign(points.size(), 0.0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(points.size()), [&](std::ptrdiff_t i) {
    const auto& p = points[i];
    cdouble amp = 0.0;
    for (int n = -N; n <= N; ++n) {
      const double w = density_translate(dist, n, p.J());
      if (w == 0.0) continue;
      amp += std::sqrt(w) * std::polar(1.0, n * p.phi()) * psi(n + N);
    }
    frame.rho[i] = std::norm(amp);
  });
}

}  // namespace

EvolutionFrame localization_frame(const ActionDistribution& dist, const Propagator& U, const PhasePoint& p0, double t,
                                  const PhaseGrid& grid, Exec exec) {
  grid.validate();
  EvolutionFrame frame{t, grid, p0, {}};
  fill_frame(dist, evolve_state(dist, U, p0, t), U.N(), frame, exec);
  return frame;
}

std::vector<EvolutionFrame> localization_frames(const ActionDistribution& dist, const Propagator& U,
                                                const PhasePoint& p0, const std::vector<double>& times,
                                                const PhaseGrid& grid, Exec exec) {
  grid.validate();
  require_match(dist, U, "localization_frames");
  const auto psi0 = coherent_state(dist, p0, U.N()).coeffs;
  std::vector<EvolutionFrame> frames(times.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(times.size()), [&](std::ptrdiff_t k) {
    frames[k] = EvolutionFrame{times[k], grid, p0, {}};
    fill_frame(dist, U.apply(psi0, times[k]), U.N(), frames[k], Exec::serial);
  });
  return frames;
}

PhaseGrid certified_grid(const ActionDistribution& dist, const PhasePoint& p0, double motion, int J_steps,
                         int phi_steps) {
  const double reach = 8.0 * dist.sigma() + motion;
  PhaseGrid g{p0.J() - reach, p0.J() + reach, J_steps, phi_steps};
  g.validate();
  return g;
}

double gaussian_rho_series(double sigma, const PhasePoint& p0, const PhasePoint& p, double t, SeriesForm form,
                           int cutoff) {
  if (!(sigma > 0)) throw ConfigError("gaussian_rho_series: sigma must be > 0");
  const double a = 0.5 * (p.J() + p0.J());
  const double theta = p.phi() - p0.phi();
  const double u = 1.0 / (2.0 * sigma * sigma);
  cdouble S = 0.0;
  double largest = 0.0, dropped = 0.0;

  if (form == SeriesForm::direct) {
    // S = sum_n exp(-(n - a)^2 / (2 sigma^2)) e^{i (n theta - n^2 t)}
    const long centre = std::lround(a);
    const int K = cutoff < 0 ? gaussian_reach(sigma) : cutoff;
    auto mag = [&](long n) { return std::exp(-u * (n - a) * (n - a)); };
    for (long n = centre - K; n <= centre + K; ++n) {
      const double nd = static_cast<double>(n);
      S += std::polar(mag(n), nd * theta - nd * nd * t);
      largest = std::max(largest, mag(n));
    }
    dropped = std::max(mag(centre - K - 1), mag(centre + K + 1));
  } else {
    // Poisson dual: S = sum_k sqrt(pi / alpha) exp((-w^2 + 4 i a u (w - a t)) / (4 alpha)),
    // alpha = u + i t, w = theta - 2 pi k. |term| peaks at w = 2 a t.
    const cdouble alpha(u, t);
    const cdouble root = std::sqrt(kPi / alpha);
    const double width = std::sqrt(4.0 * std::log(1e16) * std::norm(alpha) / u);
    const long centre = std::lround((theta - 2.0 * a * t) / kTwoPi);
    const int K = cutoff < 0 ? static_cast<int>(std::ceil(width / kTwoPi)) + 1 : cutoff;
    auto term = [&](long k) {
      const double w = theta - kTwoPi * static_cast<double>(k);
      return root * std::exp((cdouble(-w * w, 4.0 * a * u * (w - a * t))) / (4.0 * alpha));
    };
    for (long k = centre - K; k <= centre + K; ++k) {
      const cdouble v = term(k);
      S += v;
      largest = std::max(largest, std::abs(v));
    }
    dropped = std::max(std::abs(term(centre - K - 1)), std::abs(term(centre + K + 1)));
  }
  if (dropped > 1e-14 * largest) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "gaussian_rho_series: cutoff %d leaves a tail term %.3g (largest %.3g)", cutoff,
                  dropped, largest);
    throw CutoffInsufficient(buf);
  }
  const double dJ = p.J() - p0.J();
  const double N0 = normalization(ActionDistribution::gaussian(sigma), p0.J());
  return std::exp(-dJ * dJ / (4.0 * sigma * sigma)) / (kTwoPi * sigma * sigma * N0) * std::norm(S);
}

std::vector<cdouble> evolved_lower_symbol(const ActionDistribution& dist, const Propagator& U,
                                          const TruncatedOperator& A, const PhasePoint& p0,
                                          const std::vector<double>& times, Exec exec) {
  require_match(dist, U, "evolved_lower_symbol");
  if (A.N != U.N() || A.dist_label != U.dist_label())
    throw DimensionMismatch("evolved_lower_symbol: observable and Hamiltonian windows differ");
  const auto psi0 = coherent_state(dist, p0, U.N()).coeffs;
  std::vector<cdouble> out(times.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(times.size()), [&](std::ptrdiff_t k) {
    const auto psi = U.apply(psi0, times[k]);
    out[k] = psi.dot(A.mat * psi);
  });
  return out;
}

}  // namespace cylcs
