#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cylcs {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DistKind { gaussian, uniform, custom };

std::string_view to_string(DistKind kind);

// Shape of a user-supplied density at a reference width. It must be even and
// non-negative; it need not be normalized. The family at width sigma is the
// rescaling  w^sigma(J) = (s0/sigma) shape(J s0/sigma) / Z.
struct CustomShape {
  std::function<double(double)> density;
  double reference_sigma = 1.0;
  double support_radius = kInf;     // at reference width
  std::vector<double> breakpoints;  // kinks or jumps at reference width, x >= 0
  bool smooth = true;               // false if the density has kinks or jumps
  std::string name = "custom";
};

struct SigmaRange {
  double min = 0.0;
  double max = kInf;
  bool contains(double s) const { return s >= min && s <= max; }
};

// An admissible action-variable distribution w^sigma: even, normalized,
// with its Fourier transform  w^(k) = (2 pi)^{-1/2} int e^{-ikJ} w(J) dJ.
// Immutable and cheap to copy; safe to share between threads.
class ActionDistribution {
 public:
  static ActionDistribution gaussian(double sigma);
  // Uniform on [-sigma, sigma). Requires 1/2 <= sigma <= 1 unless the
  // override is set (then any sigma > 0 is accepted).
  static ActionDistribution uniform(double sigma, bool allow_sigma_out_of_range = false);
  static ActionDistribution custom(CustomShape shape, double sigma);

  DistKind kind() const;
  double sigma() const;
  bool sigma_override() const;

  double density(double J) const;
  double fourier(double k) const;

  // R with density(J) = 0 for |J| > R; +inf for unbounded support.
  double support_radius() const;
  // Radius beyond which the density is below 1e-16 of its peak (equal to
  // support_radius() for bounded support).
  double effective_radius() const;
  // Kinks and jumps of the density, as signed offsets from the centre.
  std::span<const double> breakpoints() const;
  bool smooth() const;

  // Widths at which this family is admissible.
  SigmaRange sigma_range() const;
  ActionDistribution with_sigma(double sigma) const;

  std::string label() const;

 private:
  struct Impl;
  explicit ActionDistribution(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// w^sigma_n(J) = w^sigma(J - n).
double density_translate(const ActionDistribution& dist, int n, double J);

// Overlap  w_{n,n'} = int sqrt(w_n(J) w_{n'}(J)) dJ. Closed form for the
// Gaussian and uniform families, adaptive quadrature for custom densities
// (throws QuadratureNotConverged).
double overlap_entry(const ActionDistribution& dist, int n, int n2);

class OverlapMatrix {
 public:
  // Precomputes offsets |n - n'| <= max_offset; larger offsets are
  // evaluated on demand.
  OverlapMatrix(ActionDistribution dist, int max_offset);

  double entry(int n, int n2) const;
  // B such that entry(n, n') = 0 whenever |n - n'| > B; nullopt if unbounded.
  std::optional<int> half_bandwidth() const { return half_bandwidth_; }
  const ActionDistribution& distribution() const { return dist_; }

 private:
  ActionDistribution dist_;
  std::vector<double> by_offset_;
  std::optional<int> half_bandwidth_;
};

}  // namespace cylcs
