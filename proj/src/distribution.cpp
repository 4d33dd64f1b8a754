#include "cylcs/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cylcs/errors.hpp"
#include "cylcs/quadrature.hpp"

namespace cylcs {

namespace {

const double kInvSqrtTwoPi = 1.0 / std::sqrt(kTwoPi);
// Tail cutoff: density below this fraction of its peak is treated as zero.
constexpr double kTailFraction = 1e-16;

std::string fmt_sigma(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s);
  return buf;
}

// Normalization constant, effective radius and breakpoints of a custom shape,
// all at the reference width. Shared by every width of the family.
struct CustomData {
  CustomShape shape;
  double mass = 1.0;
  double reff = kInf;
  std::vector<double> signed_breakpoints;
};

std::shared_ptr<const CustomData> prepare_custom(CustomShape shape) {
  if (!shape.density) throw ConfigError("custom density: no density function given");
  if (!(shape.reference_sigma > 0)) throw ConfigError("custom density: reference_sigma must be positive");
  if (!(shape.support_radius > 0)) throw ConfigError("custom density: support_radius must be positive");

  auto data = std::make_shared<CustomData>();
  const double s0 = shape.reference_sigma;

  if (std::isfinite(shape.support_radius)) {
    data->reff = shape.support_radius;
  } else {
    const double step = s0 / 8.0;
    const int count = 8000;
    double peak = 0.0;
    for (int i = 0; i <= count; ++i) peak = std::max(peak, shape.density(i * step));
    if (!(peak > 0)) throw ConfigError("custom density: identically zero");
    int last = 0;
    for (int i = 0; i <= count; ++i)
      if (shape.density(i * step) >= kTailFraction * peak) last = i;
    if (last == count) throw ConfigError("custom density: tail does not decay within 1000 reference widths");
    data->reff = (last + 1) * step;
  }

  // Evenness and non-negativity on a probe grid.
  double peak = 0.0;
  const int probes = 64;
  for (int i = 0; i <= probes; ++i) {
    const double x = data->reff * i / probes;
    const double right = shape.density(x);
    const double left = shape.density(-x);
    if (right < 0 || left < 0) throw ConfigError("custom density: negative values");
    peak = std::max(peak, right);
  }
  for (int i = 0; i <= probes; ++i) {
    const double x = data->reff * i / probes;
    if (std::abs(shape.density(x) - shape.density(-x)) > 1e-12 * peak)
      throw ConfigError("custom density: not even");
  }

  for (double b : shape.breakpoints) {
    if (b < 0) throw ConfigError("custom density: breakpoints must be given for x >= 0");
    data->signed_breakpoints.push_back(b);
    if (b > 0) data->signed_breakpoints.push_back(-b);
  }
  if (std::isfinite(shape.support_radius)) {
    data->signed_breakpoints.push_back(shape.support_radius);
    data->signed_breakpoints.push_back(-shape.support_radius);
  }
  std::sort(data->signed_breakpoints.begin(), data->signed_breakpoints.end());
  data->signed_breakpoints.erase(std::unique(data->signed_breakpoints.begin(), data->signed_breakpoints.end()),
                                 data->signed_breakpoints.end());

  const auto& f = shape.density;
  data->mass = quad::integrate([&](double x) { return f(x); }, -data->reff, data->reff, data->signed_breakpoints,
                               {.abs_tol = 1e-14 * std::max(1.0, peak * data->reff)});
  if (!(data->mass > 0)) throw ConfigError("custom density: zero total mass");
  data->shape = std::move(shape);
  return data;
}

}  // namespace

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian:
      return "gaussian";
    case DistKind::uniform:
      return "uniform";
    case DistKind::custom:
      return "custom";
  }
  return "unknown";
}

struct ActionDistribution::Impl {
  DistKind kind;
  double sigma;
  bool sigma_override = false;
  std::shared_ptr<const CustomData> custom;
  std::vector<double> breakpoints;  // at this sigma
};

ActionDistribution::ActionDistribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ActionDistribution ActionDistribution::gaussian(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ConfigError("gaussian: sigma must be positive and finite");
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::gaussian;
  impl->sigma = sigma;
  return ActionDistribution(std::move(impl));
}

ActionDistribution ActionDistribution::uniform(double sigma, bool allow_sigma_out_of_range) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ConfigError("uniform: sigma must be positive and finite");
  if (!allow_sigma_out_of_range && (sigma < 0.5 || sigma > 1.0))
    throw ConfigError("uniform: sigma = " + fmt_sigma(sigma) +
                      " outside [1/2, 1]; pass the out-of-range override to accept it");
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::uniform;
  impl->sigma = sigma;
  impl->sigma_override = allow_sigma_out_of_range;
  impl->breakpoints = {-sigma, sigma};
  return ActionDistribution(std::move(impl));
}

ActionDistribution ActionDistribution::custom(CustomShape shape, double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ConfigError("custom: sigma must be positive and finite");
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::custom;
  impl->sigma = sigma;
  impl->custom = prepare_custom(std::move(shape));
  const double scale = sigma / impl->custom->shape.reference_sigma;
  for (double b : impl->custom->signed_breakpoints) impl->breakpoints.push_back(b * scale);
  return ActionDistribution(std::move(impl));
}

DistKind ActionDistribution::kind() const { return impl_->kind; }
double ActionDistribution::sigma() const { return impl_->sigma; }
bool ActionDistribution::sigma_override() const { return impl_->sigma_override; }

double ActionDistribution::density(double J) const {
  const double s = impl_->sigma;
  switch (impl_->kind) {
    case DistKind::gaussian:
      return kInvSqrtTwoPi / s * std::exp(-0.5 * (J / s) * (J / s));
    case DistKind::uniform:
      // Right-continuous indicator of [-sigma, sigma).
      return (J >= -s && J < s) ? 0.5 / s : 0.0;
    case DistKind::custom: {
      const auto& c = *impl_->custom;
      const double ratio = c.shape.reference_sigma / s;
      const double x = J * ratio;
      if (std::abs(x) > c.reff) return 0.0;
      return ratio * c.shape.density(x) / c.mass;
    }
  }
  return 0.0;
}

double ActionDistribution::fourier(double k) const {
  const double s = impl_->sigma;
  switch (impl_->kind) {
    case DistKind::gaussian:
      return kInvSqrtTwoPi * std::exp(-0.5 * s * s * k * k);
    case DistKind::uniform: {
      const double x = s * k;
      return kInvSqrtTwoPi * (x == 0.0 ? 1.0 : std::sin(x) / x);
    }
    case DistKind::custom: {
      const auto& c = *impl_->custom;
      const double kr = k * s / c.shape.reference_sigma;
      const auto& f = c.shape.density;
      std::vector<double> bps;
      for (double b : c.signed_breakpoints)
        if (b > 0) bps.push_back(b);
      const double half =
          quad::integrate([&](double x) { return std::cos(kr * x) * f(x); }, 0.0, c.reff, bps, {.abs_tol = 1e-14 * c.mass});
      return kInvSqrtTwoPi * 2.0 * half / c.mass;
    }
  }
  return 0.0;
}

double ActionDistribution::support_radius() const {
  switch (impl_->kind) {
    case DistKind::gaussian:
      return kInf;
    case DistKind::uniform:
      return impl_->sigma;
    case DistKind::custom: {
      const auto& c = *impl_->custom;
      return c.shape.support_radius * impl_->sigma / c.shape.reference_sigma;
    }
  }
  return kInf;
}

double ActionDistribution::effective_radius() const {
  switch (impl_->kind) {
    case DistKind::gaussian:
      // exp(-x^2 / 2 sigma^2) = 1e-16
      return impl_->sigma * std::sqrt(-2.0 * std::log(kTailFraction));
    case DistKind::uniform:
      return impl_->sigma;
    case DistKind::custom: {
      const auto& c = *impl_->custom;
      return c.reff * impl_->sigma / c.shape.reference_sigma;
    }
  }
  return kInf;
}

std::span<const double> ActionDistribution::breakpoints() const { return impl_->breakpoints; }

bool ActionDistribution::smooth() const {
  switch (impl_->kind) {
    case DistKind::gaussian:
      return true;
    case DistKind::uniform:
      return false;
    case DistKind::custom:
      return impl_->custom->shape.smooth && impl_->breakpoints.empty();
  }
  return false;
}

SigmaRange ActionDistribution::sigma_range() const {
  if (impl_->kind == DistKind::uniform) {
    // Below 1/2 the translates leave gaps and N^sigma vanishes.
    return impl_->sigma_override ? SigmaRange{0.5, kInf} : SigmaRange{0.5, 1.0};
  }
  return {};
}

ActionDistribution ActionDistribution::with_sigma(double sigma) const {
  switch (impl_->kind) {
    case DistKind::gaussian:
      return gaussian(sigma);
    case DistKind::uniform:
      return uniform(sigma, impl_->sigma_override);
    case DistKind::custom: {
      if (!(sigma > 0) || !std::isfinite(sigma)) throw ConfigError("custom: sigma must be positive and finite");
      auto impl = std::make_shared<Impl>(*impl_);
      impl->sigma = sigma;
      impl->breakpoints.clear();
      const double scale = sigma / impl->custom->shape.reference_sigma;
      for (double b : impl->custom->signed_breakpoints) impl->breakpoints.push_back(b * scale);
      return ActionDistribution(std::move(impl));
    }
  }
  return *this;
}

std::string ActionDistribution::label() const {
  std::string name = impl_->kind == DistKind::custom ? impl_->custom->shape.name : std::string(to_string(impl_->kind));
  return name + "(sigma=" + fmt_sigma(impl_->sigma) + ")";
}

double density_translate(const ActionDistribution& dist, int n, double J) { return dist.density(J - n); }

double overlap_entry(const ActionDistribution& dist, int n, int n2) {
  const double d = std::abs(static_cast<double>(n2) - static_cast<double>(n));
  const double s = dist.sigma();
  switch (dist.kind()) {
    case DistKind::gaussian:
      return std::exp(-d * d / (8.0 * s * s));
    case DistKind::uniform:
      // Length of [n-s, n+s) intersected with [n'-s, n'+s), over 2s.
      return std::max(0.0, 1.0 - d / (2.0 * s));
    case DistKind::custom: {
      if (d == 0.0) return 1.0;
      // Intersection of the supports when bounded; otherwise the geometric
      // mean is only negligible outside their union.
      const double R = dist.effective_radius();
      const bool bounded = std::isfinite(dist.support_radius());
      if (bounded && d >= 2.0 * R) return 0.0;
      const double lo = bounded ? d - R : -R, hi = bounded ? R : d + R;
      std::vector<double> bps{0.5 * d};
      for (double b : dist.breakpoints()) {
        bps.push_back(b);
        bps.push_back(b + d);
      }
      const double v = quad::integrate([&](double J) { return std::sqrt(dist.density(J) * dist.density(J - d)); },
                                       lo, hi, bps, {.abs_tol = 1e-12});
      return std::min(1.0, v);
    }
  }
  return 0.0;
}

OverlapMatrix::OverlapMatrix(ActionDistribution dist, int max_offset) : dist_(std::move(dist)) {
  if (max_offset < 0) throw ConfigError("OverlapMatrix: max_offset must be non-negative");
  by_offset_.resize(static_cast<std::size_t>(max_offset) + 1);
  for (int d = 0; d <= max_offset; ++d) by_offset_[d] = overlap_entry(dist_, 0, d);
  const double R = dist_.support_radius();
  if (std::isfinite(R)) half_bandwidth_ = std::max(0, static_cast<int>(std::ceil(2.0 * R)) - 1);
}

double OverlapMatrix::entry(int n, int n2) const {
  const long d = std::labs(static_cast<long>(n2) - static_cast<long>(n));
  if (half_bandwidth_ && d > *half_bandwidth_) return 0.0;
  if (d < static_cast<long>(by_offset_.size())) return by_offset_[d];
  return overlap_entry(dist_, 0, static_cast<int>(d));
}

}  // namespace cylcs
