#include "cylcs/custom_density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <json.hpp>

#include "cylcs/errors.hpp"

namespace cylcs {

namespace {

struct Table {
  std::vector<double> x;
  std::vector<double> y;
};

Table build_table(const SampledDensity& spec) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [J, v] : spec.samples) {
    if (!std::isfinite(J) || !std::isfinite(v)) throw ConfigError("custom density: non-finite sample");
    if (v < 0) throw ConfigError("custom density: negative sample value");
    if (spec.symmetrization == Symmetrization::mirror) {
      if (J < 0) throw ConfigError("custom density: mirror symmetrization expects samples with J >= 0");
      pts.emplace_back(J, v);
      if (J > 0) pts.emplace_back(-J, v);
    } else {
      pts.emplace_back(J, v);
    }
  }
  std::sort(pts.begin(), pts.end());
  Table t;
  for (const auto& [J, v] : pts) {
    if (!t.x.empty() && J == t.x.back()) throw ConfigError("custom density: duplicate sample abscissa");
    t.x.push_back(J);
    t.y.push_back(v);
  }
  const std::size_t min_points = spec.interpolation == Interpolation::cubic ? 4 : 2;
  if (t.x.size() < min_points) throw ConfigError("custom density: too few samples");
  return t;
}

double linear_at(const Table& t, double x) {
  if (x < t.x.front() || x > t.x.back()) return 0.0;
  auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  if (it == t.x.end()) return t.y.back();
  const std::size_t i = static_cast<std::size_t>(it - t.x.begin());
  const double x0 = t.x[i - 1], x1 = t.x[i];
  const double w = (x - x0) / (x1 - x0);
  return (1.0 - w) * t.y[i - 1] + w * t.y[i];
}

}  // namespace

CustomShape make_shape(const SampledDensity& spec) {
  auto table = std::make_shared<const Table>(build_table(spec));
  std::function<double(double)> raw;
  if (spec.interpolation == Interpolation::linear) {
    raw = [table](double x) { return linear_at(*table, x); };
  } else {
    auto x = table->x;
    auto y = table->y;
    auto spline = std::make_shared<const boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(y));
    const double lo = table->x.front(), hi = table->x.back();
    raw = [spline, lo, hi](double v) { return (v < lo || v > hi) ? 0.0 : std::max(0.0, (*spline)(v)); };
  }

  const double R = spec.support_radius;
  CustomShape shape;
  shape.name = spec.name;
  shape.reference_sigma = spec.reference_sigma;
  shape.smooth = false;
  if (spec.symmetrization == Symmetrization::average) {
    shape.density = [raw, R](double x) { return std::abs(x) > R ? 0.0 : 0.5 * (raw(x) + raw(-x)); };
  } else {
    shape.density = [raw, R](double x) { return std::abs(x) > R ? 0.0 : raw(x); };
  }
  const double outer = std::max(std::abs(table->x.front()), std::abs(table->x.back()));
  shape.support_radius = std::isfinite(R) ? R : outer;
  for (double x : table->x)
    if (x >= 0 && x < shape.support_radius) shape.breakpoints.push_back(x);
  if (spec.symmetrization == Symmetrization::average)
    for (double x : table->x)
      if (x < 0 && -x < shape.support_radius) shape.breakpoints.push_back(-x);
  std::sort(shape.breakpoints.begin(), shape.breakpoints.end());
  shape.breakpoints.erase(std::unique(shape.breakpoints.begin(), shape.breakpoints.end()), shape.breakpoints.end());
  return shape;
}

SampledDensity parse_sampled_density(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("custom density: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("custom density: top level must be an object");
  SampledDensity spec;
  try {
    spec.name = doc.value("name", std::string("custom"));
    spec.reference_sigma = doc.value("reference_sigma", 1.0);
    if (doc.contains("support_radius")) spec.support_radius = doc.at("support_radius").get<double>();
    const std::string sym = doc.value("symmetrize", std::string("mirror"));
    if (sym == "mirror")
      spec.symmetrization = Symmetrization::mirror;
    else if (sym == "average")
      spec.symmetrization = Symmetrization::average;
    else if (sym == "none")
      spec.symmetrization = Symmetrization::none;
    else
      throw ConfigError("custom density: unknown symmetrize '" + sym + "'");
    const std::string interp = doc.value("interpolation", std::string("linear"));
    if (interp == "linear")
      spec.interpolation = Interpolation::linear;
    else if (interp == "cubic")
      spec.interpolation = Interpolation::cubic;
    else
      throw ConfigError("custom density: unknown interpolation '" + interp + "'");
    if (!doc.contains("samples") || !doc.at("samples").is_array())
      throw ConfigError("custom density: missing 'samples' array");
    for (const auto& row : doc.at("samples")) {
      if (!row.is_array() || row.size() != 2) throw ConfigError("custom density: each sample must be [J, value]");
      spec.samples.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("custom density: ") + e.what());
  }
  return spec;
}

SampledDensity load_sampled_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("custom density: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sampled_density(buf.str());
}

}  // namespace cylcs
