#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cylcs/distribution.hpp"

namespace cylcs {

enum class Symmetrization { mirror, average, none };
enum class Interpolation { linear, cubic };

// Tabulated density at a reference width.
//   mirror:  samples cover J >= 0 and are reflected to J < 0
//   average: w(J) := (table(J) + table(-J)) / 2
//   none:    the table must already be even
// Outside the sampled range and beyond support_radius the density is zero.
// Cubic interpolation is monotone piecewise-cubic Hermite, so non-negative
// samples give a non-negative density.
struct SampledDensity {
  std::vector<std::pair<double, double>> samples;
  Symmetrization symmetrization = Symmetrization::mirror;
  Interpolation interpolation = Interpolation::linear;
  double support_radius = kInf;
  double reference_sigma = 1.0;
  std::string name = "custom";
};

CustomShape make_shape(const SampledDensity& table);

// JSON layout:
//   { "name": "...", "reference_sigma": 1.0, "support_radius": 4.0,
//     "symmetrize": "mirror" | "average" | "none",
//     "interpolation": "linear" | "cubic",
//     "samples": [[J, value], ...] }
// Throws ConfigError on malformed input.
SampledDensity parse_sampled_density(std::string_view json_text);
SampledDensity load_sampled_density(const std::filesystem::path& path);

}  // namespace cylcs
