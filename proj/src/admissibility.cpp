#include "cylcs/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "cylcs/coherent_state.hpp"
#include "cylcs/errors.hpp"
#include "cylcs/quadrature.hpp"

namespace cylcs {

namespace {

std::string fmt(const char* format, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string list(const std::vector<double>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt("%g", xs[i]);
  return out + "}";
}

// Breakpoints of N(J) = sum_n w(J - n) folded into [0, 1).
std::vector<double> folded_breakpoints(const ActionDistribution& d) {
  std::vector<double> out;
  for (double b : d.breakpoints()) out.push_back(b - std::floor(b));
  std::sort(out.begin(), out.end());
  return out;
}

double moment(const ActionDistribution& d, double (*f)(double)) {
  const double R = d.effective_radius();
  return quad::integrate([&](double J) { return d.density(J) * f(J); }, -R, R, d.breakpoints(), {.abs_tol = 1e-13});
}

double test_one(double) { return 1.0; }
double test_cos(double J) { return std::cos(J); }
double test_bump(double J) { return std::exp(-0.5 * J * J); }

Verdict combine(const std::vector<std::pair<std::string, Verdict>>& subs) {
  bool inconclusive = false;
  for (const auto& [name, v] : subs) {
    if (v == Verdict::fail) return Verdict::fail;
    if (v == Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

// Widths of the sweep the family admits, ascending.
std::vector<double> admissible_sweep(const ActionDistribution& dist, const SamplingPlan& plan) {
  std::vector<double> out;
  const auto range = dist.sigma_range();
  for (double s : plan.sigma_sweep)
    if (range.contains(s)) out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConditionRecord check_positive(const ActionDistribution& dist, const std::vector<double>& sigmas,
                               const std::vector<double>& Js, const SamplingPlan& plan) {
  ConditionRecord r{"i", "0 < N(J) < inf", Verdict::pass, 0.0, "", "", {}};
  double lowest = kInf, highest = 0.0;
  for (double s : sigmas) {
    const auto d = dist.with_sigma(s);
    const auto values = normalization_grid(d, Js, NormMethod::automatic, plan.exec);
    bool ok = true;
    for (double v : values) {
      if (!(v > 0) || !std::isfinite(v)) ok = false;
      lowest = std::min(lowest, v);
      highest = std::max(highest, v);
    }
    r.subchecks.emplace_back("sigma=" + fmt("%g", s), ok ? Verdict::pass : Verdict::fail);
  }
  r.status = combine(r.subchecks);
  r.grid = "J: " + std::to_string(Js.size()) + " points; sigma " + list(sigmas);
  r.notes = "min N = " + fmt("%.6g", lowest) + ", max N = " + fmt("%.6g", highest);
  return r;
}

ConditionRecord check_poisson(const ActionDistribution& dist, const std::vector<double>& sigmas,
                              const std::vector<double>& Js, const SamplingPlan& plan) {
  ConditionRecord r{"ii", "Poisson summation applicable to N", Verdict::pass, 0.0, "", "", {}};
  const double root = std::sqrt(kTwoPi);
  for (double s : sigmas) {
    const auto d = dist.with_sigma(s);
    const auto bps = folded_breakpoints(d);

    // Fourier coefficients of the period-1 function N against sqrt(2 pi) w^(2 pi k).
    std::vector<double> dev(static_cast<std::size_t>(plan.poisson_modes));
    for_each_index(plan.exec, plan.poisson_modes, [&](std::ptrdiff_t k) {
      const auto coeff = quad::integrate(
          [&](double J) { return normalization(d, J, NormMethod::direct_sum) * std::polar(1.0, kTwoPi * k * J); }, 0.0,
          1.0, bps, {.abs_tol = 1e-13});
      dev[k] = std::abs(coeff - root * d.fourier(kTwoPi * static_cast<double>(k)));
    });
    const double coeff_dev = *std::max_element(dev.begin(), dev.end());
    r.max_deviation = std::max(r.max_deviation, coeff_dev);
    r.subchecks.emplace_back("fourier-coefficients sigma=" + fmt("%g", s),
                             coeff_dev <= plan.tol ? Verdict::pass : Verdict::fail);

    // Pointwise series only converges for smooth densities.
    if (d.smooth()) {
      std::vector<double> pdev(Js.size());
      for_each_index(plan.exec, static_cast<std::ptrdiff_t>(Js.size()), [&](std::ptrdiff_t i) {
        pdev[i] = std::abs(normalization(d, Js[i], NormMethod::direct_sum) -
                           normalization(d, Js[i], NormMethod::poisson_sum));
      });
      const double point_dev = *std::max_element(pdev.begin(), pdev.end());
      r.max_deviation = std::max(r.max_deviation, point_dev);
      r.subchecks.emplace_back("pointwise sigma=" + fmt("%g", s), point_dev <= plan.tol ? Verdict::pass : Verdict::fail);
    }
  }
  r.status = combine(r.subchecks);
  r.grid = "k < " + std::to_string(plan.poisson_modes) + "; J: " + std::to_string(Js.size()) + " points; sigma " +
           list(sigmas);
  r.notes = dist.smooth() ? "Fourier coefficients and pointwise series"
                          : "density has jumps or kinks: Fourier coefficients only, pointwise series not applicable";
  return r;
}

ConditionRecord check_dirac(const ActionDistribution& dist, const std::vector<double>& sweep, const SamplingPlan& plan) {
  ConditionRecord r{"iii", "w^sigma -> delta as sigma -> 0", Verdict::pass, 0.0, "", "", {}};
  std::vector<double> descending(sweep.rbegin(), sweep.rend());
  std::vector<double> devs;
  for (double s : descending) {
    const auto d = dist.with_sigma(s);
    double dev = 0.0;
    for (auto f : {test_one, test_cos, test_bump}) dev = std::max(dev, std::abs(moment(d, f) - f(0.0)));
    devs.push_back(dev);
  }
  r.grid = "sigma " + list(descending) + "; tests {1, cos J, exp(-J^2/2)}";
  r.notes = "deviations " + list(devs);
  if (devs.empty()) {
    r.status = Verdict::inconclusive;
    r.notes = "no admissible sigma in the sweep";
    return r;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < devs.size(); ++i)
    if (devs[i] > devs[i - 1] + 1e-14) monotone = false;
  r.max_deviation = devs.back();
  r.subchecks.emplace_back("monotone", monotone ? Verdict::pass : Verdict::fail);
  if (dist.sigma_range().min > 0) {
    r.subchecks.emplace_back("limit", Verdict::inconclusive);
    r.notes += "; sigma bounded below by " + fmt("%g", dist.sigma_range().min) + ", limit not reachable";
  } else {
    r.subchecks.emplace_back("limit", devs.back() <= plan.dirac_tol ? Verdict::pass : Verdict::fail);
  }
  r.status = combine(r.subchecks);
  return r;
}

ConditionRecord check_fourier_limit(const ActionDistribution& dist, const std::vector<double>& sweep,
                                    const SamplingPlan& plan) {
  ConditionRecord r{"iv", "sqrt(2 pi) w^(k) -> delta_k0 as sigma -> inf", Verdict::pass, 0.0, "", "", {}};
  r.grid = "k " + list(plan.k_grid) + "; sigma " + list(sweep);
  if (sweep.empty()) {
    r.status = Verdict::inconclusive;
    r.notes = "no admissible sigma in the sweep";
    return r;
  }
  const double root = std::sqrt(kTwoPi);
  double zero_dev = 0.0;
  for (double s : sweep) zero_dev = std::max(zero_dev, std::abs(root * dist.with_sigma(s).fourier(0.0) - 1.0));
  r.subchecks.emplace_back("k=0 normalization", zero_dev <= plan.tol ? Verdict::pass : Verdict::fail);

  const auto top = dist.with_sigma(sweep.back());
  double off = 0.0;
  for (double k : plan.k_grid)
    if (k != 0.0) off = std::max(off, std::abs(root * top.fourier(k)));
  r.max_deviation = std::max(zero_dev, off);
  if (std::isfinite(dist.sigma_range().max)) {
    r.subchecks.emplace_back("limit", Verdict::inconclusive);
    r.notes = "sigma bounded above by " + fmt("%g", dist.sigma_range().max) + ", limit not reachable; max |k != 0| = " +
              fmt("%.3g", off);
  } else {
    r.subchecks.emplace_back("limit", off <= plan.limit_tol ? Verdict::pass : Verdict::fail);
    r.notes = "max_{k != 0} sqrt(2 pi)|w^(k)| = " + fmt("%.3g", off) + " at sigma = " + fmt("%g", sweep.back());
  }
  r.status = combine(r.subchecks);
  return r;
}

std::vector<double> overlap_row(const ActionDistribution& d, int cutoff, Exec exec) {
  std::vector<double> o(static_cast<std::size_t>(cutoff) + 1);
  for_each_index(exec, cutoff + 1, [&](std::ptrdiff_t k) { o[k] = overlap_entry(d, static_cast<int>(k), 0); });
  return o;
}

ConditionRecord check_overlaps(const ActionDistribution& dist, const std::vector<double>& sigmas,
                               const std::vector<double>& sweep, const SamplingPlan& plan,
                               AdmissibilityReport& report) {
  ConditionRecord r{"v", "overlap decay and large-sigma coherence", Verdict::pass, 0.0, "", "", {}};
  const int D = plan.index_cutoff;
  std::string notes;
  for (double s : sigmas) {
    const auto o = overlap_row(dist.with_sigma(s), D, plan.exec);
    bool monotone = true, strict_tail = true;
    for (int d = 1; d <= D; ++d) {
      if (o[d] > o[d - 1] + 1e-12) monotone = false;
      if (d > D / 2 && !(o[d] < o[d - 1])) strict_tail = false;
    }
    const bool vanished = o[D] <= 1e-12;
    const bool ok = monotone && (vanished || strict_tail);
    r.subchecks.emplace_back("decay sigma=" + fmt("%g", s), ok ? Verdict::pass : Verdict::fail);
    notes += "o_" + std::to_string(D) + "(" + fmt("%g", s) + ") = " + fmt("%.3g", o[D]) + "; ";
  }

  if (sweep.empty() || std::isfinite(dist.sigma_range().max)) {
    r.subchecks.emplace_back("large-sigma", Verdict::inconclusive);
    notes += "sigma bounded above, large-sigma overlaps not reachable";
  } else {
    std::vector<std::vector<double>> rows;
    for (double s : sweep) rows.push_back(overlap_row(dist.with_sigma(s), D, plan.exec));
    const auto& top = rows.back();
    int n0 = 0;
    for (int d = 1; d <= D; ++d) {
      bool ok = 1.0 - top[d] <= plan.limit_tol;
      for (std::size_t j = 1; ok && j < rows.size(); ++j)
        if (rows[j][d] < rows[j - 1][d] - 1e-12) ok = false;
      if (!ok) break;
      n0 = d;
    }
    report.N0 = n0;
    report.N0_capped = n0 == D;
    r.max_deviation = 1.0 - top[1];
    r.subchecks.emplace_back("large-sigma", n0 >= 1 ? Verdict::pass : Verdict::fail);
    notes += "N0 = " + std::to_string(n0) + (n0 == D ? " (capped by index cutoff)" : "") + " at sigma = " +
             fmt("%g", sweep.back());
  }
  r.status = combine(r.subchecks);
  r.grid = "|n - n'| <= " + std::to_string(D) + "; sigma " + list(sigmas);
  r.notes = notes;
  return r;
}

}  // namespace

std::vector<double> SamplingPlan::resolved_J_grid() const {
  if (!J_grid.empty()) return J_grid;
  std::vector<double> out(201);
  for (int i = 0; i < 201; ++i) out[i] = -2.0 + 4.0 * i / 200.0;
  return out;
}

void SamplingPlan::validate() const {
  if (index_cutoff < 1) throw ConfigError("sampling plan: index cutoff must be >= 1");
  if (poisson_modes < 1) throw ConfigError("sampling plan: poisson_modes must be >= 1");
  if (!(tol > 0) || !(dirac_tol > 0) || !(limit_tol > 0)) throw ConfigError("sampling plan: tolerances must be > 0");
  for (double s : sigma_sweep)
    if (!(s > 0)) throw ConfigError("sampling plan: sigma sweep values must be > 0");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool AdmissibilityReport::any_failed() const {
  return std::any_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.status == Verdict::fail; });
}

AdmissibilityReport verify_admissibility(const ActionDistribution& dist, const SamplingPlan& plan) {
  plan.validate();
  const auto Js = plan.resolved_J_grid();
  const auto sweep = admissible_sweep(dist, plan);
  std::vector<double> sigmas{dist.sigma()};
  for (double s : sweep)
    if (s != dist.sigma()) sigmas.push_back(s);

  AdmissibilityReport report;
  report.dist_label = dist.label();
  report.conditions[0] = check_positive(dist, sigmas, Js, plan);
  report.conditions[1] = check_poisson(dist, sigmas, Js, plan);
  report.conditions[2] = check_dirac(dist, sweep, plan);
  report.conditions[3] = check_fourier_limit(dist, sweep, plan);
  report.conditions[4] = check_overlaps(dist, sigmas, sweep, plan, report);
  return report;
}

}  // namespace cylcs
