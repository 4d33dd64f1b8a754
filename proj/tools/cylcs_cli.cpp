// cylcs: command-line front end.
//
//   cylcs verify       --dist gaussian --sigma 1
//   cylcs quantize     --dist uniform --sigma 1 --builtin exp+ --trunc 10
//   cylcs lower-symbol --operator out/operator.csv --dist uniform --sigma 1
//   cylcs overlap      --J0 0.3 --phi0 1
//   cylcs evolve       --hamiltonian J2 --J0 0.3 --phi0 1 --times 0,0.5,1
//   cylcs d-coeffs     --J0 0 --M 5
//   cylcs rel-error    --builtin J2 --C 1
//
// Exit codes: 0 ok, 1 numerical failure or failed admissibility condition,
// 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cylcs/admissibility.hpp"
#include "cylcs/coherent_state.hpp"
#include "cylcs/dynamics.hpp"
#include "cylcs/errors.hpp"
#include "cylcs/io.hpp"
#include "cylcs/symbols.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace cylcs;
using cylcs::cli::RunConfig;

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> dist, custom_file, observable, builtin, op, hamiltonian, track, out, format, times,
      sigma_sweep;
  std::optional<double> sigma, tol, J0, phi0, lambda, C, J_min, J_max;
  std::optional<int> trunc, M, J_steps, phi_steps, index_cutoff;
  bool allow = false, generic = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "INI file; flags override its values");
  sub->add_option("--dist", f.dist, "gaussian | uniform | custom");
  sub->add_option("--sigma", f.sigma, "distribution width");
  sub->add_option("--custom-file", f.custom_file, "sampled density (JSON) for --dist custom");
  sub->add_flag("--allow-sigma-out-of-range", f.allow, "accept uniform sigma outside [1/2, 1]");
  sub->add_option("--trunc", f.trunc, "basis window half-width N");
  sub->add_option("--tol", f.tol, "absolute quadrature tolerance per entry");
  sub->add_option("--grid-J-min", f.J_min, "grid: smallest J");
  sub->add_option("--grid-J-max", f.J_max, "grid: largest J");
  sub->add_option("--grid-J-steps", f.J_steps, "grid: J points");
  sub->add_option("--grid-phi-steps", f.phi_steps, "grid: phi points on [0, 2 pi)");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--format", f.format, "csv | json");
}

void add_observable(CLI::App* sub, Flags& f) {
  sub->add_option("--observable", f.observable, "observable file (JSON)");
  sub->add_option("--builtin", f.builtin, "J, J2, exp+, exp-, cos, sin, saw, one, angle");
  sub->add_option("--lambda", f.lambda, "amplitude of cos / sin builtins");
  sub->add_flag("--generic", f.generic, "force adaptive quadrature for every entry");
}

void add_point(CLI::App* sub, Flags& f) {
  sub->add_option("--J0", f.J0, "action of the coherent state");
  sub->add_option("--phi0", f.phi0, "angle of the coherent state");
}

RunConfig merge(const Flags& f) {
  RunConfig c;
  if (f.config) cli::apply_config_file(c, *f.config);
  if (f.dist) c.dist = *f.dist;
  if (f.sigma) c.sigma = *f.sigma;
  if (f.custom_file) c.custom_file = *f.custom_file;
  if (f.allow) c.allow_sigma_out_of_range = true;
  if (f.sigma_sweep) c.sigma_sweep = cli::parse_list(*f.sigma_sweep);
  if (f.index_cutoff) c.index_cutoff = *f.index_cutoff;
  if (f.trunc) c.trunc = *f.trunc;
  if (f.J0) c.J0 = *f.J0;
  if (f.phi0) c.phi0 = *f.phi0;
  if (f.tol) c.tol = *f.tol;
  if (f.observable) c.observable_file = *f.observable;
  if (f.builtin) c.builtin = *f.builtin;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.generic) c.generic = true;
  if (f.op) c.operator_file = *f.op;
  if (f.M) c.M = *f.M;
  if (f.C) c.C = *f.C;
  if (f.hamiltonian) c.hamiltonian = *f.hamiltonian;
  if (f.times) c.times = cli::parse_list(*f.times);
  if (f.track) c.track = *f.track;
  if (f.J_min) c.grid_J_min = *f.J_min, c.grid_J_given = true;
  if (f.J_max) c.grid_J_max = *f.J_max, c.grid_J_given = true;
  if (f.J_steps) c.grid_J_steps = *f.J_steps;
  if (f.phi_steps) c.grid_phi_steps = *f.phi_steps;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = *f.format;
  c.validate();
  return c;
}

std::ofstream open_output(const RunConfig& c, const std::string& stem) {
  fs::create_directories(c.out);
  const fs::path path = c.out / (stem + "." + c.format);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
  return out;
}

std::ofstream open_csv(const RunConfig& c, const std::string& stem) {
  RunConfig copy = c;
  copy.format = "csv";
  return open_output(copy, stem);
}

Provenance provenance(const std::string& command, const ActionDistribution& dist, const RunConfig& c) {
  auto p = Provenance::of(command, dist, c.trunc, c.tol);
  p.extra.emplace_back("J0", format_double(c.J0));
  p.extra.emplace_back("phi0", format_double(c.phi0));
  return p;
}

int cmd_verify(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  SamplingPlan plan;
  plan.sigma_sweep = c.sigma_sweep;
  plan.index_cutoff = c.index_cutoff;
  const auto report = verify_admissibility(dist, plan);
  auto prov = provenance("verify", dist, c);
  prov.extra.emplace_back("sigma_sweep", [&] {
    std::string s;
    for (double v : c.sigma_sweep) s += (s.empty() ? "" : ",") + format_double(v);
    return s;
  }());
  auto out = open_output(c, "report");
  if (c.format == "json")
    write_report_json(out, report, prov);
  else
    write_report_csv(out, report, prov);
  for (const auto& cond : report.conditions)
    std::cout << "(" << cond.id << ") " << to_string(cond.status) << "  " << cond.title
              << "  max_deviation=" << format_double(cond.max_deviation) << '\n';
  return report.any_failed() ? 1 : 0;
}

int cmd_quantize(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  const auto op = cli::build_operator(dist, c);
  auto out = open_output(c, "operator");
  const auto prov = provenance("quantize", dist, c);
  if (c.format == "json")
    write_operator_json(out, op, prov);
  else
    write_operator_csv(out, op, prov);
  std::cout << op.label << ": N=" << op.N << " bandwidth=" << op.bandwidth()
            << " hermiticity_defect=" << format_double(op.hermiticity_defect()) << '\n';
  return 0;
}

TruncatedOperator operator_from(const ActionDistribution& dist, const RunConfig& c) {
  if (!c.operator_file.empty()) return read_operator(c.operator_file);
  return cli::build_operator(dist, c);
}

int cmd_lower_symbol(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  const auto op = operator_from(dist, c);
  const auto field = lower_symbol_field(dist, op, c.grid().points());
  auto prov = provenance("lower-symbol", dist, c);
  prov.N = op.N;
  auto out = open_output(c, "lower_symbol");
  if (c.format == "json")
    write_field_json(out, field, prov);
  else
    write_field_csv(out, field, prov);
  return 0;
}

int cmd_overlap(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  const PhasePoint p0(c.J0, c.phi0);
  const auto grid = c.grid().points();
  LowerSymbolField field{grid, overlap_kernel_grid(dist, p0, grid, c.trunc), "<p0|q>"};
  const auto prov = provenance("overlap", dist, c);
  {
    auto out = open_output(c, "overlap");
    if (c.format == "json")
      write_field_json(out, field, prov);
    else
      write_field_csv(out, field, prov);
  }
  auto state = open_csv(c, "state");
  write_coefficients_csv(state, coherent_state(dist, p0, c.trunc).coeffs, c.trunc, prov);
  return 0;
}

int cmd_evolve(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  TruncatedOperator H;
  if (!c.operator_file.empty()) {
    H = read_operator(c.operator_file);
  } else {
    RunConfig hc = c;
    hc.observable_file.clear();
    hc.builtin = c.hamiltonian;
    H = cli::build_operator(dist, hc);
  }
  const Propagator U(H);
  const PhasePoint p0(c.J0, c.phi0);
  const PhaseGrid grid =
      c.grid_J_given ? c.grid() : certified_grid(dist, p0, 0.0, c.grid_J_steps, c.grid_phi_steps);
  const auto frames = localization_frames(dist, U, p0, c.times, grid);
  auto prov = provenance("evolve", dist, c);
  prov.extra.emplace_back("hamiltonian", H.label);
  for (const auto& path : write_frames(c.out / "frames", frames, prov)) std::cout << "wrote " << path.string() << '\n';
  if (!c.track.empty()) {
    RunConfig ac = c;
    ac.observable_file.clear();
    ac.builtin = c.track;
    const auto A = cli::build_operator(dist, ac);
    const auto values = evolved_lower_symbol(dist, U, A, p0, c.times);
    auto out = open_csv(c, "tracked");
    write_provenance_csv(out, prov);
    out << "# observable: " << A.label << '\n' << "t,re,im\n";
    for (std::size_t k = 0; k < values.size(); ++k)
      out << format_double(c.times[k]) << ',' << format_double(values[k].real()) << ','
          << format_double(values[k].imag()) << '\n';
  }
  return 0;
}

int cmd_dcoeffs(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  const int M = c.M >= 0 ? c.M : harmonic_cutoff(dist);
  const auto d = d_coefficients(dist, c.J0, M, required_truncation(dist, c.J0) + M);
  auto out = open_csv(c, "d_coeffs");
  write_dcoeffs_csv(out, d, provenance("d-coeffs", dist, c));
  return 0;
}

int cmd_rel_error(const RunConfig& c) {
  const auto dist = cli::make_distribution(c);
  const auto f = cli::resolve_observable(c);
  const auto A = cli::build_operator(dist, c);
  const auto field = relative_error(dist, f, A, c.grid().points(), c.C);
  auto prov = provenance("rel-error", dist, c);
  if (c.C) prov.extra.emplace_back("C", format_double(*c.C));
  auto out = open_output(c, "rel_error");
  if (c.format == "json")
    write_field_json(out, field, prov);
  else
    write_field_csv(out, field, prov);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state quantization on the cylinder S^1 x R"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "check admissibility conditions (i)-(v)");
  add_common(verify, f);
  verify->add_option("--sigma-sweep", f.sigma_sweep, "comma-separated widths for the limit checks");
  verify->add_option("--index-cutoff", f.index_cutoff, "largest |n - n'| probed");

  auto* quantize_cmd = app.add_subcommand("quantize", "quantize an observable into a truncated operator");
  add_common(quantize_cmd, f);
  add_observable(quantize_cmd, f);
  quantize_cmd->add_option("--M", f.M, "harmonics kept for the saw builtin");

  auto* lower = app.add_subcommand("lower-symbol", "lower symbol <x|A|x> on a phase-space grid");
  add_common(lower, f);
  add_observable(lower, f);
  lower->add_option("--operator", f.op, "operator file written by quantize");

  auto* overlap = app.add_subcommand("overlap", "overlap kernel <p0|q> on a grid and the state coefficients");
  add_common(overlap, f);
  add_point(overlap, f);

  auto* evolve = app.add_subcommand("evolve", "localization frames rho(J, phi, t)");
  add_common(evolve, f);
  add_point(evolve, f);
  evolve->add_option("--hamiltonian", f.hamiltonian, "builtin Hamiltonian (default J2)");
  evolve->add_option("--operator", f.op, "Hamiltonian from an operator file");
  evolve->add_option("--times", f.times, "comma-separated times");
  evolve->add_option("--track", f.track, "builtin observable whose evolved lower symbol is written");
  evolve->add_option("--lambda", f.lambda, "amplitude of cos / sin builtins");

  auto* dco = app.add_subcommand("d-coeffs", "coefficients d_m(J0)");
  add_common(dco, f);
  add_point(dco, f);
  dco->add_option("--M", f.M, "largest |m| (default: where overlaps vanish)");

  auto* rel = app.add_subcommand("rel-error", "relative error of the lower symbol against f");
  add_common(rel, f);
  add_observable(rel, f);
  rel->add_option("--C", f.C, "denominator shift (default 1 + |min f| on the grid)");
  rel->add_option("--M", f.M, "harmonics kept for the saw builtin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const RunConfig c = merge(f);
    if (verify->parsed()) return cmd_verify(c);
    if (quantize_cmd->parsed()) return cmd_quantize(c);
    if (lower->parsed()) return cmd_lower_symbol(c);
    if (overlap->parsed()) return cmd_overlap(c);
    if (evolve->parsed()) return cmd_evolve(c);
    if (dco->parsed()) return cmd_dcoeffs(c);
    if (rel->parsed()) return cmd_rel_error(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
