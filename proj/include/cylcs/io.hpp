#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cylcs/admissibility.hpp"
#include "cylcs/coherent_state.hpp"
#include "cylcs/dynamics.hpp"
#include "cylcs/operator.hpp"
#include "cylcs/symbols.hpp"

namespace cylcs {

inline constexpr const char* kToolName = "cylcs";
inline constexpr const char* kToolVersion = "1.0.0";

// %.17g: round-trips every double and is identical across platforms.
std::string format_double(double v);

// Describes how an output was produced. Written as '#'-prefixed lines at the
// top of CSV files and as a "provenance" object in JSON files.
struct Provenance {
  std::string command;
  std::string dist_label;
  std::string dist_kind;
  double sigma = 0.0;
  int N = 0;
  double tol = 0.0;
  std::vector<std::pair<std::string, std::string>> extra;

  static Provenance of(const std::string& command, const ActionDistribution& dist, int N, double tol);
};

void write_provenance_csv(std::ostream& out, const Provenance& prov);
std::string provenance_json(const Provenance& prov);

// Triplets (n, n2, re, im): every nonzero entry plus the full diagonal.
void write_operator_csv(std::ostream& out, const TruncatedOperator& A, const Provenance& prov);
// {"provenance", "label", "dist", "N", "re": [[...]], "im": [[...]]}
void write_operator_json(std::ostream& out, const TruncatedOperator& A, const Provenance& prov);
// Reads either format; the distribution label comes from the provenance.
TruncatedOperator read_operator(const std::filesystem::path& path);

// (n, re, im)
void write_coefficients_csv(std::ostream& out, const Eigen::VectorXcd& coeffs, int N, const Provenance& prov);
// (J, phi, re, im)
void write_field_csv(std::ostream& out, const LowerSymbolField& field, const Provenance& prov);
void write_field_json(std::ostream& out, const LowerSymbolField& field, const Provenance& prov);
// (m, value)
void write_dcoeffs_csv(std::ostream& out, const DCoefficients& d, const Provenance& prov);

void write_report_json(std::ostream& out, const AdmissibilityReport& report, const Provenance& prov);
void write_report_csv(std::ostream& out, const AdmissibilityReport& report, const Provenance& prov);

// One CSV (t, J, phi, rho) per frame, frame_0000.csv, ..., plus index.csv
// listing (frame, t, file, mass). Returns the written paths.
std::vector<std::filesystem::path> write_frames(const std::filesystem::path& dir,
                                                const std::vector<EvolutionFrame>& frames, const Provenance& prov);

}  // namespace cylcs
