#include "cylcs/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cylcs/errors.hpp"

namespace cylcs {

using nlohmann::json;

namespace {

json provenance_object(const Provenance& prov) {
  json j = json::object();
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = prov.command;
  j["dist"] = prov.dist_label;
  j["kind"] = prov.dist_kind;
  j["sigma"] = prov.sigma;
  j["N"] = prov.N;
  j["tol"] = prov.tol;
  for (const auto& [k, v] : prov.extra) j[k] = v;
  return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

TruncatedOperator read_operator_json(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
    TruncatedOperator op;
    op.N = doc.at("N").get<int>();
    op.label = doc.value("label", std::string("operator"));
    op.dist_label = doc.at("provenance").at("dist").get<std::string>();
    const auto re = doc.at("re").get<std::vector<std::vector<double>>>();
    const auto im = doc.at("im").get<std::vector<std::vector<double>>>();
    const int D = 2 * op.N + 1;
    if (op.N < 1 || static_cast<int>(re.size()) != D || static_cast<int>(im.size()) != D)
      throw ConfigError("operator file " + name + ": matrix size does not match N");
    op.mat.resize(D, D);
    for (int i = 0; i < D; ++i) {
      if (static_cast<int>(re[i].size()) != D || static_cast<int>(im[i].size()) != D)
        throw ConfigError("operator file " + name + ": ragged matrix row");
      for (int j = 0; j < D; ++j) op.mat(i, j) = cdouble(re[i][j], im[i][j]);
    }
    op.trusted = TrustMask::Constant(D, D, true);
    return op;
  } catch (const json::exception& e) {
    throw ConfigError("operator file " + name + ": " + e.what());
  }
}

TruncatedOperator read_operator_csv(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::map<std::string, std::string> meta;
  std::vector<std::tuple<int, int, double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) meta[trim(line.substr(1, colon - 1))] = trim(line.substr(colon + 1));
      continue;
    }
    if (line.rfind("n,", 0) == 0) continue;  // column header
    int n = 0, n2 = 0;
    double re = 0, im = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &n, &n2, &re, &im) != 4)
      throw ConfigError("operator file " + name + ": malformed row '" + line + "'");
    rows.emplace_back(n, n2, re, im);
  }
  if (!meta.count("N") || !meta.count("dist")) throw ConfigError("operator file " + name + ": missing N or dist header");
  TruncatedOperator op;
  try {
    op.N = std::stoi(meta["N"]);
  } catch (const std::exception&) {
    throw ConfigError("operator file " + name + ": bad N header");
  }
  if (op.N < 1) throw ConfigError("operator file " + name + ": N must be >= 1");
  op.dist_label = meta["dist"];
  op.label = meta.count("label") ? meta["label"] : "operator";
  const int D = 2 * op.N + 1;
  op.mat = Eigen::MatrixXcd::Zero(D, D);
  op.trusted = TrustMask::Constant(D, D, true);
  for (const auto& [n, n2, re, im] : rows) {
    if (std::abs(n) > op.N || std::abs(n2) > op.N) throw ConfigError("operator file " + name + ": index outside window");
    op.mat(n + op.N, n2 + op.N) = cdouble(re, im);
  }
  return op;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Provenance Provenance::of(const std::string& command, const ActionDistribution& dist, int N, double tol) {
  return Provenance{command, dist.label(), std::string(to_string(dist.kind())), dist.sigma(), N, tol, {}};
}

void write_provenance_csv(std::ostream& out, const Provenance& prov) {
  out << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  out << "# command: " << prov.command << '\n';
  out << "# dist: " << prov.dist_label << '\n';
  out << "# kind: " << prov.dist_kind << '\n';
  out << "# sigma: " << format_double(prov.sigma) << '\n';
  out << "# N: " << prov.N << '\n';
  out << "# tol: " << format_double(prov.tol) << '\n';
  for (const auto& [k, v] : prov.extra) out << "# " << k << ": " << v << '\n';
}

std::string provenance_json(const Provenance& prov) { return provenance_object(prov).dump(); }

void write_operator_csv(std::ostream& out, const TruncatedOperator& A, const Provenance& prov) {
  write_provenance_csv(out, prov);
  out << "# label: " << A.label << '\n';
  out << "n,n2,re,im\n";
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) {
      const cdouble v = A.mat(i, j);
      if (i != j && v == cdouble(0.0)) continue;
      out << i - A.N << ',' << j - A.N << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

void write_operator_json(std::ostream& out, const TruncatedOperator& A, const Provenance& prov) {
  json doc;
  doc["provenance"] = provenance_object(prov);
  doc["label"] = A.label;
  doc["N"] = A.N;
  json re = json::array(), im = json::array();
  for (int i = 0; i < A.dim(); ++i) {
    json rr = json::array(), ii = json::array();
    for (int j = 0; j < A.dim(); ++j) {
      rr.push_back(A.mat(i, j).real());
      ii.push_back(A.mat(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  out << doc.dump(1) << '\n';
}

TruncatedOperator read_operator(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open operator file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ConfigError("operator file " + path.string() + " is empty");
  return text[first] == '{' ? read_operator_json(text, path.string()) : read_operator_csv(text, path.string());
}

void write_coefficients_csv(std::ostream& out, const Eigen::VectorXcd& coeffs, int N, const Provenance& prov) {
  write_provenance_csv(out, prov);
  out << "n,re,im\n";
  for (int n = -N; n <= N; ++n)
    out << n << ',' << format_double(coeffs(n + N).real()) << ',' << format_double(coeffs(n + N).imag()) << '\n';
}

void write_field_csv(std::ostream& out, const LowerSymbolField& field, const Provenance& prov) {
  write_provenance_csv(out, prov);
  out << "# field: " << field.provenance << '\n';
  out << "J,phi,re,im\n";
  for (std::size_t i = 0; i < field.grid.size(); ++i)
    out << format_double(field.grid[i].J()) << ',' << format_double(field.grid[i].phi()) << ','
        << format_double(field.values[i].real()) << ',' << format_double(field.values[i].imag()) << '\n';
}

void write_field_json(std::ostream& out, const LowerSymbolField& field, const Provenance& prov) {
  json doc;
  doc["provenance"] = provenance_object(prov);
  doc["field"] = field.provenance;
  json pts = json::array();
  for (std::size_t i = 0; i < field.grid.size(); ++i)
    pts.push_back({field.grid[i].J(), field.grid[i].phi(), field.values[i].real(), field.values[i].imag()});
  doc["columns"] = {"J", "phi", "re", "im"};
  doc["values"] = std::move(pts);
  out << doc.dump(1) << '\n';
}

void write_dcoeffs_csv(std::ostream& out, const DCoefficients& d, const Provenance& prov) {
  write_provenance_csv(out, prov);
  out << "# J: " << format_double(d.J) << '\n';
  out << "m,value\n";
  for (int m = -d.M; m <= d.M; ++m) out << m << ',' << format_double(d.at(m)) << '\n';
}

void write_report_json(std::ostream& out, const AdmissibilityReport& report, const Provenance& prov) {
  json doc;
  doc["provenance"] = provenance_object(prov);
  doc["dist"] = report.dist_label;
  json conds = json::array();
  for (const auto& c : report.conditions) {
    json subs = json::array();
    for (const auto& [name, v] : c.subchecks) subs.push_back({{"check", name}, {"status", to_string(v)}});
    conds.push_back({{"id", c.id},
                     {"title", c.title},
                     {"status", to_string(c.status)},
                     {"max_deviation", c.max_deviation},
                     {"grid", c.grid},
                     {"notes", c.notes},
                     {"subchecks", std::move(subs)}});
  }
  doc["conditions"] = std::move(conds);
  doc["N0"] = report.N0 ? json(*report.N0) : json(nullptr);
  doc["N0_capped"] = report.N0_capped;
  out << doc.dump(1) << '\n';
}

void write_report_csv(std::ostream& out, const AdmissibilityReport& report, const Provenance& prov) {
  write_provenance_csv(out, prov);
  out << "# N0: " << (report.N0 ? std::to_string(*report.N0) : std::string("n/a"))
      << (report.N0_capped ? " (capped)" : "") << '\n';
  out << "condition,status,max_deviation,grid,notes\n";
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& c : report.conditions)
    out << c.id << ',' << to_string(c.status) << ',' << format_double(c.max_deviation) << ',' << quoted(c.grid) << ','
        << quoted(c.notes) << '\n';
}

std::vector<std::filesystem::path> write_frames(const std::filesystem::path& dir,
                                                const std::vector<EvolutionFrame>& frames, const Provenance& prov) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto index = open_out(dir / "index.csv");
  write_provenance_csv(index, prov);
  index << "frame,t,file,mass\n";
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.csv", k);
    auto out = open_out(dir / name);
    write_provenance_csv(out, prov);
    out << "# t: " << format_double(f.t) << '\n';
    out << "# initial: " << format_double(f.initial.J()) << ' ' << format_double(f.initial.phi()) << '\n';
    out << "t,J,phi,rho\n";
    const auto points = f.grid.points();
    for (std::size_t i = 0; i < points.size(); ++i)
      out << format_double(f.t) << ',' << format_double(points[i].J()) << ',' << format_double(points[i].phi()) << ','
          << format_double(f.rho[i]) << '\n';
    index << k << ',' << format_double(f.t) << ',' << name << ',' << format_double(f.mass()) << '\n';
    written.push_back(dir / name);
  }
  written.push_back(dir / "index.csv");
  return written;
}

}  // namespace cylcs
