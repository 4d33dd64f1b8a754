#include "cylcs/observable.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "cylcs/distribution.hpp"
#include "cylcs/errors.hpp"

namespace cylcs {

namespace {

cdouble eval_poly(const std::vector<cdouble>& c, double J) {
  cdouble acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * J + *it;
  return acc;
}

ObservableTerm poly_term(int m, std::vector<cdouble> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == cdouble(0.0)) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  ObservableTerm t;
  t.m = m;
  t.poly = coeffs;
  t.g = [coeffs](double J) { return eval_poly(coeffs, J); };
  return t;
}

ObservableTerm merge(const ObservableTerm& a, const ObservableTerm& b) {
  if (a.is_polynomial() && b.is_polynomial()) {
    std::vector<cdouble> sum(std::max(a.poly.size(), b.poly.size()), 0.0);
    for (std::size_t i = 0; i < a.poly.size(); ++i) sum[i] += a.poly[i];
    for (std::size_t i = 0; i < b.poly.size(); ++i) sum[i] += b.poly[i];
    return poly_term(a.m, std::move(sum));
  }
  ObservableTerm t;
  t.m = a.m;
  t.g = [ga = a.g, gb = b.g](double J) { return ga(J) + gb(J); };
  t.breakpoints = a.breakpoints;
  t.breakpoints.insert(t.breakpoints.end(), b.breakpoints.begin(), b.breakpoints.end());
  std::sort(t.breakpoints.begin(), t.breakpoints.end());
  return t;
}

bool close(cdouble a, cdouble b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

cdouble parse_complex(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("observable: coefficient must be a number or [re, im]");
}

ObservableTerm table_term(int m, std::vector<double> Js, std::vector<cdouble> values) {
  if (Js.size() < 2 || Js.size() != values.size()) throw ConfigError("observable: table needs >= 2 matching J/value rows");
  if (!std::is_sorted(Js.begin(), Js.end()) || std::adjacent_find(Js.begin(), Js.end()) != Js.end())
    throw ConfigError("observable: table J values must be strictly increasing");
  auto xs = std::make_shared<const std::vector<double>>(std::move(Js));
  auto ys = std::make_shared<const std::vector<cdouble>>(std::move(values));
  ObservableTerm t;
  t.m = m;
  t.breakpoints = *xs;
  t.g = [xs, ys](double J) -> cdouble {
    const auto& x = *xs;
    if (J < x.front() || J > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), J);
    if (it == x.end()) return ys->back();
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double w = (J - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - w) * (*ys)[i - 1] + w * (*ys)[i];
  };
  return t;
}

}  // namespace

ObservableSpec::ObservableSpec(std::vector<ObservableTerm> terms, std::string label) : label_(std::move(label)) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.m < b.m; });
  for (auto& t : terms) {
    if (!t.g) throw ConfigError("observable: term without a function");
    if (!terms_.empty() && terms_.back().m == t.m)
      terms_.back() = merge(terms_.back(), t);
    else
      terms_.push_back(std::move(t));
  }

  // Reality: exact on polynomial coefficients, probed otherwise.
  static constexpr double probes[] = {-7.3, -2.1, -0.4, 0.0, 0.37, 1.9, 5.2};
  real_ = true;
  for (const auto& t : terms_) {
    const ObservableTerm* partner = term(-t.m);
    if (t.is_polynomial() && partner && partner->is_polynomial()) {
      if (t.poly.size() != partner->poly.size()) real_ = false;
      for (std::size_t i = 0; real_ && i < t.poly.size(); ++i)
        if (!close(t.poly[i], std::conj(partner->poly[i]))) real_ = false;
    } else {
      for (double J : probes)
        if (!close(t.g(J), std::conj(g(-t.m, J)))) real_ = false;
    }
    if (!real_) break;
  }
}

bool ObservableSpec::is_pure_angle() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.is_polynomial() && t.poly.size() == 1; });
}

int ObservableSpec::max_harmonic() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.m));
  return m;
}

const ObservableTerm* ObservableSpec::term(int m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const auto& t, int v) { return t.m < v; });
  return (it != terms_.end() && it->m == m) ? &*it : nullptr;
}

cdouble ObservableSpec::g(int m, double J) const {
  const auto* t = term(m);
  return t ? t->g(J) : cdouble(0.0);
}

cdouble ObservableSpec::operator()(double J, double phi) const {
  cdouble acc = 0.0;
  for (const auto& t : terms_) acc += t.g(J) * std::polar(1.0, t.m * phi);
  return acc;
}

cdouble ObservableSpec::angle_coefficient(int m) const {
  if (!is_pure_angle()) throw ConfigError("observable '" + label_ + "' depends on J; no constant Fourier coefficient");
  const auto* t = term(m);
  return t ? t->poly.front() : cdouble(0.0);
}

ObservableSpec ObservableSpec::scaled(cdouble factor, std::string label) const {
  std::vector<ObservableTerm> out;
  for (const auto& t : terms_) {
    if (t.is_polynomial()) {
      auto c = t.poly;
      for (auto& v : c) v *= factor;
      out.push_back(poly_term(t.m, std::move(c)));
    } else {
      ObservableTerm s = t;
      s.g = [g = t.g, factor](double J) { return factor * g(J); };
      out.push_back(std::move(s));
    }
  }
  return ObservableSpec(std::move(out), std::move(label));
}

ObservableSpec ObservableSpec::polynomial_in_action(std::vector<cdouble> coeffs, std::string label) {
  return ObservableSpec({poly_term(0, std::move(coeffs))}, std::move(label));
}

ObservableSpec ObservableSpec::constant(cdouble value) {
  return ObservableSpec({poly_term(0, {value})}, "const");
}

ObservableSpec ObservableSpec::action() { return polynomial_in_action({0.0, 1.0}, "J"); }

ObservableSpec ObservableSpec::action_squared() { return polynomial_in_action({0.0, 0.0, 1.0}, "J^2"); }

ObservableSpec ObservableSpec::harmonic(int sign) {
  if (sign != 1 && sign != -1) throw ConfigError("harmonic: sign must be +1 or -1");
  return ObservableSpec({poly_term(sign, {1.0})}, sign > 0 ? "exp(+i phi)" : "exp(-i phi)");
}

ObservableSpec ObservableSpec::cosine(double lambda) {
  return ObservableSpec({poly_term(1, {0.5 * lambda}), poly_term(-1, {0.5 * lambda})}, "lambda cos(phi)");
}

ObservableSpec ObservableSpec::sine(double lambda) {
  return ObservableSpec({poly_term(1, {cdouble(0.0, -0.5 * lambda)}), poly_term(-1, {cdouble(0.0, 0.5 * lambda)})},
                        "lambda sin(phi)");
}

ObservableSpec ObservableSpec::from_angle_coefficients(const std::map<int, cdouble>& coeffs, std::string label) {
  std::vector<ObservableTerm> terms;
  for (const auto& [m, c] : coeffs) terms.push_back(poly_term(m, {c}));
  return ObservableSpec(std::move(terms), std::move(label));
}

ObservableSpec ObservableSpec::saw(int max_harmonic) {
  if (max_harmonic < 0) throw ConfigError("saw: harmonic count must be non-negative");
  std::map<int, cdouble> c{{0, kPi}};
  for (int m = 1; m <= max_harmonic; ++m) {
    c[m] = cdouble(0.0, 1.0 / m);
    c[-m] = cdouble(0.0, -1.0 / m);
  }
  return from_angle_coefficients(c, "saw B(phi)");
}

ObservableSpec parse_observable(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("observable: parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("observable: top level must be an object");
  std::vector<ObservableTerm> terms;
  std::string label = "observable";
  try {
    label = doc.value("label", label);
    if (doc.contains("terms")) {
      if (!doc.at("terms").is_array()) throw ConfigError("observable: 'terms' must be an array");
      for (const auto& t : doc.at("terms")) {
        const int m = t.at("m").get<int>();
        if (t.contains("poly")) {
          std::vector<cdouble> coeffs;
          for (const auto& c : t.at("poly")) coeffs.push_back(parse_complex(c));
          if (coeffs.empty()) throw ConfigError("observable: empty 'poly'");
          terms.push_back(poly_term(m, std::move(coeffs)));
        } else if (t.contains("table")) {
          const auto& tab = t.at("table");
          auto Js = tab.at("J").get<std::vector<double>>();
          auto re = tab.at("re").get<std::vector<double>>();
          std::vector<double> im = tab.contains("im") ? tab.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
          if (re.size() != im.size()) throw ConfigError("observable: table re/im lengths differ");
          std::vector<cdouble> vals;
          for (std::size_t i = 0; i < re.size(); ++i) vals.emplace_back(re[i], im[i]);
          terms.push_back(table_term(m, std::move(Js), std::move(vals)));
        } else {
          throw ConfigError("observable: term needs 'poly' or 'table'");
        }
      }
    }
    if (doc.contains("saw_harmonics")) {
      const auto saw = ObservableSpec::saw(doc.at("saw_harmonics").get<int>());
      terms.insert(terms.end(), saw.terms().begin(), saw.terms().end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("observable: ") + e.what());
  }
  if (terms.empty()) throw ConfigError("observable: no terms");
  return ObservableSpec(std::move(terms), label);
}

ObservableSpec load_observable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("observable: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("observable: empty file " + path.string());
  return parse_observable(text);
}

}  // namespace cylcs
