#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cylcs {

using cdouble = std::complex<double>;

// One Fourier component g_m(J) e^{i m phi} of a classical observable.
struct ObservableTerm {
  int m = 0;
  std::function<cdouble(double)> g;
  // Ascending coefficients when g is a polynomial in J; empty otherwise.
  std::vector<cdouble> poly;
  // Action values where g has kinks or jumps (sampled tables).
  std::vector<double> breakpoints;

  bool is_polynomial() const { return !poly.empty(); }
};

// f(J, phi) = sum_m g_m(J) e^{i m phi}, with finitely many harmonics.
// Terms sharing a harmonic are merged at construction.
class ObservableSpec {
 public:
  ObservableSpec() = default;
  ObservableSpec(std::vector<ObservableTerm> terms, std::string label);

  const std::vector<ObservableTerm>& terms() const { return terms_; }
  const std::string& label() const { return label_; }

  // g_{-m}(J) = conj(g_m(J)) for every m, i.e. f is real-valued.
  bool is_real() const { return real_; }
  // Every g_m is constant: f depends on phi only.
  bool is_pure_angle() const;
  int max_harmonic() const;

  // g_m(J); zero for harmonics that are not present.
  cdouble g(int m, double J) const;
  const ObservableTerm* term(int m) const;
  cdouble operator()(double J, double phi) const;

  // The constant c_m of a pure-angle observable.
  cdouble angle_coefficient(int m) const;

  ObservableSpec scaled(cdouble factor, std::string label) const;

  static ObservableSpec polynomial_in_action(std::vector<cdouble> coeffs, std::string label);
  static ObservableSpec constant(cdouble value);
  static ObservableSpec action();          // J
  static ObservableSpec action_squared();  // J^2
  static ObservableSpec harmonic(int sign);  // e^{+i phi} or e^{-i phi}
  static ObservableSpec cosine(double lambda);
  static ObservableSpec sine(double lambda);
  // Pure-angle observable from its Fourier coefficients c_m.
  static ObservableSpec from_angle_coefficients(const std::map<int, cdouble>& coeffs, std::string label);
  // The 2 pi-periodic saw B(phi) = phi on [0, 2 pi), truncated to |m| <= max_harmonic:
  // c_0 = pi, c_m = i / m.
  static ObservableSpec saw(int max_harmonic);

 private:
  std::vector<ObservableTerm> terms_;  // sorted by m, one per harmonic
  std::string label_;
  bool real_ = true;
};

// JSON layout:
//   { "label": "...",
//     "terms": [ {"m": 0, "poly": [c0, c1, ...]},
//                {"m": 1, "table": {"J": [...], "re": [...], "im": [...]}} ],
//     "saw_harmonics": M }
// Coefficients are numbers or [re, im] pairs; tables are interpolated
// linearly and vanish outside their range. "saw_harmonics" adds B(phi)
// truncated to |m| <= M. Throws ConfigError on malformed or empty input.
ObservableSpec parse_observable(std::string_view json_text);
ObservableSpec load_observable(const std::filesystem::path& path);

}  // namespace cylcs
