#pragma once

#include "ngd/rational.hpp"
#include "ngd/report.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ngd {

/// The scale group realized as positive rationals under multiplication with
/// the modulus equal to the element itself.
struct PositiveRationalScale {
  using Element = Rational;
  static Element identity() { return Rational(1); }
  static Element compose(const Element& a, const Element& b) { return a * b; }
  static Element inverse(const Element& a) { return Rational(1) / a; }
  static double modulus(const Element& a) { return to_double(a); }
  static std::string describe(const Element& a) { return to_string(a); }
};

/// The integers acting through k -> 2^-k.
struct DyadicScale {
  using Element = long;
  static Element identity() { return 0; }
  static Element compose(Element a, Element b) { return a + b; }
  static Element inverse(Element a) { return -a; }
  static double modulus(Element a) { return std::ldexp(1.0, static_cast<int>(-a)); }
  static std::string describe(Element a) { return std::to_string(a); }
};

/// Checks that the modulus is a group morphism into (0, inf):
/// |ab| = |a||b|, |e| = 1, |a^-1| = 1/|a|, all moduli positive.
template <typename Gamma>
ValidationReport check_scale_morphism(const std::vector<typename Gamma::Element>& samples,
                                      double tol = 1e-12) {
  ValidationReport report("scale modulus is a morphism");
  report.check(Gamma::modulus(Gamma::identity()) == 1.0, "identity has modulus one");
  auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };
  for (const auto& a : samples) {
    const double ma = Gamma::modulus(a);
    report.check_lazy(ma > 0, "modulus is positive", [&] { return Gamma::describe(a); });
    report.check_lazy(close(Gamma::modulus(Gamma::inverse(a)), 1.0 / ma), "modulus of inverse",
                      [&] { return Gamma::describe(a); });
    for (const auto& b : samples)
      report.check_lazy(close(Gamma::modulus(Gamma::compose(a, b)), ma * Gamma::modulus(b)),
                        "modulus is multiplicative",
                        [&] { return Gamma::describe(a) + ", " + Gamma::describe(b); });
  }
  return report;
}

/// Geometric grid 2^-k for k = first..last.
std::vector<double> dyadic_grid(int first = 1, int last = 20);

}  // namespace ngd
