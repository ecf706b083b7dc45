#pragma once

#include "fec/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fec {

// Exponent vector, index k = k-th coordinate variable. Trailing zeros are
// trimmed so that equal monomials compare equal.
using Monomial = std::vector<uint32_t>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in normal form: no zero coefficients, no trailing zero
/// exponents. Two polynomials are equal iff their term maps are identical.
/// Values are immutable in spirit: every operation returns a new polynomial.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(Rational c);
  static Polynomial variable(int index);
  /// Exact dyadic constant (the binary value of `c`, not a decimal reading).
  static Polynomial from_double(double c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Total degree; 0 for the zero polynomial.
  int degree() const;
  /// 1 + largest variable index appearing; 0 if none.
  int variable_count() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Formal partial derivative with respect to variable `index`.
  Polynomial partial(int index) const;

  /// Matrix of second partials over the listed variables (symmetric).
  std::vector<std::vector<Polynomial>> hessian(const std::vector<int>& vars) const;

  /// Numeric value at `point`. Every variable appearing in the polynomial
  /// must have an entry; otherwise throws ("unbound variable").
  double eval(std::span<const double> point) const;
  double eval(std::initializer_list<double> point) const {
    return eval(std::span<const double>(point.begin(), point.size()));
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }

  void add_term(Monomial m, Rational c);

 private:
  std::map<Monomial, Rational> terms_;
};

/// Maps display names to dense variable indices. Two schemes cover the CLI
/// surface: numbered names (y1, y2, ... or x1, x2, ...) and the Heisenberg
/// triple xi/eta/zeta.
class VariableNames {
 public:
  static VariableNames prefixed(std::string prefix);  // <prefix>1, <prefix>2, ...
  static VariableNames heisenberg();                  // xi, eta, zeta

  std::optional<int> find(const std::string& name) const;
  std::string name(int index) const;

 private:
  std::string prefix_;                // empty when an explicit list is used
  std::vector<std::string> names_;
};

/// Parses the CLI text form: sum of terms like `3/2*y1^2*y2` or `-1*y3`,
/// with `*` between factors and `^` for exponents both mandatory.
Polynomial parse_polynomial(const std::string& text, const VariableNames& names);

std::string to_string(const Polynomial& p, const VariableNames& names);

}  // namespace fec
