#include "fec/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fec {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

int total_degree(const Monomial& m) {
  int d = 0;
  for (uint32_t e : m) d += static_cast<int>(e);
  return d;
}

double pow_uint(double x, uint32_t e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return r;
}

}  // namespace

void Polynomial::add_term(Monomial m, Rational c) {
  if (c == 0) return;
  trim(m);
  auto [it, inserted] = terms_.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::constant(Rational c) {
  Polynomial p;
  p.add_term({}, std::move(c));
  return p;
}

Polynomial Polynomial::variable(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be nonnegative");
  Polynomial p;
  Monomial m(static_cast<size_t>(index) + 1, 0);
  m[index] = 1;
  p.add_term(std::move(m), Rational(1));
  return p;
}

Polynomial Polynomial::from_double(double c) { return constant(rational_from_double(c)); }

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
  return d;
}

int Polynomial::variable_count() const {
  size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return static_cast<int>(n);
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  Polynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : rhs.terms_) {
      Monomial m(std::max(ma.size(), mb.size()), 0);
      for (size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
      for (size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
      out.add_term(std::move(m), ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial Polynomial::partial(int index) const {
  if (index < 0) throw std::invalid_argument("variable index must be nonnegative");
  Polynomial out;
  const auto idx = static_cast<size_t>(index);
  for (const auto& [m, c] : terms_) {
    if (idx >= m.size() || m[idx] == 0) continue;
    Monomial d = m;
    d[idx] -= 1;
    out.add_term(std::move(d), c * Rational(m[idx]));
  }
  return out;
}

std::vector<std::vector<Polynomial>> Polynomial::hessian(const std::vector<int>& vars) const {
  const size_t k = vars.size();
  std::vector<std::vector<Polynomial>> h(k, std::vector<Polynomial>(k));
  for (size_t i = 0; i < k; ++i) {
    Polynomial pi = partial(vars[i]);
    for (size_t j = i; j < k; ++j) {
      h[i][j] = pi.partial(vars[j]);
      if (j != i) h[j][i] = h[i][j];
    }
  }
  return h;
}

double Polynomial::eval(std::span<const double> point) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (i >= point.size()) throw std::invalid_argument("unbound variable in polynomial evaluation");
      t *= pow_uint(point[i], m[i]);
    }
    sum += t;
  }
  return sum;
}

VariableNames VariableNames::prefixed(std::string prefix) {
  VariableNames v;
  v.prefix_ = std::move(prefix);
  return v;
}

VariableNames VariableNames::heisenberg() {
  VariableNames v;
  v.names_ = {"xi", "eta", "zeta"};
  return v;
}

std::optional<int> VariableNames::find(const std::string& name) const {
  if (!names_.empty()) {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
  }
  if (name.size() <= prefix_.size() || name.compare(0, prefix_.size(), prefix_) != 0) return std::nullopt;
  int value = 0;
  for (size_t i = prefix_.size(); i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    value = value * 10 + (name[i] - '0');
    if (value > 1000000) return std::nullopt;
  }
  if (value == 0) return std::nullopt;  // names are 1-based
  return value - 1;
}

std::string VariableNames::name(int index) const {
  if (!names_.empty()) {
    if (index < 0 || index >= static_cast<int>(names_.size()))
      throw std::out_of_range("variable index out of range");
    return names_[static_cast<size_t>(index)];
  }
  return prefix_ + std::to_string(index + 1);
}

namespace {

struct Parser {
  const std::string& s;
  const VariableNames& names;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= s.size();
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos) + ": " + what);
  }

  std::string read_digits() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected digits");
    return s.substr(start, pos - start);
  }

  Rational read_rational() {
    using boost::multiprecision::cpp_int;
    cpp_int num(read_digits());
    skip_ws();
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      cpp_int den(read_digits());
      if (den == 0) fail("zero denominator");
      return Rational(num, den);
    }
    return Rational(num);
  }

  std::string read_name() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])))) ++pos;
    if (pos == start) fail("expected a coefficient or variable");
    return s.substr(start, pos - start);
  }

  // factor := rational | name ['^' digits]
  void read_factor(Rational& coeff, Monomial& mono) {
    skip_ws();
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      coeff *= read_rational();
      return;
    }
    std::string nm = read_name();
    auto idx = names.find(nm);
    if (!idx) fail("unknown variable '" + nm + "'");
    uint32_t exp = 1;
    skip_ws();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      std::string d = read_digits();
      if (d.size() > 3) fail("exponent too large");
      exp = static_cast<uint32_t>(std::stoul(d));
    }
    if (mono.size() <= static_cast<size_t>(*idx)) mono.resize(static_cast<size_t>(*idx) + 1, 0);
    mono[static_cast<size_t>(*idx)] += exp;
  }

  void read_term(Polynomial& out, int sign) {
    Rational coeff(sign);
    Monomial mono;
    read_factor(coeff, mono);
    while (peek() == '*') {
      ++pos;
      read_factor(coeff, mono);
    }
    out.add_term(std::move(mono), std::move(coeff));
  }

  Polynomial parse() {
    Polynomial out;
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = (s[pos] == '-') ? -1 : 1;
      ++pos;
    }
    if (eof()) fail("empty input");
    read_term(out, sign);
    while (!eof()) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos;
        read_term(out, c == '-' ? -1 : 1);
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }
    return out;
  }
};

std::string term_body(const Monomial& m, const Rational& c, const VariableNames& names) {
  std::ostringstream os;
  os << to_string(c < 0 ? -c : c);
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    os << '*' << names.name(static_cast<int>(i));
    if (m[i] > 1) os << '^' << m[i];
  }
  return os.str();
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const VariableNames& names) {
  Parser parser{text, names};
  return parser.parse();
}

std::string to_string(const Polynomial& p, const VariableNames& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (first) {
      if (c < 0) os << '-';
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    os << term_body(m, c, names);
  }
  return os.str();
}

}  // namespace fec
