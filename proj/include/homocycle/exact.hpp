#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "homocycle/errors.hpp"

namespace homocycle {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using float100 = boost::multiprecision::cpp_bin_float_100;
using float300 =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<300>>;

namespace detail {

template <typename F>
const std::array<F, 4>& surd_table() {
  static const std::array<F, 4> t = {F(1), sqrt(F(2)), sqrt(F(3)), sqrt(F(5))};
  return t;
}

inline int rational_sign(const rational& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

}  // namespace detail

// Parses "5", "-3/2" or decimal strings like "1.25" into an exact rational.
// Rejects exponents and anything else; lengths are meant to be written plainly.
inline rational parse_rational_token(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  if (s.empty()) throw ParseError("empty numeric token");
  auto bad = [&]() -> ParseError {
    return ParseError("cannot parse numeric token '" + text + "'");
  };
  bool neg = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') neg = (s[pos++] == '-');
  if (pos >= s.size()) throw bad();

  auto digits = [&](std::size_t& p) {
    std::string out;
    while (p < s.size() && s[p] >= '0' && s[p] <= '9') out += s[p++];
    return out;
  };

  std::string intpart = digits(pos);
  rational value;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    std::string den = digits(pos);
    if (intpart.empty() || den.empty() || pos != s.size()) throw bad();
    bigint d(den);
    if (d == 0) throw bad();
    value = rational(bigint(intpart), d);
  } else if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::string frac = digits(pos);
    if ((intpart.empty() && frac.empty()) || pos != s.size()) throw bad();
    bigint scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    bigint num = bigint(intpart.empty() ? "0" : intpart) * scale +
                 bigint(frac.empty() ? "0" : frac);
    value = rational(num, scale);
  } else {
    if (intpart.empty() || pos != s.size()) throw bad();
    value = rational(bigint(intpart));
  }
  return neg ? rational(-value) : value;
}

// Element of the field Q(sqrt2, sqrt3, sqrt5) restricted to the linear span
// 1, sqrt2, sqrt3, sqrt5 — enough to close addition and integer scaling,
// which is all cycle-length bookkeeping needs.  Comparisons are exact:
// a purely rational value compares by rational arithmetic, anything with a
// surd component is bounded away from zero and resolved in high precision.
struct ExactLength {
  std::array<rational, 4> q{};  // q[0] + q[1]*sqrt2 + q[2]*sqrt3 + q[3]*sqrt5

  ExactLength() = default;

  static ExactLength from_rational(const rational& r) {
    ExactLength x;
    x.q[0] = r;
    return x;
  }

  // doubles convert exactly: every finite double is a binary rational
  static ExactLength from_double(double d) {
    return from_rational(rational(d));
  }

  static ExactLength surd(int index, const rational& coeff = 1) {
    ExactLength x;
    x.q.at(index) = coeff;
    return x;
  }

  bool is_rational() const { return q[1] == 0 && q[2] == 0 && q[3] == 0; }
  bool is_zero() const {
    return q[0] == 0 && q[1] == 0 && q[2] == 0 && q[3] == 0;
  }

  friend ExactLength operator+(const ExactLength& a, const ExactLength& b) {
    ExactLength r;
    for (int i = 0; i < 4; ++i) r.q[i] = a.q[i] + b.q[i];
    return r;
  }
  friend ExactLength operator-(const ExactLength& a, const ExactLength& b) {
    ExactLength r;
    for (int i = 0; i < 4; ++i) r.q[i] = a.q[i] - b.q[i];
    return r;
  }
  ExactLength& operator+=(const ExactLength& o) {
    for (int i = 0; i < 4; ++i) q[i] += o.q[i];
    return *this;
  }
  friend ExactLength operator*(const rational& c, const ExactLength& a) {
    ExactLength r;
    for (int i = 0; i < 4; ++i) r.q[i] = c * a.q[i];
    return r;
  }
  friend ExactLength operator*(long long c, const ExactLength& a) {
    return rational(c) * a;
  }

  bool operator==(const ExactLength& o) const { return q == o.q; }
  bool operator!=(const ExactLength& o) const { return !(*this == o); }

  template <typename F>
  F value_as() const {
    const auto& t = detail::surd_table<F>();
    F acc = 0;
    for (int i = 0; i < 4; ++i) {
      if (q[i] != 0) acc += static_cast<F>(q[i]) * t[i];
    }
    return acc;
  }

  // Exact sign.  The surd components 1, sqrt2, sqrt3, sqrt5 are linearly
  // independent over Q, so a value with any surd coefficient is nonzero;
  // 100 digits resolve it for any realistic coefficient height, with one
  // escalation step as a safety margin.
  int sign() const {
    if (is_rational()) return detail::rational_sign(q[0]);
    float100 v = value_as<float100>();
    if (v > float100(1e-60)) return 1;
    if (v < float100(-1e-60)) return -1;
    float300 w = value_as<float300>();
    if (w > float300(1e-250)) return 1;
    if (w < float300(-1e-250)) return -1;
    throw InternalError("cannot resolve sign of algebraic length");
  }

  double to_double() const { return static_cast<double>(value_as<float100>()); }

  std::string str() const {
    static const char* names[4] = {"", "sqrt2", "sqrt3", "sqrt5"};
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < 4; ++i) {
      if (q[i] == 0) continue;
      if (!first) os << " + ";
      os << q[i].str();
      if (i > 0) os << "*" << names[i];
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }
};

inline int compare(const ExactLength& a, const ExactLength& b) {
  return (a - b).sign();
}

// deterministic ordering for containers: componentwise, not by value
inline bool lexicographic_less(const ExactLength& a, const ExactLength& b) {
  for (int i = 0; i < 4; ++i) {
    if (a.q[i] != b.q[i]) return a.q[i] < b.q[i];
  }
  return false;
}

// If a == r*b for rational r, returns r.  b must be nonzero.
inline std::optional<rational> rational_ratio(const ExactLength& a,
                                              const ExactLength& b) {
  int k = -1;
  for (int i = 0; i < 4; ++i) {
    if (b.q[i] != 0) {
      k = i;
      break;
    }
  }
  if (k < 0) throw InternalError("rational_ratio: zero denominator value");
  rational r = a.q[k] / b.q[k];
  for (int i = 0; i < 4; ++i) {
    if (a.q[i] != r * b.q[i]) return std::nullopt;
  }
  return r;
}

inline rational rational_gcd(const rational& a, const rational& b) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::gcd;
  using boost::multiprecision::lcm;
  using boost::multiprecision::numerator;
  if (a == 0) return abs(b);
  if (b == 0) return abs(a);
  bigint n = gcd(abs(numerator(a)) * denominator(b),
                 abs(numerator(b)) * denominator(a));
  bigint d = denominator(a) * denominator(b);
  return rational(n, d);
}

}  // namespace homocycle
