#include "calabi/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace calabi {

namespace {

using i128 = __int128;

std::int64_t checked64(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : num;
  den_ = g ? den / g : den;
}

Rational operator+(const Rational& x, const Rational& y) {
  const i128 n = i128(x.num_) * y.den_ + i128(y.num_) * x.den_;
  const i128 d = i128(x.den_) * y.den_;
  // reduce in 128 bits before narrowing
  i128 a = n < 0 ? -n : n, b = d;
  while (b) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  const i128 g = a ? a : 1;
  return Rational(checked64(n / g), checked64(d / g));
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y) {
  i128 n = i128(x.num_) * y.num_;
  i128 d = i128(x.den_) * y.den_;
  i128 a = n < 0 ? -n : n, b = d;
  while (b) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  const i128 g = a ? a : 1;
  return Rational(checked64(n / g), checked64(d / g));
}

Rational operator/(const Rational& x, const Rational& y) {
  if (y.num_ == 0) throw std::invalid_argument("rational division by zero");
  return x * Rational(y.den_, y.num_);
}

bool operator==(const Rational& x, const Rational& y) {
  return x.num_ == y.num_ && x.den_ == y.den_;
}

bool operator<(const Rational& x, const Rational& y) {
  return i128(x.num_) * y.den_ < i128(y.num_) * x.den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::parse(std::string_view text) {
  // strip whitespace
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto lhs = Rational::parse(text.substr(0, slash));
    auto rhs = Rational::parse(text.substr(slash + 1));
    if (!lhs || !rhs || rhs->num() == 0) return std::nullopt;
    return *lhs / *rhs;
  }

  bool neg = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  std::int64_t mantissa = 0;
  int frac_digits = 0;
  int digits = 0;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    if (++digits > 18) return std::nullopt;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_dot) ++frac_digits;
  }
  if (digits == 0) return std::nullopt;

  int exp10 = 0;
  if (i < text.size()) {  // exponent part
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    if (i == text.size()) return std::nullopt;
    int e = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
      e = e * 10 + (text[i] - '0');
      if (e > 18) return std::nullopt;
    }
    exp10 = eneg ? -e : e;
  }

  exp10 -= frac_digits;
  if (exp10 < -18 || exp10 > 18) return std::nullopt;
  std::int64_t num = neg ? -mantissa : mantissa;
  std::int64_t den = 1;
  try {
    while (exp10 > 0) {
      num = checked64(i128(num) * 10);
      --exp10;
    }
    while (exp10 < 0) {
      den = checked64(i128(den) * 10);
      ++exp10;
    }
    return Rational(num, den);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

}  // namespace calabi
