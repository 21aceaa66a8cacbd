#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace calabi {

/// Exact rational with 64-bit parts, normalized so den > 0 and gcd(num, den) = 1.
/// Used for class arithmetic when the inputs are given as fractions or finite
/// decimals; the singular time and the case split are then exact.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(std::int64_t n) : num_(n), den_(1) {}

  // Accepts "p/q", integers, and finite decimals ("5/2", "-3", "2.5", "1e-3").
  static std::optional<Rational> parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;  // "5/2", or "5" when den == 1

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  friend bool operator==(const Rational& x, const Rational& y);
  friend bool operator<(const Rational& x, const Rational& y);
  friend bool operator<=(const Rational& x, const Rational& y) { return x == y || x < y; }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator>=(const Rational& x, const Rational& y) { return y <= x; }
  friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace calabi
