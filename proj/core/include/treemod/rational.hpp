#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace treemod {

/// Exact rational arithmetic on 64-bit numerator / denominator.
///
/// Values are always kept in lowest terms with a positive denominator, so
/// equality is plain member comparison. Arithmetic goes through 128-bit
/// intermediates and throws std::overflow_error when a result does not fit —
/// we prefer an honest failure over silent wraparound, since these numbers
/// back certificates.
class Rational {
 public:
  Rational() = default;
  Rational(long long numerator) : num_(numerator) {}  // NOLINT: implicit by design
  Rational(long long numerator, long long denominator);

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p/q", or just "p" when the denominator is 1.
  std::string str() const;

  /// Parses the str() format (optionally negative, '/' separated). Returns
  /// nullopt on malformed text or a zero denominator.
  static std::optional<Rational> from_string(std::string_view text);

  /// Closest rational to x with denominator in [1, max_den], or nullopt if
  /// even the best one misses x by more than `window`. Deterministic: ties
  /// between equally close candidates go to the smaller denominator.
  static std::optional<Rational> approximate(double x, long long max_den, double window);

  Rational reciprocal() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  long long num_ = 0;
  long long den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace treemod
