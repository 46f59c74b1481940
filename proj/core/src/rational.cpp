#include "treemod/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace treemod {

namespace {

using i128 = __int128;

constexpr long long kMax = std::numeric_limits<long long>::max();
constexpr long long kMin = std::numeric_limits<long long>::min();

long long narrow(i128 v, const char* what) {
  if (v > static_cast<i128>(kMax) || v < static_cast<i128>(kMin)) {
    throw std::overflow_error(std::string("rational overflow in ") + what);
  }
  return static_cast<long long>(v);
}

// gcd on magnitudes; safe for kMin via unsigned arithmetic.
unsigned long long umag(long long v) {
  return v < 0 ? 0ULL - static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
}

}  // namespace

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  // Normalize sign into the numerator first. denominator == kMin reduces
  // below (its gcd with anything is >= 1 and the quotient fits).
  unsigned long long g = std::gcd(umag(numerator), umag(denominator));
  bool negative = (numerator < 0) != (denominator < 0);
  unsigned long long un = umag(numerator) / g;
  unsigned long long ud = umag(denominator) / g;
  if (un > static_cast<unsigned long long>(kMax) || ud > static_cast<unsigned long long>(kMax)) {
    throw std::overflow_error("rational overflow in normalization");
  }
  num_ = negative ? -static_cast<long long>(un) : static_cast<long long>(un);
  den_ = static_cast<long long>(ud);
  if (num_ == 0) den_ = 1;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::from_string(std::string_view text) {
  auto parse_ll = [](std::string_view s, long long& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  long long p = 0, q = 1;
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!parse_ll(text, p)) return std::nullopt;
  } else {
    if (!parse_ll(text.substr(0, slash), p)) return std::nullopt;
    if (!parse_ll(text.substr(slash + 1), q)) return std::nullopt;
    if (q == 0) return std::nullopt;
  }
  try {
    return Rational(p, q);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

std::optional<Rational> Rational::approximate(double x, long long max_den, double window) {
  if (!std::isfinite(x) || max_den < 1) return std::nullopt;
  // Denominators are tiny in our use (bounded by an edge count), so an exact
  // scan beats a continued-fraction walk on clarity and has no edge cases.
  long long best_p = 0, best_q = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (long long q = 1; q <= max_den; ++q) {
    double scaled = x * static_cast<double>(q);
    if (std::fabs(scaled) > 9.0e18) return std::nullopt;  // llround would overflow
    long long p = std::llround(scaled);
    double err = std::fabs(x - static_cast<double>(p) / static_cast<double>(q));
    if (err < best_err) {
      best_err = err;
      best_p = p;
      best_q = q;
    }
  }
  if (best_err > window) return std::nullopt;
  return Rational(best_p, best_q);
}

Rational Rational::reciprocal() const {
  if (num_ == 0) throw std::invalid_argument("reciprocal of zero");
  return Rational(den_, num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<i128>(num_), "negation");
  r.den_ = den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  i128 num = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
  i128 den = static_cast<i128>(a.den_) * b.den_;
  // Reduce in 128 bits before narrowing so p/q + r/s survives whenever the
  // reduced result fits, even if the common-denominator form does not.
  auto g128 = [](i128 u, i128 v) {
    if (u < 0) u = -u;
    if (v < 0) v = -v;
    while (v != 0) {
      i128 t = u % v;
      u = v;
      v = t;
    }
    return u == 0 ? i128{1} : u;
  };
  i128 d = g128(num, den);
  return Rational(narrow(num / d, "addition"), narrow(den / d, "addition"));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  // Cross-reduce before multiplying to keep intermediates small.
  long long g1 = std::gcd(umag(a.num_), umag(b.den_));
  long long g2 = std::gcd(umag(b.num_), umag(a.den_));
  i128 num = static_cast<i128>(a.num_ / g1) * (b.num_ / g2);
  i128 den = static_cast<i128>(a.den_ / g2) * (b.den_ / g1);
  return Rational(narrow(num, "multiplication"), narrow(den, "multiplication"));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::invalid_argument("rational division by zero");
  return a * b.reciprocal();
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 lhs = static_cast<i128>(a.num_) * b.den_;
  i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace treemod
