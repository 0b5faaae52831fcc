#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace eigbound {

/// Signed scalar stored as sign and base-10 log magnitude.
///
/// Products of many small factors (bounds of order 1e-271 and below) stay
/// exact in exponent where a plain double would flush to zero.
class LogScalar {
 public:
  /// log10 of the smallest positive normal double; conversion to a plain
  /// value is refused at or below this magnitude.
  static constexpr double underflow_log10 = -307.6526555685888;

  constexpr LogScalar() = default;

  static LogScalar zero() { return {}; }

  static LogScalar infinity() {
    return from_log10(1, std::numeric_limits<double>::infinity());
  }

  static LogScalar from_double(double x) {
    if (std::isnan(x)) throw std::domain_error("LogScalar: NaN input");
    if (x == 0.0) return {};
    return from_log10(x > 0 ? 1 : -1, std::log10(std::fabs(x)));
  }

  static LogScalar from_log10(int sign, double log10_magnitude) {
    if (sign < -1 || sign > 1) throw std::invalid_argument("LogScalar: sign must be -1, 0 or +1");
    LogScalar s;
    if (sign == 0) return s;
    if (std::isnan(log10_magnitude)) throw std::domain_error("LogScalar: NaN magnitude");
    if (log10_magnitude == -std::numeric_limits<double>::infinity()) return s;
    s.sign_ = static_cast<std::int8_t>(sign);
    s.log10_ = log10_magnitude;
    return s;
  }

  int sign() const { return sign_; }

  /// Only meaningful when sign() != 0.
  double log10_magnitude() const { return log10_; }

  bool is_zero() const { return sign_ == 0; }
  bool is_infinite() const { return sign_ != 0 && std::isinf(log10_); }

  bool representable() const { return sign_ == 0 || log10_ > underflow_log10; }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    if (!representable()) throw std::range_error("LogScalar: magnitude below double range");
    if (std::isinf(log10_)) return sign_ * std::numeric_limits<double>::infinity();
    return sign_ * std::pow(10.0, log10_);
  }

  LogScalar abs() const {
    LogScalar r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  LogScalar operator-() const {
    LogScalar r = *this;
    r.sign_ = static_cast<std::int8_t>(-r.sign_);
    return r;
  }

  LogScalar& operator*=(const LogScalar& o) {
    if (sign_ == 0 || o.sign_ == 0) {
      if (is_infinite() || o.is_infinite()) throw std::domain_error("LogScalar: 0 * infinity");
      *this = LogScalar{};
      return *this;
    }
    sign_ = static_cast<std::int8_t>(sign_ * o.sign_);
    log10_ += o.log10_;
    return *this;
  }

  LogScalar& operator/=(const LogScalar& o) {
    if (o.sign_ == 0) throw std::domain_error("LogScalar: division by zero");
    if (sign_ == 0) return *this;
    sign_ = static_cast<std::int8_t>(sign_ * o.sign_);
    log10_ -= o.log10_;
    return *this;
  }

  /// Sum in log space (log-sum-exp on base 10). Handles mixed signs.
  LogScalar& operator+=(const LogScalar& o) {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) return *this = o;
    const bool mine_larger = log10_ >= o.log10_;
    const LogScalar& big = mine_larger ? *this : o;
    const LogScalar& small = mine_larger ? o : *this;
    if (std::isinf(big.log10_)) {
      if (std::isinf(small.log10_) && big.sign_ != small.sign_)
        throw std::domain_error("LogScalar: infinity - infinity");
      return *this = big;
    }
    const double ratio = std::pow(10.0, small.log10_ - big.log10_);
    const double factor = big.sign_ == small.sign_ ? 1.0 + ratio : 1.0 - ratio;
    if (factor == 0.0) return *this = LogScalar{};
    LogScalar r;
    r.sign_ = big.sign_;
    r.log10_ = big.log10_ + std::log10(factor);
    return *this = r;
  }

  LogScalar& operator-=(const LogScalar& o) { return *this += -o; }

  friend LogScalar operator*(LogScalar a, const LogScalar& b) { return a *= b; }
  friend LogScalar operator/(LogScalar a, const LogScalar& b) { return a /= b; }
  friend LogScalar operator+(LogScalar a, const LogScalar& b) { return a += b; }
  friend LogScalar operator-(LogScalar a, const LogScalar& b) { return a -= b; }

  friend LogScalar pow(LogScalar base, int exponent) {
    if (exponent == 0) return from_double(1.0);
    if (base.sign_ == 0) {
      if (exponent < 0) throw std::domain_error("LogScalar: zero to negative power");
      return base;
    }
    LogScalar r;
    r.sign_ = static_cast<std::int8_t>((exponent % 2 == 0) ? 1 : base.sign_);
    r.log10_ = base.log10_ * exponent;
    return r;
  }

  friend std::partial_ordering operator<=>(const LogScalar& a, const LogScalar& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0) return std::partial_ordering::equivalent;
    return a.sign_ > 0 ? a.log10_ <=> b.log10_ : b.log10_ <=> a.log10_;
  }

  friend bool operator==(const LogScalar& a, const LogScalar& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

 private:
  std::int8_t sign_ = 0;
  double log10_ = 0.0;
};

inline LogScalar min(const LogScalar& a, const LogScalar& b) { return b < a ? b : a; }
inline LogScalar max(const LogScalar& a, const LogScalar& b) { return a < b ? b : a; }

/// log10 of n! via lgamma; exact enough for n in the millions.
inline double log10_factorial(long n) {
  if (n < 0) throw std::domain_error("log10_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0) / std::log(10.0);
}

}  // namespace eigbound
