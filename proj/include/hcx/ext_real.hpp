#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hcx {

/// Extended real number in [-inf, +inf].
///
/// NaN is rejected at construction, so every ExtReal participates in the
/// total order -inf < finite < +inf. The two Moreau additions below are the
/// only arithmetic offered; they differ solely in how (+inf) + (-inf) is
/// resolved.
class ExtReal {
 public:
  ExtReal() = default;
  ExtReal(double v) : v_(v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN is not an extended real");
  }

  static ExtReal pos_inf() { return ExtReal(Unchecked{}, std::numeric_limits<double>::infinity()); }
  static ExtReal neg_inf() { return ExtReal(Unchecked{}, -std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

  /// Underlying double; +-HUGE_VAL for the infinite values.
  double value() const { return v_; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

 private:
  struct Unchecked {};
  ExtReal(Unchecked, double v) : v_(v) {}
  double v_ = 0.0;
};

/// Lower (inf-flavored) addition: (+inf) + (-inf) = -inf.
inline ExtReal lower_add(ExtReal a, ExtReal b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(a.value() + b.value());
}

/// Upper (sup-flavored) addition: (+inf) + (-inf) = +inf.
inline ExtReal upper_add(ExtReal a, ExtReal b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  return ExtReal(a.value() + b.value());
}

inline ExtReal negate(ExtReal a) {
  if (a.is_pos_inf()) return ExtReal::neg_inf();
  if (a.is_neg_inf()) return ExtReal::pos_inf();
  return ExtReal(-a.value());
}

inline ExtReal min(ExtReal a, ExtReal b) { return a < b ? a : b; }
inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

/// "-inf", "+inf", or the shortest decimal that round-trips the finite value.
inline std::string to_string(ExtReal a) {
  if (a.is_pos_inf()) return "+inf";
  if (a.is_neg_inf()) return "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, a.value());
  if (ec != std::errc{}) throw std::runtime_error("ExtReal: formatting failed");
  return std::string(buf, end);
}

/// Inverse of to_string; also accepts "inf" for +inf. Rejects anything that
/// is not a full decimal literal or an infinity token.
inline ExtReal ext_real_from_string(std::string_view s) {
  if (s == "+inf" || s == "inf") return ExtReal::pos_inf();
  if (s == "-inf") return ExtReal::neg_inf();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("ExtReal: cannot parse \"" + std::string(s) + "\"");
  return ExtReal(v);
}

}  // namespace hcx
