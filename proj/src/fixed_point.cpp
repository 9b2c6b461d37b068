#include "codesign/fixed_point.hpp"

#include <cmath>
#include <string>

#include "codesign/errors.hpp"

namespace codesign {

double FixedPointFormat::resolution() const { return std::ldexp(1.0, -fraction_bits); }

double FixedPointFormat::max_value() const {
  return std::ldexp(1.0, integer_bits - 1) - resolution();
}

std::int64_t FixedPointFormat::max_raw() const {
  const int magnitude_bits = total_bits() - 1;
  if (magnitude_bits >= 63) return INT64_MAX;
  return (std::int64_t{1} << magnitude_bits) - 1;
}

void FixedPointFormat::validate() const {
  if (integer_bits < 2 || fraction_bits < 1 || total_bits() > 64) {
    throw DomainError("invalid fixed-point format Q" + std::to_string(integer_bits) + "." +
                      std::to_string(fraction_bits));
  }
}

namespace fixed {

std::int64_t saturate(__int128 raw, FixedPointFormat format, bool* saturated) {
  const __int128 limit = format.max_raw();
  if (raw > limit || raw < -limit) {
    if (saturated) *saturated = true;
    return static_cast<std::int64_t>(raw > 0 ? limit : -limit);
  }
  return static_cast<std::int64_t>(raw);
}

std::int64_t to_raw(double x, FixedPointFormat format, bool* saturated) {
  if (std::isnan(x)) throw NumericalError("cannot quantize NaN");
  // nearbyint honours the default round-to-nearest-even mode.
  const double scaled = std::nearbyint(std::ldexp(x, format.fraction_bits));
  const double limit = static_cast<double>(format.max_raw());
  if (scaled >= limit || scaled <= -limit) {
    const std::int64_t max = format.max_raw();
    if (std::fabs(scaled) > limit && saturated) *saturated = true;
    return scaled > 0 ? max : -max;
  }
  return static_cast<std::int64_t>(scaled);
}

double from_raw(std::int64_t raw, FixedPointFormat format) {
  return std::ldexp(static_cast<double>(raw), -format.fraction_bits);
}

__int128 round_shift(__int128 value, int shift) {
  if (shift <= 0) return value << -shift;
  const __int128 one = 1;
  const __int128 floor = value >> shift;  // arithmetic shift floors
  const __int128 remainder = value - (floor << shift);
  const __int128 half = one << (shift - 1);
  if (remainder > half || (remainder == half && (floor & 1) != 0)) return floor + 1;
  return floor;
}

}  // namespace fixed

double quantize(double x, FixedPointFormat format) {
  format.validate();
  return fixed::from_raw(fixed::to_raw(x, format), format);
}

Matrix quantize(const Matrix& x, FixedPointFormat format) {
  format.validate();
  return x.unaryExpr([format](double v) { return fixed::from_raw(fixed::to_raw(v, format), format); });
}

}  // namespace codesign
