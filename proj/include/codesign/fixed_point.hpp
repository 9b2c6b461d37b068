#pragma once

#include <cstdint>

#include "codesign/linalg.hpp"

namespace codesign {

/// Signed two's-complement fixed-point format; integer_bits includes the sign.
struct FixedPointFormat {
  int integer_bits = 2;
  int fraction_bits = 1;

  int total_bits() const { return integer_bits + fraction_bits; }
  double resolution() const;
  /// Saturation magnitude 2^(integer_bits-1) - 2^-fraction_bits.
  double max_value() const;
  std::int64_t max_raw() const;
  /// Throws DomainError unless integer_bits >= 2, fraction_bits >= 1, total <= 64.
  void validate() const;

  friend bool operator==(const FixedPointFormat&, const FixedPointFormat&) = default;
};

/// Round-to-nearest-even at 2^-fraction_bits, then saturate symmetrically.
double quantize(double x, FixedPointFormat format);

Matrix quantize(const Matrix& x, FixedPointFormat format);

namespace fixed {

/// x * 2^fraction_bits rounded half-to-even and saturated. NaN throws NumericalError.
std::int64_t to_raw(double x, FixedPointFormat format, bool* saturated = nullptr);

double from_raw(std::int64_t raw, FixedPointFormat format);

/// value * 2^-shift rounded half-to-even (exact on the 128-bit input).
__int128 round_shift(__int128 value, int shift);

std::int64_t saturate(__int128 raw, FixedPointFormat format, bool* saturated = nullptr);

}  // namespace fixed

}  // namespace codesign
