#pragma once

#include <string_view>

#include "gapdense/bigfloat.hpp"

namespace gapdense {

// Minimum working precision for Hankel factorizations up to the given
// degree: ceil(5.1 * max_degree) + 100 bits.
long required_bits(long max_degree);

// Shared arithmetic policy: a fixed significand width plus a generic
// relative comparison tolerance. Immutable; passed explicitly everywhere.
class PrecisionContext {
 public:
  static PrecisionContext with_bits(long bits);
  static PrecisionContext with_bits_and_tol(long bits, BigFloat rel_tol);

  long mantissa_bits() const { return bits_; }
  const BigFloat& rel_tol() const { return rel_tol_; }

  BigFloat of_long(long v) const { return BigFloat::of_long(v, bits_); }
  BigFloat of_string(std::string_view s) const {
    return BigFloat::of_string(s, bits_);
  }
  BigFloat zero() const { return BigFloat(bits_); }

 private:
  PrecisionContext(long bits, BigFloat tol);
  long bits_;
  BigFloat rel_tol_;
};

// Context used for residual recomputation inside iterative polish steps:
// twice the working width plus the Hankel digit-loss allowance for `degree`.
PrecisionContext scratch_context(const PrecisionContext& ctx, long degree);

}  // namespace gapdense
