#include "gapdense/precision.hpp"

#include <utility>

#include "gapdense/errors.hpp"

namespace gapdense {

long required_bits(long max_degree) {
  if (max_degree < 1) throw DomainError("required_bits needs max_degree >= 1");
  return (51 * max_degree + 9) / 10 + 100;
}

PrecisionContext::PrecisionContext(long bits, BigFloat tol)
    : bits_(bits), rel_tol_(std::move(tol)) {}

PrecisionContext PrecisionContext::with_bits(long bits) {
  if (bits < 64) throw ConfigError("mantissa_bits must be at least 64");
  return PrecisionContext(bits, BigFloat::two_pow(-(bits / 2), bits));
}

PrecisionContext PrecisionContext::with_bits_and_tol(long bits,
                                                     BigFloat rel_tol) {
  if (bits < 64) throw ConfigError("mantissa_bits must be at least 64");
  if (!(rel_tol >= BigFloat::two_pow(1 - bits, bits))) {
    throw ConfigError("rel_tol below 2^(1 - mantissa_bits)");
  }
  return PrecisionContext(bits, std::move(rel_tol));
}

PrecisionContext scratch_context(const PrecisionContext& ctx, long degree) {
  long extra = degree >= 1 ? (51 * degree + 9) / 10 : 0;
  return PrecisionContext::with_bits(2 * ctx.mantissa_bits() + extra + 64);
}

}  // namespace gapdense
