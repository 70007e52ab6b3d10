#pragma once

#include <bit>
#include <cstdint>

namespace strat {

// floor(log2(x)); requires x >= 1
constexpr unsigned floor_log2(std::uint64_t x) {
  return 63u - static_cast<unsigned>(std::countl_zero(x));
}

// Exact integer evaluation of quantities of the form n^{x/a}, computed via
// pow comparisons (k^a <=> n^x) rather than floating point so that results
// are exact and monotone in n. Exponents are capped; policy validation
// rejects hierarchies deeper than kMaxRootExponent up front.
inline constexpr unsigned kMaxRootExponent = 64;

// floor(n^{x/a}); requires a >= 1, x <= a
std::uint64_t floor_root_pow(std::uint64_t n, unsigned x, unsigned a);

// ceil(n^{x/a}); requires a >= 1, x <= a
std::uint64_t ceil_root_pow(std::uint64_t n, unsigned x, unsigned a);

// floor(log2(n^{x/a})); requires n >= 1, a >= 1, x <= a
unsigned floor_log2_pow(std::uint64_t n, unsigned x, unsigned a);

// least m >= 0 with (den*m)^a >= num^a * n^x, i.e. ceil((num/den) * n^{x/a});
// requires a >= 1, x <= a, den >= 1, num/den <= 16
std::uint64_t ceil_scaled_root_pow(std::uint64_t n, unsigned x, unsigned a,
                                   std::uint32_t num, std::uint32_t den);

std::uint64_t sat_mul_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_add_u64(std::uint64_t a, std::uint64_t b);

}  // namespace strat
