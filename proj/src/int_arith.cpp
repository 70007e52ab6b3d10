#include "strat/int_arith.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <limits>

namespace strat {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

unsigned bit_width_u128(u128 v) {
  const u64 hi = static_cast<u64>(v >> 64);
  if (hi != 0) return 64u + static_cast<unsigned>(std::bit_width(hi));
  return static_cast<unsigned>(std::bit_width(static_cast<u64>(v)));
}

// Fixed-capacity little-endian unsigned integer, large enough for any
// base^exp handled here (base < 2^69, exp <= 64 -> < 4416 bits).
struct BigU {
  static constexpr int kCap = 80;
  std::array<u64, kCap> d{};
  int n = 0;

  static BigU one() {
    BigU b;
    b.d[0] = 1;
    b.n = 1;
    return b;
  }

  // multiply in place by a u128 value
  void mul_small(u128 m) {
    const u64 m0 = static_cast<u64>(m);
    const u64 m1 = static_cast<u64>(m >> 64);
    std::array<u64, kCap> out{};
    int on = 0;
    for (int i = 0; i < n; ++i) {
      if (d[i] == 0) continue;
      u128 carry = static_cast<u128>(d[i]) * m0;
      int j = i;
      while (carry != 0) {
        assert(j < kCap);
        const u128 s = static_cast<u128>(out[j]) + static_cast<u64>(carry);
        out[j] = static_cast<u64>(s);
        carry = (carry >> 64) + (s >> 64);
        ++j;
      }
      if (j > on) on = j;
      if (m1 != 0) {
        carry = static_cast<u128>(d[i]) * m1;
        j = i + 1;
        while (carry != 0) {
          assert(j < kCap);
          const u128 s = static_cast<u128>(out[j]) + static_cast<u64>(carry);
          out[j] = static_cast<u64>(s);
          carry = (carry >> 64) + (s >> 64);
          ++j;
        }
        if (j > on) on = j;
      }
    }
    d = out;
    n = on;
    while (n > 0 && d[n - 1] == 0) --n;
  }

  static int cmp(const BigU& a, const BigU& b) {
    if (a.n != b.n) return a.n < b.n ? -1 : 1;
    for (int i = a.n - 1; i >= 0; --i) {
      if (a.d[i] != b.d[i]) return a.d[i] < b.d[i] ? -1 : 1;
    }
    return 0;
  }
};

BigU big_pow(u128 base, unsigned exp) {
  BigU r = BigU::one();
  for (unsigned i = 0; i < exp; ++i) r.mul_small(base);
  return r;
}

bool fits_u128(u128 base, unsigned exp) {
  if (base <= 1 || exp == 0) return true;
  return static_cast<unsigned long long>(exp) * bit_width_u128(base) <= 127;
}

u128 pow_u128(u128 base, unsigned exp) {
  u128 r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

// sign of a^p - b^q
int cmp_pow(u128 a, unsigned p, u128 b, unsigned q) {
  if (fits_u128(a, p) && fits_u128(b, q)) {
    const u128 lhs = pow_u128(a, p);
    const u128 rhs = pow_u128(b, q);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  return BigU::cmp(big_pow(a, p), big_pow(b, q));
}

// sign of a^p - b^q * c^s
int cmp_pow_vs_prod(u128 a, unsigned p, u128 b, unsigned q, u128 c,
                    unsigned s) {
  if (fits_u128(a, p) &&
      static_cast<unsigned long long>(q) * bit_width_u128(b | 1) +
              static_cast<unsigned long long>(s) * bit_width_u128(c | 1) <=
          126) {
    const u128 lhs = pow_u128(a, p);
    const u128 rhs = pow_u128(b, q) * pow_u128(c, s);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  BigU rhs = big_pow(b, q);
  for (unsigned i = 0; i < s; ++i) rhs.mul_small(c);
  return BigU::cmp(big_pow(a, p), rhs);
}

}  // namespace

std::uint64_t sat_mul_u64(std::uint64_t a, std::uint64_t b) {
  const u128 p = static_cast<u128>(a) * b;
  if (p > std::numeric_limits<u64>::max())
    return std::numeric_limits<u64>::max();
  return static_cast<u64>(p);
}

std::uint64_t sat_add_u64(std::uint64_t a, std::uint64_t b) {
  const u64 s = a + b;
  return s < a ? std::numeric_limits<u64>::max() : s;
}

std::uint64_t floor_root_pow(std::uint64_t n, unsigned x, unsigned a) {
  assert(a >= 1 && x <= a && a <= kMaxRootExponent);
  if (n == 0) return 0;
  if (x == 0) return 1;
  if (x == a || n == 1) return n;
  // float seed, then exact fixup via pow comparison
  const long double est =
      std::exp2l(std::log2l(static_cast<long double>(n)) *
                 static_cast<long double>(x) / static_cast<long double>(a));
  u64 k = est >= 1.0L ? static_cast<u64>(est) : 1;
  if (k > n) k = n;
  while (k > 1 && cmp_pow(k, a, n, x) > 0) --k;
  while (cmp_pow(k + 1, a, n, x) <= 0) ++k;
  return k;
}

std::uint64_t ceil_root_pow(std::uint64_t n, unsigned x, unsigned a) {
  const u64 r = floor_root_pow(n, x, a);
  if (n == 0 || x == 0 || x == a) return r;
  return cmp_pow(r, a, n, x) == 0 ? r : r + 1;
}

unsigned floor_log2_pow(std::uint64_t n, unsigned x, unsigned a) {
  assert(n >= 1);
  // floor(log2(t)) == floor(log2(floor(t))) for real t >= 1
  return floor_log2(floor_root_pow(n, x, a));
}

std::uint64_t ceil_scaled_root_pow(std::uint64_t n, unsigned x, unsigned a,
                                   std::uint32_t num, std::uint32_t den) {
  assert(a >= 1 && x <= a && den >= 1 && num <= 16u * den);
  if (n == 0) return 0;
  const u64 root = floor_root_pow(n, x, a);
  // num*t/den with t in [root, root+1) pins m to a handful of candidates
  u64 m = (static_cast<u128>(num) * root) / den;
  while (cmp_pow_vs_prod(static_cast<u128>(den) * m, a, num, a, n, x) < 0) ++m;
  return m;
}

}  // namespace strat
