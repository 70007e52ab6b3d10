#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "strat/policy.hpp"

namespace strat {

class serialization_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Counter-based deterministic draw: a pure hash of (seed, deposit index),
// truncated to `width_bits`. Cloned lineages fork reproducible streams by
// switching seeds; no generator state is shared or mutated.
std::uint64_t differentia_draw(std::uint64_t seed, std::uint64_t index,
                               unsigned width_bits);

// A heritable record annotation: one fixed-width random differentia deposited
// per generation, pruned per the retention policy. Stratum deposit ranks are
// never stored; they are recovered from storage position via the policy's
// index arithmetic.
class Column {
 public:
  // width must be 1, 8 or 64; policy params are validated
  Column(PolicySpec policy, unsigned width_bits, std::uint64_t seed);

  const PolicySpec& policy() const { return policy_; }
  unsigned width_bits() const { return width_bits_; }
  std::uint64_t depth() const { return depth_; }      // deposits so far
  std::size_t size() const { return differentia_.size(); }

  std::uint64_t differentia_at(std::size_t index) const {
    return differentia_[index];
  }
  std::uint64_t rank_at(std::size_t index) const {
    return rank_at_index(policy_, index, depth_);
  }

  // appends a fresh differentia and removes strata pruned by the policy
  void deposit();

  // copy of this column plus one deposit drawn from the child's stream;
  // the parent is left untouched
  Column clone_for_offspring(std::uint64_t child_seed) const;

  // Binary layout (little-endian): version u8, family u8, width u8,
  // param u64, deposit_count u64, then bit-packed differentia (LSB first
  // within each byte for width 1). No per-stratum ranks are stored.
  std::vector<std::uint8_t> serialize() const;
  static Column deserialize(const std::vector<std::uint8_t>& bytes,
                            const PolicySpec& policy, unsigned width_bits);

  // record equality: the generator seed is stream state, not record content
  friend bool operator==(const Column& a, const Column& b) {
    return a.policy_ == b.policy_ && a.width_bits_ == b.width_bits_ &&
           a.depth_ == b.depth_ && a.differentia_ == b.differentia_;
  }

 private:
  PolicySpec policy_;
  unsigned width_bits_;
  std::uint64_t seed_;
  std::uint64_t depth_ = 0;
  std::vector<std::uint64_t> differentia_;  // aligned with retained ranks
};

}  // namespace strat
