#include "strat/column.hpp"

#include <algorithm>
#include <cstddef>

namespace strat {

namespace {

using u64 = std::uint64_t;
using u8 = std::uint8_t;

constexpr u8 kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 3 + 8 + 8;

u64 mix64(u64 z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

void check_width(unsigned w) {
  if (w != 1 && w != 8 && w != 64)
    throw std::invalid_argument("differentia width must be 1, 8 or 64 bits");
}

void put_u64(std::vector<u8>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<u8>(v >> (8 * i)));
}

u64 get_u64(const std::vector<u8>& in, std::size_t at) {
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::uint64_t differentia_draw(std::uint64_t seed, std::uint64_t index,
                               unsigned width_bits) {
  const u64 h = mix64(mix64(seed + 0x9e3779b97f4a7c15ull * (index + 1)));
  return width_bits >= 64 ? h : h >> (64 - width_bits);
}

Column::Column(PolicySpec policy, unsigned width_bits, std::uint64_t seed)
    : policy_(policy), width_bits_(width_bits), seed_(seed) {
  policy_.validate();
  check_width(width_bits);
}

void Column::deposit() {
  if (depth_ >= 1) {
    const RankVec dropped = dropped_ranks(policy_, depth_);
    for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
      const u64 idx = retained_index_of(policy_, *it, depth_);
      differentia_.erase(differentia_.begin() + static_cast<std::ptrdiff_t>(idx));
    }
  }
  differentia_.push_back(differentia_draw(seed_, depth_, width_bits_));
  ++depth_;
}

Column Column::clone_for_offspring(std::uint64_t child_seed) const {
  Column child = *this;
  child.seed_ = child_seed;
  child.deposit();
  return child;
}

std::vector<std::uint8_t> Column::serialize() const {
  std::vector<u8> out;
  const std::size_t payload = (size() * width_bits_ + 7) / 8;
  out.reserve(kHeaderBytes + payload);
  out.push_back(kFormatVersion);
  out.push_back(static_cast<u8>(policy_.family));
  out.push_back(static_cast<u8>(width_bits_));
  put_u64(out, policy_.param);
  put_u64(out, depth_);
  switch (width_bits_) {
    case 1: {
      u8 acc = 0;
      unsigned fill = 0;
      for (u64 d : differentia_) {
        acc |= static_cast<u8>(d & 1) << fill;
        if (++fill == 8) {
          out.push_back(acc);
          acc = 0;
          fill = 0;
        }
      }
      if (fill != 0) out.push_back(acc);
      break;
    }
    case 8:
      for (u64 d : differentia_) out.push_back(static_cast<u8>(d));
      break;
    default:
      for (u64 d : differentia_) put_u64(out, d);
  }
  return out;
}

Column Column::deserialize(const std::vector<std::uint8_t>& bytes,
                           const PolicySpec& policy, unsigned width_bits) {
  policy.validate();
  check_width(width_bits);
  if (bytes.size() < kHeaderBytes)
    throw serialization_error("column blob shorter than header");
  if (bytes[0] != kFormatVersion)
    throw serialization_error("unsupported column format version");
  if (bytes[1] != static_cast<u8>(policy.family) ||
      get_u64(bytes, 3) != policy.param)
    throw serialization_error("column policy does not match header");
  if (bytes[2] != width_bits)
    throw serialization_error("column width does not match header");

  Column col(policy, width_bits, 0);
  col.depth_ = get_u64(bytes, 11);
  const u64 count = retained_count(policy, col.depth_);
  const std::size_t payload = (count * width_bits + 7) / 8;
  if (bytes.size() != kHeaderBytes + payload)
    throw serialization_error("column payload length mismatch");

  col.differentia_.reserve(count);
  const u8* p = bytes.data() + kHeaderBytes;
  switch (width_bits) {
    case 1:
      for (u64 i = 0; i < count; ++i)
        col.differentia_.push_back((p[i / 8] >> (i % 8)) & 1);
      break;
    case 8:
      for (u64 i = 0; i < count; ++i) col.differentia_.push_back(p[i]);
      break;
    default:
      for (u64 i = 0; i < count; ++i) {
        u64 v = 0;
        for (int b = 0; b < 8; ++b)
          v |= static_cast<u64>(p[8 * i + b]) << (8 * b);
        col.differentia_.push_back(v);
      }
  }
  return col;
}

}  // namespace strat
