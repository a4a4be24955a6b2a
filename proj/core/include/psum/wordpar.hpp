#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>

namespace psum {

// Largest packed word we operate on. Geometries with lanes*lane_bits
// beyond this are rejected at construction instead of spilling into
// multi-word arithmetic.
inline constexpr unsigned kWordBudget = 64;

namespace detail {

inline constexpr uint64_t low_mask(unsigned width) {
  return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

// v replicated into every lane. v must fit in lane_bits.
inline constexpr uint64_t repeat_lane(uint64_t v, unsigned lanes, unsigned lane_bits) {
  // 0...01 0...01 pattern, one bit per lane base.
  const uint64_t unit = low_mask(lanes * lane_bits) / low_mask(lane_bits);
  return unit * v;
}

uint64_t add_mod_packed(uint64_t a, uint64_t b, unsigned lanes, unsigned lane_bits,
                        uint64_t modulus);

// `rounds` halving folds of a packed word with pow2_lanes lanes (a power of
// two; high lanes beyond the populated ones must be zero).
uint64_t fold_rounds(uint64_t v, unsigned pow2_lanes, unsigned lane_bits,
                     uint64_t modulus, unsigned rounds);

}  // namespace detail

// n lanes of m bits inside one machine word, arithmetic modulo M.
// lanes = ceil(lg N) and lane_bits = ceil(lg M) in the tree structures.
struct LaneGeometry {
  unsigned lanes = 1;      // n
  unsigned lane_bits = 1;  // m
  uint64_t modulus = 2;    // M, 2 <= M <= 2^m

  LaneGeometry() = default;
  LaneGeometry(unsigned n, uint64_t big_m);               // minimal m
  LaneGeometry(unsigned n, uint64_t big_m, unsigned m);   // explicit m

  unsigned word_bits() const { return lanes * lane_bits; }
  uint64_t lane_mask() const { return detail::low_mask(lane_bits); }
  uint64_t word_mask() const { return detail::low_mask(word_bits()); }
  // Lane count padded up to a power of two, as used by the halving fold.
  unsigned padded_lanes() const { return std::bit_ceil(lanes); }
  // Number of fold rounds that reduce the padded word to a single lane.
  unsigned max_fold_steps() const { return std::countr_zero(uint64_t{padded_lanes()}); }

  bool operator==(const LaneGeometry&) const = default;
};

struct LaneWord {
  uint64_t bits = 0;
  LaneGeometry geom;

  uint64_t lane(unsigned i) const {
    assert(i < geom.lanes);
    return (bits >> (i * geom.lane_bits)) & geom.lane_mask();
  }
  // True when every lane holds a value < M.
  bool reduced() const {
    for (unsigned i = 0; i < geom.lanes; ++i)
      if (lane(i) >= geom.modulus) return false;
    return true;
  }
};

// n copies of the m-bit value delta, one per lane.
LaneWord dist(uint64_t delta, const LaneGeometry& g);

// Lane i is all ones iff bit i of select is set.
LaneWord mask(uint64_t select, const LaneGeometry& g);

// Lane-wise (a + b) mod M without any cross-lane carries.
LaneWord lane_add_mod(const LaneWord& a, const LaneWord& b);

// `steps` halving rounds: each round adds (mod M, lane-wise) the upper half
// of the lanes onto the lower half. Lane count is first padded with zero
// lanes up to a power of two. steps == max_fold_steps() leaves one lane
// holding the sum of all lanes mod M.
LaneWord fold_sum(const LaneWord& v, unsigned steps);

}  // namespace psum
