#include "psum/wordpar.hpp"

namespace psum {

namespace {

unsigned min_lane_bits(uint64_t modulus) {
  return static_cast<unsigned>(std::bit_width(modulus - 1));
}

}  // namespace

LaneGeometry::LaneGeometry(unsigned n, uint64_t big_m)
    : LaneGeometry(n, big_m, min_lane_bits(big_m)) {}

LaneGeometry::LaneGeometry(unsigned n, uint64_t big_m, unsigned m)
    : lanes(n), lane_bits(m), modulus(big_m) {
  if (n < 1) throw std::invalid_argument("lane geometry: lane count must be >= 1");
  if (big_m < 2) throw std::invalid_argument("lane geometry: modulus must be >= 2");
  if (m < min_lane_bits(big_m))
    throw std::invalid_argument("lane geometry: lane width too small for modulus");
  if (static_cast<uint64_t>(n) * m > kWordBudget)
    throw std::invalid_argument("lane geometry: lanes * lane_bits exceeds the word budget");
}

LaneWord dist(uint64_t delta, const LaneGeometry& g) {
  if (delta > g.lane_mask()) throw std::out_of_range("dist: value does not fit a lane");
  return {detail::repeat_lane(delta, g.lanes, g.lane_bits), g};
}

LaneWord mask(uint64_t select, const LaneGeometry& g) {
  if (g.lanes < 64 && select > detail::low_mask(g.lanes))
    throw std::out_of_range("mask: selector has bits beyond the lane count");
  uint64_t spread = 0;  // bit i of select moved to the base of lane i
  for (unsigned i = 0; i < g.lanes; ++i)
    spread |= ((select >> i) & 1) << (i * g.lane_bits);
  return {spread * g.lane_mask(), g};
}

namespace detail {

// Lane-confined (a + b) mod M, following the split-piece scheme: each m-bit
// lane is handled as a low piece of ceil(m/2) bits and a high piece of
// floor(m/2) bits, with the pieces of all lanes carried in two packed words
// so no intermediate ever needs more than m bits inside a lane.
uint64_t add_mod_packed(uint64_t a, uint64_t b, unsigned lanes, unsigned lane_bits,
                        uint64_t modulus) {
  if (lane_bits == 1) return a ^ b;  // addition mod 2

  const unsigned m = lane_bits;
  const unsigned mlo = (m + 1) / 2;
  const unsigned mhi = m - mlo;
  const uint64_t lane1 = repeat_lane(1, lanes, m);
  const uint64_t lo_sel = repeat_lane(low_mask(mlo), lanes, m);
  const uint64_t hi_sel = repeat_lane(low_mask(mhi), lanes, m);

  const uint64_t a_lo = a & lo_sel;
  const uint64_t b_lo = b & lo_sel;
  const uint64_t a_hi = (a >> mlo) & hi_sel;
  const uint64_t b_hi = (b >> mlo) & hi_sel;

  // c = a + b, in pieces; each piece stays below 2^m inside its lane.
  uint64_t c_lo = a_lo + b_lo;
  const uint64_t c_hi = a_hi + b_hi + ((c_lo >> mlo) & lane1);
  c_lo &= lo_sel;

  // t = c + (2^m - M); t >= 2^m exactly when c >= M, and the biased form
  // never goes negative.
  const uint64_t bias = (m == 64 ? uint64_t{0} : (uint64_t{1} << m)) - modulus;
  uint64_t t_lo = c_lo + repeat_lane(bias & low_mask(mlo), lanes, m);
  const uint64_t t_hi =
      c_hi + repeat_lane(bias >> mlo, lanes, m) + ((t_lo >> mlo) & lane1);
  t_lo &= lo_sel;

  // Full-lane select mask: m ones where lane >= M.
  const uint64_t ge = (t_hi >> mhi) & lane1;
  const uint64_t d = ge * low_mask(m);

  // Where selected take t - 2^m (= c - M), elsewhere c itself.
  const uint64_t r_hi = ((t_hi & hi_sel) & d) | (c_hi & ~d);
  const uint64_t r_lo = (t_lo & d) | (c_lo & ~d);
  return (r_hi << mlo) | r_lo;
}

uint64_t fold_rounds(uint64_t v, unsigned pow2_lanes, unsigned lane_bits,
                     uint64_t modulus, unsigned rounds) {
  unsigned lanes = pow2_lanes;
  while (rounds-- > 0) {
    lanes >>= 1;
    const unsigned split = lanes * lane_bits;
    // split can reach the word budget on the first (virtual padding) round.
    const uint64_t upper = split >= 64 ? 0 : v >> split;
    const uint64_t lower = v & low_mask(split);
    v = add_mod_packed(upper, lower, lanes, lane_bits, modulus);
  }
  return v;
}

}  // namespace detail

LaneWord lane_add_mod(const LaneWord& a, const LaneWord& b) {
  assert(a.geom == b.geom);
  assert(a.reduced() && b.reduced());
  const LaneGeometry& g = a.geom;
  return {detail::add_mod_packed(a.bits, b.bits, g.lanes, g.lane_bits, g.modulus), g};
}

LaneWord fold_sum(const LaneWord& v, unsigned steps) {
  const LaneGeometry& g = v.geom;
  if (steps > g.max_fold_steps())
    throw std::invalid_argument("fold_sum: more steps than fold rounds available");
  assert(v.reduced());
  const uint64_t folded =
      detail::fold_rounds(v.bits, g.padded_lanes(), g.lane_bits, g.modulus, steps);
  // Virtual zero-padding lanes that never fit the word budget are dropped
  // from the result geometry; they hold no bits.
  unsigned out_lanes = g.padded_lanes() >> steps;
  if (static_cast<uint64_t>(out_lanes) * g.lane_bits > kWordBudget)
    out_lanes = kWordBudget / g.lane_bits;
  LaneGeometry out(out_lanes, g.modulus, g.lane_bits);
  return {folded, out};
}

}  // namespace psum
