#include "psum/nmtree.hpp"

#include <ostream>
#include <string>

namespace psum {

LaneGeometry NmTree::make_geometry(uint64_t size, uint64_t modulus) {
  if (size < 2) throw std::invalid_argument("nmtree: size must be >= 2");
  const unsigned n = static_cast<unsigned>(std::bit_width(size - 1));
  return LaneGeometry(n, modulus);
}

unsigned NmTree::max_iota(uint64_t size) {
  return make_geometry(size, 2).max_fold_steps();
}

NmTree::NmTree(uint64_t size, uint64_t modulus)
    : NmTree(size, modulus, max_iota(size)) {}

NmTree::NmTree(uint64_t size, uint64_t modulus, unsigned iota, unsigned table_cap)
    : geom_(make_geometry(size, modulus)),
      size_(size),
      mem_(geom_),
      iota_(iota),
      folded_lanes_(0) {
  if (iota > geom_.max_fold_steps())
    throw std::invalid_argument("nmtree: iota exceeds the number of fold rounds");
  folded_lanes_ = geom_.padded_lanes() >> iota;
  if (folded_lanes_ > 1) {
    const unsigned index_bits = folded_lanes_ * geom_.lane_bits;
    if (index_bits > table_cap)
      throw std::invalid_argument(
          "nmtree: SUM table index width " + std::to_string(index_bits) +
          " bits exceeds cap of " + std::to_string(table_cap) + " bits");
    sum_table_.assign(uint64_t{1} << index_bits, 0);
    for (uint64_t idx = 0; idx < sum_table_.size(); ++idx) {
      uint64_t s = 0;
      for (unsigned l = 0; l < folded_lanes_; ++l)
        s = (s + ((idx >> (l * geom_.lane_bits)) & geom_.lane_mask())) % modulus;
      sum_table_[idx] = s;
    }
  }
}

void NmTree::check_index(uint64_t j) const {
  if (j >= size_) throw std::out_of_range("nmtree: index out of range");
}

void NmTree::check_delta(uint64_t delta) const {
  if (delta >= geom_.modulus)
    throw std::out_of_range("nmtree: delta must be a residue below M");
}

void NmTree::update(uint64_t j, uint64_t delta) {
  check_index(j);
  check_delta(delta);
  if (j == padded_size() - 1) {
    vn1_ = (vn1_ + delta) % geom_.modulus;
    return;
  }
  const uint64_t notj = ~j & detail::low_mask(geom_.lanes);
  const uint64_t add = dist(delta, geom_).bits & mask(notj, geom_).bits;
  const uint64_t r = j >> 1;
  LaneWord reg = mem_.read_reg(r);
  mem_.write_reg(r, lane_add_mod(reg, LaneWord{add, geom_}));
}

uint64_t NmTree::retrieve(uint64_t j) {
  check_index(j);
  if (j == padded_size() - 1) {
    const uint64_t v = mem_.read_reg(j >> 1).bits & mask(j, geom_).bits;
    return (fold_and_lookup(v) + vn1_) % geom_.modulus;
  }
  const uint64_t v = mem_.read_reg((j + 1) >> 1).bits & mask(j + 1, geom_).bits;
  return fold_and_lookup(v);
}

uint64_t NmTree::fold_and_lookup(uint64_t masked_bits) {
  const uint64_t folded = detail::fold_rounds(masked_bits, geom_.padded_lanes(),
                                              geom_.lane_bits, geom_.modulus, iota_);
  if (folded_lanes_ == 1) return folded;
  return sum_table_[folded];
}

void NmTree::update_logn(uint64_t j, uint64_t delta) {
  check_index(j);
  check_delta(delta);
  if (j == padded_size() - 1) {
    vn1_ = (vn1_ + delta) % geom_.modulus;
    return;
  }
  uint64_t i = padded_size() + j;
  while (i > 1) {
    const uint64_t next = i >> 1;
    if (i % 2 == 0)
      mem_.write_node(next, (mem_.read_node(next) + delta) % geom_.modulus);
    i = next;
  }
}

uint64_t NmTree::retrieve_logn(uint64_t j) {
  check_index(j);
  uint64_t sum;
  uint64_t i;
  if (j == padded_size() - 1) {
    sum = vn1_;
    i = padded_size() + j;
  } else {
    sum = 0;
    i = padded_size() + j + 1;
  }
  while (i > 1) {
    const uint64_t next = i >> 1;
    if (i % 2 == 1) sum = (sum + mem_.read_node(next)) % geom_.modulus;
    i = next;
  }
  return sum;
}

uint64_t NmTree::partial_sum(uint64_t k, uint64_t j) {
  if (k > j) throw std::invalid_argument("nmtree: partial_sum needs k <= j");
  check_index(j);
  const uint64_t hi = retrieve(j);
  const uint64_t lo = k == 0 ? 0 : retrieve(k - 1);
  return (hi + geom_.modulus - lo) % geom_.modulus;
}

void NmTree::dump(std::ostream& os) const {
  os << size_ << ' ' << geom_.modulus << ' ' << iota_ << ' ' << vn1_ << '\n';
  mem_.dump(os);
}

}  // namespace psum
