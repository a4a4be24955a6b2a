#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "psum/rambo.hpp"
#include "psum/wordpar.hpp"

namespace psum {

// Prefix sums over a virtual array A of `size` residues mod M, stored as a
// complete binary tree of left-subtree sums inside an YggdrasilMemory.
// A(last) has no node of its own and lives in vn1.
//
// update/retrieve are the word-parallel register algorithms: one register
// access each, independent of N. update_logn/retrieve_logn walk the tree
// node by node and serve as the O(lg N) cross-check.
//
// iota picks the space-time tradeoff of retrieve: iota halving fold rounds
// followed by one SUM-table lookup on the remaining lanes. iota equal to
// max_iota() folds all the way down and needs no table.
class NmTree {
 public:
  // Constructs with iota = max_iota(size): table-free retrieve.
  NmTree(uint64_t size, uint64_t modulus);
  NmTree(uint64_t size, uint64_t modulus, unsigned iota, unsigned table_cap = 24);

  static unsigned max_iota(uint64_t size);

  void update(uint64_t j, uint64_t delta);
  uint64_t retrieve(uint64_t j);
  void update_logn(uint64_t j, uint64_t delta);
  uint64_t retrieve_logn(uint64_t j);
  // Sum over A(k..j) mod M via two prefix retrievals.
  uint64_t partial_sum(uint64_t k, uint64_t j);

  uint64_t size() const { return size_; }
  uint64_t padded_size() const { return uint64_t{1} << geom_.lanes; }
  uint64_t modulus() const { return geom_.modulus; }
  unsigned iota() const { return iota_; }
  const LaneGeometry& geometry() const { return geom_; }
  uint64_t vn1() const { return vn1_; }

  YggdrasilMemory& memory() { return mem_; }
  const YggdrasilMemory& memory() const { return mem_; }

  // Lanes left after iota fold rounds; 1 means no SUM table.
  unsigned folded_lanes() const { return folded_lanes_; }
  bool has_sum_table() const { return !sum_table_.empty(); }
  uint64_t sum_table_size() const { return sum_table_.size(); }
  uint64_t sum_table_entry(uint64_t i) const { return sum_table_[i]; }

  // `N M iota vn1` line followed by the node dump.
  void dump(std::ostream& os) const;

 private:
  static LaneGeometry make_geometry(uint64_t size, uint64_t modulus);
  uint64_t fold_and_lookup(uint64_t masked_bits);
  void check_index(uint64_t j) const;
  void check_delta(uint64_t delta) const;

  LaneGeometry geom_;
  uint64_t size_;
  YggdrasilMemory mem_;
  uint64_t vn1_ = 0;
  unsigned iota_;
  unsigned folded_lanes_;
  std::vector<uint64_t> sum_table_;
};

}  // namespace psum
