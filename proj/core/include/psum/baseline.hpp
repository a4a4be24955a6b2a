#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace psum {

// Ground truth: a dense array with O(N) retrieval. Everything else in the
// project is checked against this.
class Oracle {
 public:
  Oracle(uint64_t size, uint64_t modulus);

  void update(uint64_t j, uint64_t delta);
  uint64_t retrieve(uint64_t j) const;
  uint64_t retrieve_range(uint64_t k, uint64_t j) const;

  uint64_t size() const { return values_.size(); }
  uint64_t modulus() const { return modulus_; }
  uint64_t value(uint64_t j) const { return values_.at(j); }

  uint64_t element_reads() const { return reads_; }
  uint64_t element_writes() const { return writes_; }

 private:
  std::vector<uint64_t> values_;
  uint64_t modulus_;
  mutable uint64_t reads_ = 0;
  uint64_t writes_ = 0;
};

// Classical binary indexed tree, mod M. The O(lg N) comparison point for
// benchmarks; tracked cell accesses stand in for its model cost.
class FenwickTree {
 public:
  FenwickTree(uint64_t size, uint64_t modulus);

  void update(uint64_t j, uint64_t delta);
  uint64_t retrieve(uint64_t j) const;

  uint64_t size() const { return size_; }
  uint64_t modulus() const { return modulus_; }
  uint64_t cell_reads() const { return reads_; }
  uint64_t cell_writes() const { return writes_; }

 private:
  uint64_t size_;
  uint64_t modulus_;
  std::vector<uint64_t> tree_;  // 1-based BIT layout
  mutable uint64_t reads_ = 0;
  uint64_t writes_ = 0;
};

}  // namespace psum
