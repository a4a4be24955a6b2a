#include "psum/baseline.hpp"

namespace psum {

namespace {

void check_params(uint64_t size, uint64_t modulus) {
  if (size < 1) throw std::invalid_argument("baseline: size must be >= 1");
  if (modulus < 2) throw std::invalid_argument("baseline: modulus must be >= 2");
}

}  // namespace

Oracle::Oracle(uint64_t size, uint64_t modulus) : modulus_(modulus) {
  check_params(size, modulus);
  values_.assign(size, 0);
}

void Oracle::update(uint64_t j, uint64_t delta) {
  if (j >= values_.size()) throw std::out_of_range("oracle: index out of range");
  if (delta >= modulus_) throw std::out_of_range("oracle: delta out of range");
  values_[j] = (values_[j] + delta) % modulus_;
  ++writes_;
}

uint64_t Oracle::retrieve(uint64_t j) const {
  if (j >= values_.size()) throw std::out_of_range("oracle: index out of range");
  uint64_t sum = 0;
  for (uint64_t i = 0; i <= j; ++i) {
    sum = (sum + values_[i]) % modulus_;
    ++reads_;
  }
  return sum;
}

uint64_t Oracle::retrieve_range(uint64_t k, uint64_t j) const {
  if (k > j) throw std::invalid_argument("oracle: range needs k <= j");
  if (j >= values_.size()) throw std::out_of_range("oracle: index out of range");
  uint64_t sum = 0;
  for (uint64_t i = k; i <= j; ++i) {
    sum = (sum + values_[i]) % modulus_;
    ++reads_;
  }
  return sum;
}

FenwickTree::FenwickTree(uint64_t size, uint64_t modulus)
    : size_(size), modulus_(modulus), tree_(size + 1, 0) {
  check_params(size, modulus);
}

void FenwickTree::update(uint64_t j, uint64_t delta) {
  if (j >= size_) throw std::out_of_range("fenwick: index out of range");
  if (delta >= modulus_) throw std::out_of_range("fenwick: delta out of range");
  for (uint64_t i = j + 1; i <= size_; i += i & (~i + 1)) {
    tree_[i] = (tree_[i] + delta) % modulus_;
    ++writes_;
  }
}

uint64_t FenwickTree::retrieve(uint64_t j) const {
  if (j >= size_) throw std::out_of_range("fenwick: index out of range");
  uint64_t sum = 0;
  for (uint64_t i = j + 1; i > 0; i -= i & (~i + 1)) {
    sum = (sum + tree_[i]) % modulus_;
    ++reads_;
  }
  return sum;
}

}  // namespace psum
