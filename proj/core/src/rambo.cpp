#include "psum/rambo.hpp"

#include <ostream>

namespace psum {

namespace {

uint64_t checked_node_count(const LaneGeometry& g) {
  if (g.lanes >= 48)
    throw std::invalid_argument("yggdrasil: tree too large to simulate");
  return (uint64_t{1} << g.lanes) - 1;
}

}  // namespace

YggdrasilMemory::YggdrasilMemory(const LaneGeometry& g)
    : geom_(g),
      bit_size_(checked_node_count(g) * g.lane_bits),
      store_((bit_size_ + 63) / 64, 0) {}

uint64_t YggdrasilMemory::load(uint64_t node) const {
  const uint64_t off = (node - 1) * geom_.lane_bits;
  const unsigned w = geom_.lane_bits;
  const uint64_t word = off >> 6;
  const unsigned sh = off & 63;
  uint64_t v = store_[word] >> sh;
  if (sh + w > 64) v |= store_[word + 1] << (64 - sh);
  return v & detail::low_mask(w);
}

void YggdrasilMemory::store(uint64_t node, uint64_t value) {
  const uint64_t off = (node - 1) * geom_.lane_bits;
  const unsigned w = geom_.lane_bits;
  const uint64_t word = off >> 6;
  const unsigned sh = off & 63;
  store_[word] = (store_[word] & ~(detail::low_mask(w) << sh)) | (value << sh);
  if (sh + w > 64) {
    const unsigned spill = sh + w - 64;
    store_[word + 1] =
        (store_[word + 1] & ~detail::low_mask(spill)) | (value >> (w - spill));
  }
}

void YggdrasilMemory::check_node(uint64_t i) const {
  if (i < 1 || i > node_count())
    throw std::out_of_range("yggdrasil: node index out of range");
}

LaneWord YggdrasilMemory::read_reg(uint64_t r) {
  if (r >= register_count())
    throw std::out_of_range("yggdrasil: register index out of range");
  uint64_t bits = 0;
  for (unsigned l = 0; l < geom_.lanes; ++l)
    bits |= load(path_node(r, l)) << (l * geom_.lane_bits);
  ++counters_.reg_reads;
  return {bits, geom_};
}

void YggdrasilMemory::write_reg(uint64_t r, const LaneWord& v) {
  if (r >= register_count())
    throw std::out_of_range("yggdrasil: register index out of range");
  assert(v.geom == geom_);
  assert(v.reduced());
  for (unsigned l = 0; l < geom_.lanes; ++l) store(path_node(r, l), v.lane(l));
  ++counters_.reg_writes;
}

uint64_t YggdrasilMemory::read_node(uint64_t i) {
  check_node(i);
  ++counters_.node_reads;
  return load(i);
}

void YggdrasilMemory::write_node(uint64_t i, uint64_t value) {
  check_node(i);
  if (value > geom_.lane_mask())
    throw std::out_of_range("yggdrasil: node value does not fit lane width");
  ++counters_.node_writes;
  store(i, value);
}

uint64_t YggdrasilMemory::peek_node(uint64_t i) const {
  check_node(i);
  return load(i);
}

void YggdrasilMemory::dump(std::ostream& os) const {
  for (uint64_t i = 1; i <= node_count(); ++i)
    os << "nu[" << i << "] = " << load(i) << '\n';
}

}  // namespace psum
