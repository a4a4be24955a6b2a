#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "psum/wordpar.hpp"

namespace psum {

// Model-cost counters. Register accesses are what the overlapped-memory
// model charges for; node accesses are the debug/test side door and are
// counted separately.
struct AccessCounters {
  uint64_t reg_reads = 0;
  uint64_t reg_writes = 0;
  uint64_t node_reads = 0;
  uint64_t node_writes = 0;
};

// Software simulation of an m-Yggdrasil overlapped memory: a complete binary
// tree of 2^n - 1 nodes of m bits each, backed by a flat store of exactly
// (2^n - 1) * m bits. Register r (0 <= r < 2^(n-1)) is the leaf-to-root path
// starting at node 2^(n-1) + r; lane l of the register aliases node
// (2^(n-1) + r) >> l, so lane n-1 of every register is the root.
//
// A register read/write moves n lanes but costs exactly one model access;
// the O(n) gather/scatter is host-simulation cost only.
class YggdrasilMemory {
 public:
  explicit YggdrasilMemory(const LaneGeometry& g);

  const LaneGeometry& geometry() const { return geom_; }
  uint64_t register_count() const { return uint64_t{1} << (geom_.lanes - 1); }
  uint64_t node_count() const { return (uint64_t{1} << geom_.lanes) - 1; }
  uint64_t backing_bits() const { return bit_size_; }

  // Heap index of the node aliased by lane `level` of register r.
  uint64_t path_node(uint64_t r, unsigned level) const {
    return ((register_count() + r) >> level);
  }

  LaneWord read_reg(uint64_t r);
  void write_reg(uint64_t r, const LaneWord& v);

  uint64_t read_node(uint64_t i);
  void write_node(uint64_t i, uint64_t value);

  // Node value without touching the counters (dumps, audits).
  uint64_t peek_node(uint64_t i) const;

  const AccessCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }

  // One line per node, `nu[i] = <value>`, heap order.
  void dump(std::ostream& os) const;

  bool operator==(const YggdrasilMemory& other) const {
    return geom_ == other.geom_ && store_ == other.store_;
  }

 private:
  uint64_t load(uint64_t node) const;
  void store(uint64_t node, uint64_t value);
  void check_node(uint64_t i) const;

  LaneGeometry geom_;
  uint64_t bit_size_;
  std::vector<uint64_t> store_;  // flat bit array, node i at bit (i-1)*m
  AccessCounters counters_;
};

}  // namespace psum
