#include <optional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "psum/baseline.hpp"
#include "psum/nmtree.hpp"

using namespace psum;

namespace {

// Recomputes every node from the oracle array: node i must hold the sum of
// the oracle values under its left subtree, mod M; vn1 must be A(last).
bool audit_semantics(const NmTree& t, const Oracle& o) {
  const unsigned n = t.geometry().lanes;
  const uint64_t padded = t.padded_size();
  const uint64_t M = t.modulus();
  for (uint64_t i = 1; i < padded; ++i) {
    const unsigned depth = std::bit_width(i) - 1;
    const uint64_t span = padded >> depth;
    const uint64_t first = i * span - padded;
    uint64_t want = 0;
    for (uint64_t leaf = first; leaf < first + span / 2; ++leaf)
      if (leaf < o.size()) want = (want + o.value(leaf)) % M;
    if (t.memory().peek_node(i) != want) return false;
  }
  uint64_t last = padded - 1;
  uint64_t want_vn1 = last < o.size() ? o.value(last) : 0;
  (void)n;
  return t.vn1() == want_vn1;
}

// The per-bit shifted-add register update: for every zero bit i of j, add
// delta into lane i of reg[j/2], one lane at a time. Reference for the
// single-shot masked update.
void update_per_bit(YggdrasilMemory& mem, uint64_t j, uint64_t delta) {
  const LaneGeometry& g = mem.geometry();
  const uint64_t r = j >> 1;
  for (unsigned i = 0; i < g.lanes; ++i) {
    if (((j >> i) & 1) == 0) {
      LaneWord reg = mem.read_reg(r);
      LaneWord add{delta << (i * g.lane_bits), g};
      mem.write_reg(r, lane_add_mod(reg, add));
    }
  }
}

}  // namespace

TEST_CASE("construction and table sizing") {
  NmTree a(4, 8, 1);  // n=2, max iota 1: no table
  CHECK(a.iota() == 1);
  CHECK_FALSE(a.has_sum_table());

  NmTree b(16, 4, 1);  // n=4, m=2: after one fold 2 lanes of 2 bits
  CHECK(b.has_sum_table());
  CHECK(b.sum_table_size() == 16);

  CHECK_THROWS_AS(NmTree(16, 256, 0, 24), std::invalid_argument);  // 4*8 = 32 > 24
  CHECK_THROWS_AS(NmTree(16, 4, 3), std::invalid_argument);        // iota > lg n
  CHECK_THROWS_AS(NmTree(1, 8), std::invalid_argument);
  CHECK_THROWS_AS(NmTree(4, 1), std::invalid_argument);
}

TEST_CASE("SUM table entries are brute-force lane sums") {
  NmTree t(16, 4, 1);
  const unsigned m = t.geometry().lane_bits;
  for (uint64_t idx = 0; idx < t.sum_table_size(); ++idx) {
    uint64_t want = 0;
    for (unsigned l = 0; l < t.folded_lanes(); ++l)
      want = (want + ((idx >> (l * m)) & t.geometry().lane_mask())) % t.modulus();
    CHECK(t.sum_table_entry(idx) == want);
  }
}

TEST_CASE("worked N=4 M=8 example") {
  NmTree t(4, 8, 1);
  t.update(0, 3);
  CHECK(t.memory().peek_node(1) == 3);
  CHECK(t.memory().peek_node(2) == 3);
  CHECK(t.memory().peek_node(3) == 0);
  CHECK(t.vn1() == 0);

  t.update(2, 5);
  CHECK(t.retrieve(0) == 3);
  CHECK(t.retrieve(1) == 3);
  CHECK(t.retrieve(2) == 0);  // 8 mod 8
  CHECK(t.retrieve(3) == 0);
}

TEST_CASE("last index updates only vn1") {
  NmTree t(4, 8, 1);
  t.update(3, 5);
  CHECK(t.vn1() == 5);
  for (uint64_t i = 1; i <= 3; ++i) CHECK(t.memory().peek_node(i) == 0);
  CHECK(t.retrieve(2) == 0);
  CHECK(t.retrieve(3) == 5);
}

TEST_CASE("update with zero delta changes nothing observable") {
  NmTree t(8, 5, 0);
  t.update(1, 3);
  for (uint64_t j = 0; j < 8; ++j) {
    uint64_t before = t.retrieve(j);
    t.update(j, 0);
    CHECK(t.retrieve(j) == before);
  }
}

TEST_CASE("fresh tree retrieves zero everywhere for all iota") {
  for (unsigned iota = 0; iota <= NmTree::max_iota(16); ++iota) {
    NmTree t(16, 7, iota);
    for (uint64_t j = 0; j < 16; ++j) CHECK(t.retrieve(j) == 0);
  }
}

TEST_CASE("update_logn worked example") {
  NmTree t(4, 8, 1);
  t.update_logn(1, 2);
  CHECK(t.memory().peek_node(1) == 2);
  CHECK(t.memory().peek_node(2) == 0);
  CHECK(t.memory().peek_node(3) == 0);
  CHECK(t.retrieve_logn(0) == 0);
  CHECK(t.retrieve_logn(1) == 2);
}

TEST_CASE("oracle equivalence over random workloads, all iota") {
  std::mt19937_64 rng(23);
  struct Geo { uint64_t n, m; };
  for (Geo geo : {Geo{4, 2}, Geo{8, 5}, Geo{16, 7}, Geo{64, 16}, Geo{100, 9}}) {
    for (unsigned iota = 0; iota <= NmTree::max_iota(geo.n); ++iota) {
      std::optional<NmTree> tree;
      try {
        tree.emplace(geo.n, geo.m, iota, 16);
      } catch (const std::invalid_argument&) {
        continue;  // SUM table would exceed the cap for this iota
      }
      NmTree& t = *tree;
      Oracle o(geo.n, geo.m);
      for (int step = 0; step < 1500; ++step) {
        uint64_t j = rng() % geo.n;
        if (rng() % 2 == 0) {
          uint64_t d = rng() % geo.m;
          t.update(j, d);
          o.update(j, d);
        } else {
          CHECK(t.retrieve(j) == o.retrieve(j));
        }
      }
    }
  }
}

TEST_CASE("semantic invariant holds after every update") {
  std::mt19937_64 rng(29);
  for (uint64_t N : {4, 8, 13, 64}) {
    NmTree t(N, 7, NmTree::max_iota(N));
    Oracle o(N, 7);
    for (int step = 0; step < 200; ++step) {
      uint64_t j = rng() % N;
      uint64_t d = rng() % 7;
      t.update(j, d);
      o.update(j, d);
      CHECK(audit_semantics(t, o));
    }
  }
}

TEST_CASE("register and node variants agree state-for-state") {
  std::mt19937_64 rng(31);
  for (uint64_t N : {4, 16, 64}) {
    NmTree a(N, 11, 1, 20);
    NmTree b(N, 11, NmTree::max_iota(N));
    for (int step = 0; step < 500; ++step) {
      uint64_t j = rng() % N;
      uint64_t d = rng() % 11;
      a.update(j, d);
      b.update_logn(j, d);
      uint64_t q = rng() % N;
      uint64_t want = a.retrieve(q);
      CHECK(b.retrieve(q) == want);
      CHECK(a.retrieve_logn(q) == want);
      CHECK(b.retrieve_logn(q) == want);
    }
    // bit-identical backing stores
    std::ostringstream da, db;
    a.memory().dump(da);
    b.memory().dump(db);
    CHECK(da.str() == db.str());
    CHECK(a.vn1() == b.vn1());
  }
}

TEST_CASE("single-shot masked update matches the per-bit register update") {
  std::mt19937_64 rng(37);
  LaneGeometry g(5, 23);
  NmTree t(32, 23, NmTree::max_iota(32));
  YggdrasilMemory ref(g);
  for (int step = 0; step < 400; ++step) {
    uint64_t j = rng() % 31;  // skip the vn1 leaf; it bypasses registers
    uint64_t d = rng() % 23;
    t.update(j, d);
    update_per_bit(ref, j, d);
    std::ostringstream sa, sb;
    t.memory().dump(sa);
    ref.dump(sb);
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("model cost: one read + one write per update, one read per retrieve") {
  for (uint64_t N : {4, 16, 64, 1024}) {
    NmTree t(N, 4, 1);
    const AccessCounters& c = t.memory().counters();
    uint64_t r0 = c.reg_reads, w0 = c.reg_writes;
    t.update(0, 3);
    CHECK(c.reg_reads == r0 + 1);
    CHECK(c.reg_writes == w0 + 1);
    t.retrieve(N / 2);
    CHECK(c.reg_reads == r0 + 2);
    CHECK(c.reg_writes == w0 + 1);
    // vn1 update costs nothing in the register model
    t.update(N - 1, 1);
    CHECK(c.reg_reads == r0 + 2);
    CHECK(c.reg_writes == w0 + 1);
  }
}

TEST_CASE("non-power-of-two sizes reject out-of-range indices") {
  NmTree t(13, 7, 1, 20);
  CHECK_THROWS_AS(t.update(13, 1), std::out_of_range);
  CHECK_THROWS_AS(t.retrieve(13), std::out_of_range);
  CHECK(t.padded_size() == 16);
  t.update(12, 6);
  CHECK(t.retrieve(12) == 6);
}

TEST_CASE("partial sums") {
  NmTree t(4, 8, 1);
  t.update(0, 3);
  t.update(2, 5);
  CHECK(t.partial_sum(1, 2) == 5);
  for (uint64_t j = 0; j < 4; ++j) CHECK(t.partial_sum(0, j) == t.retrieve(j));
  CHECK_THROWS_AS(t.partial_sum(2, 1), std::invalid_argument);

  std::mt19937_64 rng(41);
  NmTree u(64, 13, 1);
  Oracle o(64, 13);
  for (int step = 0; step < 300; ++step) {
    uint64_t j = rng() % 64;
    uint64_t d = rng() % 13;
    u.update(j, d);
    o.update(j, d);
    uint64_t a = rng() % 64, b = rng() % 64;
    if (a > b) std::swap(a, b);
    CHECK(u.partial_sum(a, b) == o.retrieve_range(a, b));
    CHECK(u.partial_sum(a, a) == o.value(a));
  }
}

TEST_CASE("dump starts with the parameter line") {
  NmTree t(4, 8, 1);
  t.update(3, 5);
  std::ostringstream os;
  t.dump(os);
  CHECK(os.str().substr(0, 8) == "4 8 1 5\n");
}

TEST_CASE("range errors on update and retrieve") {
  NmTree t(8, 5, 0);
  CHECK_THROWS_AS(t.update(8, 1), std::out_of_range);
  CHECK_THROWS_AS(t.update(0, 5), std::out_of_range);
  CHECK_THROWS_AS(t.retrieve(8), std::out_of_range);
}
