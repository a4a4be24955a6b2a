#include <random>
#include <sstream>

#include "doctest.h"
#include "psum/rambo.hpp"

using namespace psum;

TEST_CASE("backing store sizes") {
  CHECK(YggdrasilMemory(LaneGeometry(2, 8)).backing_bits() == 9);
  CHECK(YggdrasilMemory(LaneGeometry(1, 16)).backing_bits() == 4);
  CHECK(YggdrasilMemory(LaneGeometry(4, 8)).backing_bits() == 45);
  CHECK(YggdrasilMemory(LaneGeometry(1, 16)).register_count() == 1);
  CHECK(YggdrasilMemory(LaneGeometry(4, 8)).register_count() == 8);
}

TEST_CASE("fresh memory reads zero everywhere with zero counters") {
  YggdrasilMemory mem(LaneGeometry(3, 5));
  CHECK(mem.counters().reg_reads == 0);
  CHECK(mem.counters().reg_writes == 0);
  CHECK(mem.counters().node_reads == 0);
  CHECK(mem.counters().node_writes == 0);
  for (uint64_t r = 0; r < mem.register_count(); ++r) CHECK(mem.read_reg(r).bits == 0);
  CHECK(mem.counters().reg_reads == mem.register_count());
  CHECK(mem.counters().reg_writes == 0);
}

TEST_CASE("the root is lane n-1 of every register") {
  LaneGeometry g(4, 8);
  YggdrasilMemory mem(g);
  mem.write_node(1, 6);
  for (uint64_t r = 0; r < mem.register_count(); ++r)
    CHECK(mem.read_reg(r).lane(g.lanes - 1) == 6);
}

TEST_CASE("leaf-level nodes are private to their register") {
  YggdrasilMemory mem(LaneGeometry(2, 8));
  mem.write_node(2, 5);
  CHECK(mem.read_reg(0).lane(0) == 5);
  CHECK(mem.read_reg(1).lane(0) == 0);
}

TEST_CASE("node round trip and register write visibility") {
  LaneGeometry g(3, 8);
  YggdrasilMemory mem(g);
  mem.write_node(2, 7);
  CHECK(mem.read_node(2) == 7);
  CHECK(mem.read_reg(0).lane(1) == 7);

  // write through reg 0, observe shared suffix through reg 1
  LaneWord v{0, g};
  v.bits = 3 | (5 << 3) | (uint64_t{2} << 6);  // lanes (3,5,2) -> nodes 4,2,1
  mem.write_reg(0, v);
  LaneWord w = mem.read_reg(1);  // path 5,2,1
  CHECK(w.lane(0) == 0);
  CHECK(w.lane(1) == 5);
  CHECK(w.lane(2) == 2);
}

TEST_CASE("write_reg of read_reg is a no-op on the store") {
  std::mt19937_64 rng(3);
  LaneGeometry g(4, 7);
  YggdrasilMemory mem(g);
  for (int i = 0; i < 50; ++i) mem.write_node(1 + rng() % mem.node_count(), rng() % 7);
  std::ostringstream before;
  mem.dump(before);
  for (uint64_t r = 0; r < mem.register_count(); ++r) mem.write_reg(r, mem.read_reg(r));
  std::ostringstream after;
  mem.dump(after);
  CHECK(before.str() == after.str());
}

TEST_CASE("aliasing: registers always reflect node state and vice versa") {
  std::mt19937_64 rng(5);
  for (unsigned n = 1; n <= 6; ++n) {
    LaneGeometry g(n, 8);
    YggdrasilMemory mem(g);
    std::vector<uint64_t> shadow(mem.node_count() + 1, 0);
    for (int step = 0; step < 300; ++step) {
      if (rng() % 2 == 0) {
        uint64_t i = 1 + rng() % mem.node_count();
        uint64_t v = rng() % 8;
        mem.write_node(i, v);
        shadow[i] = v;
      } else {
        uint64_t r = rng() % mem.register_count();
        LaneWord v{0, g};
        for (unsigned l = 0; l < n; ++l) v.bits |= (rng() % 8) << (l * 3);
        mem.write_reg(r, v);
        for (unsigned l = 0; l < n; ++l) shadow[mem.path_node(r, l)] = v.lane(l);
      }
      uint64_t r = rng() % mem.register_count();
      LaneWord got = mem.read_reg(r);
      for (unsigned l = 0; l < n; ++l) CHECK(got.lane(l) == shadow[mem.path_node(r, l)]);
      uint64_t i = 1 + rng() % mem.node_count();
      CHECK(mem.peek_node(i) == shadow[i]);
    }
  }
}

TEST_CASE("register pairs share exactly their common path suffix") {
  for (unsigned n = 1; n <= 6; ++n) {
    LaneGeometry g(n, 4);
    YggdrasilMemory mem(g);
    for (uint64_t a = 0; a < mem.register_count(); ++a) {
      for (uint64_t b = 0; b < mem.register_count(); ++b) {
        if (a == b) continue;
        // merge level: lowest l with identical path nodes from there up
        unsigned merge = 0;
        while (mem.path_node(a, merge) != mem.path_node(b, merge)) ++merge;
        for (unsigned l = 0; l < n; ++l) {
          bool shared = mem.path_node(a, l) == mem.path_node(b, l);
          CHECK(shared == (l >= merge));
        }
      }
    }
  }
}

TEST_CASE("counters track each access class separately") {
  YggdrasilMemory mem(LaneGeometry(3, 8));
  mem.read_reg(0);
  CHECK(mem.counters().reg_reads == 1);
  mem.write_reg(0, LaneWord{0, mem.geometry()});
  mem.read_node(1);
  mem.write_node(1, 3);
  mem.peek_node(1);
  const AccessCounters& c = mem.counters();
  CHECK(c.reg_reads == 1);
  CHECK(c.reg_writes == 1);
  CHECK(c.node_reads == 1);
  CHECK(c.node_writes == 1);
}

TEST_CASE("range errors") {
  YggdrasilMemory mem(LaneGeometry(3, 8));
  CHECK_THROWS_AS(mem.read_reg(4), std::out_of_range);
  CHECK_THROWS_AS(mem.read_node(0), std::out_of_range);
  CHECK_THROWS_AS(mem.read_node(8), std::out_of_range);
  CHECK_THROWS_AS(mem.write_node(1, 8), std::out_of_range);
}

TEST_CASE("dump format is one nu[i] line per node in heap order") {
  YggdrasilMemory mem(LaneGeometry(2, 8));
  mem.write_node(2, 5);
  std::ostringstream os;
  mem.dump(os);
  CHECK(os.str() == "nu[1] = 0\nnu[2] = 5\nnu[3] = 0\n");
}
