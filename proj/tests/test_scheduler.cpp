#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ldep/scheduler.hpp"
#include "support/oracles.hpp"

using namespace ldep;

TEST_CASE("schedule_cc emits the worked component in dependence order") {
  std::vector<Lde> one{Lde(2, -3, 5)};
  IterRange r(-8, 7);
  CcSchedule s = schedule_cc(-1, one, r);
  CHECK(s.order == std::vector<int64_t>{-1, 1, 4});
  CHECK(s.heap_pops <= 6);

  // starting from any member gives the same order
  CHECK(schedule_cc(1, one, r).order == std::vector<int64_t>{-1, 1, 4});
  CHECK(schedule_cc(4, one, r).order == std::vector<int64_t>{-1, 1, 4});

  CHECK(schedule_cc(2, one, r).order == std::vector<int64_t>{2});

  // Multi-LDE components emit lazily: -4 is ready before -6 is even
  // discovered (they are independent of each other), so the order is
  // dependence-preserving but not globally ascending.
  std::vector<Lde> two{Lde(2, -3, 5), Lde(1, -2, 0)};
  CHECK(schedule_cc(-8, two, r).order ==
        std::vector<int64_t>{-8, -7, -4, -6, -3, -2, -1, 1, 2, 4});
}

TEST_CASE("schedule_cc on random components: bounded pops, deps ordered") {
  std::mt19937_64 gen(53);
  std::uniform_int_distribution<int64_t> coeff(-15, 15), cons(-50, 50);
  std::uniform_int_distribution<int> n_ldes(1, 4);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<Lde> ldes;
    int n = n_ldes(gen);
    while (static_cast<int>(ldes.size()) < n) {
      int64_t a = coeff(gen), b = coeff(gen);
      if (a == 0 || b == 0) continue;
      ldes.emplace_back(a, b, cons(gen));
    }
    IterRange range(-64, 63);
    DepGraph g = build_graph(ldes, range);
    IterPartition part = connected_components(g);
    for (size_t i = 0; i < part.size(); ++i) {
      const auto& comp = part.components[i];
      CcSchedule s = schedule_cc(comp.front(), ldes, range);
      std::vector<int64_t> sorted = s.order;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == comp);  // each member exactly once
      CHECK(s.heap_pops <= 2 * static_cast<int64_t>(comp.size()));
      // dependence pairs run earlier-iteration before later-iteration
      std::map<int64_t, size_t> pos;
      for (size_t k = 0; k < s.order.size(); ++k) pos[s.order[k]] = k;
      for (const auto& [u, v] : g.edges) {
        if (!pos.count(u)) continue;
        CHECK(pos.at(u) < pos.at(v));
      }
    }
  }
}

TEST_CASE("single-LDE chains with a negative b schedule in ascending order") {
  // b < 0 makes chain values monotone along the path, so the lazily
  // discovered frontier is always the smallest remaining member.
  std::mt19937_64 gen(57);
  std::uniform_int_distribution<int64_t> apos(1, 15), bneg(-15, -1), cons(-50, 50);
  for (int trial = 0; trial < 120; ++trial) {
    Lde lde(apos(gen), bneg(gen), cons(gen));
    IterRange range(-64, 63);
    IterPartition part = connected_components(build_graph({lde}, range));
    for (const auto& comp : part.components) {
      CcSchedule s = schedule_cc(comp.front(), {lde}, range);
      CHECK(s.order == comp);
    }
  }
}

TEST_CASE("pack_threads on the worked partition") {
  IterPartition p = connected_components(build_graph({Lde(2, -3, 5)}, IterRange(-8, 7)));
  ThreadPlan plan = pack_threads(p, 4);
  CHECK(plan.makespan == 4);  // 16 iterations over 4 threads, largest CC is 3
  int64_t total = 0;
  for (const auto& t : plan.per_thread) total += static_cast<int64_t>(t.size());
  CHECK(total == 16);

  ThreadPlan one = pack_threads(p, 1);
  CHECK(one.makespan == 16);
  CHECK(one.per_thread[0].size() == 16);

  ThreadPlan wide = pack_threads(p, 32);
  CHECK(wide.makespan == 3);  // one component per thread
}

TEST_CASE("pack_threads invariants on random partitions") {
  std::mt19937_64 gen(59);
  std::uniform_int_distribution<int64_t> coeff(-10, 10), cons(-30, 30);
  std::uniform_int_distribution<int> kdist(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    int64_t a = coeff(gen), b = coeff(gen);
    if (a == 0 || b == 0) continue;
    IterRange range(-32, 31);
    IterPartition p = connected_components(build_graph({Lde(a, b, cons(gen))}, range));
    int k = kdist(gen);
    ThreadPlan plan = pack_threads(p, k);

    std::set<int64_t> covered;
    for (const auto& t : plan.per_thread) covered.insert(t.begin(), t.end());
    CHECK(covered.size() == static_cast<size_t>(range.size()));

    // no component splits across threads
    for (size_t cc = 0; cc < p.size(); ++cc) CHECK(plan.assignment[cc] >= 0);

    int64_t max_cc = p.max_component_size();
    int64_t lower = std::max((range.size() + k - 1) / k, max_cc);
    CHECK(plan.makespan >= lower);
  }
}

TEST_CASE("pack_threads rejects nonpositive thread counts") {
  IterPartition p = connected_components(build_graph({Lde(2, -3, 5)}, IterRange(-8, 7)));
  CHECK_THROWS_AS(pack_threads(p, 0), Error);
}

namespace {

/// i in subscripts, j never used: the motivation LDE on a 2-nest.
LoopNest motivation_nest_with_free_inner() {
  LoopNest nest;
  nest.loops = {Loop{"i", IterRange(-8, 7)}, Loop{"j", IterRange(0, 3)}};
  nest.arrays = {ArrayDecl{"g", 1}};
  nest.accesses = {
      ArrayAccess{0, true, 0, {AffineExpr{{{2, 0}}, 1}}},
      ArrayAccess{0, false, 1, {AffineExpr{{{3, 0}}, 6}}},
  };
  return nest;
}

}  // namespace

TEST_CASE("schedule_nested: parallel components then sequential free loop") {
  LoopNest nest = motivation_nest_with_free_inner();
  DependenceRelation rel = multi_array_dependence(nest);
  ScheduleTree tree = schedule_nested(nest, rel);
  REQUIRE(tree.levels.size() == 2);
  CHECK(tree.levels[0].kind == LevelKind::ParallelComponents);
  CHECK(tree.levels[0].groups.size() == 11);  // the worked partition
  CHECK(tree.levels[0].seeds.size() == 11);
  CHECK(tree.levels[1].kind == LevelKind::Sequential);
  REQUIRE(tree.levels[1].groups.size() == 1);
  CHECK(tree.levels[1].groups[0] == std::vector<int64_t>{0, 1, 2, 3});
  CHECK_FALSE(tree.body_fully_parallel);
  CHECK(tree.leaf_count() == 16 * 4);
}

TEST_CASE("schedule_nested: all loops free makes the body fully parallel") {
  LoopNest nest;
  nest.loops = {Loop{"i", IterRange(0, 4)}, Loop{"j", IterRange(0, 2)}};
  nest.arrays = {ArrayDecl{"g", 1}};
  // constant subscripts only: no loop variable reaches the array
  nest.accesses = {
      ArrayAccess{0, true, 0, {AffineExpr{{}, 3}}},
      ArrayAccess{0, false, 1, {AffineExpr{{}, 7}}},
  };
  DependenceRelation rel = multi_array_dependence(nest);
  ScheduleTree tree = schedule_nested(nest, rel);
  CHECK(tree.body_fully_parallel);
  for (const auto& level : tree.levels) CHECK(level.kind == LevelKind::Sequential);
  CHECK(tree.leaf_count() == 5 * 3);
}

TEST_CASE("schedule_nested: inner subscript-carrying loop becomes value-parallel") {
  LoopNest nest;
  nest.loops = {Loop{"i", IterRange(-8, 7)}, Loop{"j", IterRange(0, 5)}};
  nest.arrays = {ArrayDecl{"A", 2}};
  // A[2i+1][2j] write vs A[3i+6][3j] read
  nest.accesses = {
      ArrayAccess{0, true, 0, {AffineExpr{{{2, 0}}, 1}, AffineExpr{{{2, 1}}, 0}}},
      ArrayAccess{0, false, 1, {AffineExpr{{{3, 0}}, 6}, AffineExpr{{{3, 1}}, 0}}},
  };
  DependenceRelation rel = multi_array_dependence(nest);
  ScheduleTree tree = schedule_nested(nest, rel);
  REQUIRE(tree.levels.size() == 2);
  CHECK(tree.levels[0].kind == LevelKind::ParallelComponents);
  CHECK(tree.levels[1].kind == LevelKind::ParallelValues);
  CHECK(tree.levels[1].groups.size() == 6);  // one group per value of j
  for (const auto& g : tree.levels[1].groups) CHECK(g.size() == 1);
  CHECK(tree.leaf_count() == 16 * 6);
}
