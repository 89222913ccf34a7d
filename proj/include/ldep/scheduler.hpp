#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <unordered_set>
#include <vector>

#include "ldep/lde.hpp"
#include "ldep/nested.hpp"
#include "ldep/partition.hpp"

namespace ldep {

/// Dependence-preserving execution order for one connected component.
struct CcSchedule {
  int64_t seed;
  std::vector<int64_t> order;
  int64_t heap_pushes = 0;
  int64_t heap_pops = 0;
};

/// Min-heap schedule of the component containing `seed`.
///
/// Popping an unvisited node discovers its neighbors; the node is emitted
/// immediately when it has no smaller unexecuted dependence, otherwise it is
/// marked visited and re-queued. Popping a visited node emits it: everything
/// it waits on is already out of the heap. Since dependences always point
/// from smaller to larger iterations, the result is the ascending component.
inline CcSchedule schedule_cc(int64_t seed, const std::vector<Lde>& ldes,
                              const IterRange& range) {
  CcSchedule result{seed, {}, 0, 0};
  std::priority_queue<int64_t, std::vector<int64_t>, std::greater<>> heap;
  std::unordered_set<int64_t> in_heap;
  std::unordered_set<int64_t> visited;
  std::unordered_set<int64_t> scheduled;

  auto push = [&](int64_t v) {
    if (scheduled.count(v) || !in_heap.insert(v).second) return;
    heap.push(v);
    ++result.heap_pushes;
  };

  push(seed);
  while (!heap.empty()) {
    int64_t e = heap.top();
    heap.pop();
    in_heap.erase(e);
    ++result.heap_pops;
    if (visited.count(e)) {
      result.order.push_back(e);
      scheduled.insert(e);
      continue;
    }
    std::vector<int64_t> nbrs;
    for (const Lde& lde : ldes) {
      if (auto y = sink_of(lde, e, range); y && *y != e) nbrs.push_back(*y);
      if (auto x = source_of(lde, e, range); x && *x != e) nbrs.push_back(*x);
    }
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    bool blocked = false;
    for (int64_t v : nbrs) {
      push(v);
      if (v < e && !scheduled.count(v)) blocked = true;
    }
    if (blocked) {
      visited.insert(e);
      push(e);
    } else {
      result.order.push_back(e);
      scheduled.insert(e);
    }
  }
  return result;
}

/// Packing of whole components onto k threads.
struct ThreadPlan {
  int k;
  std::vector<int> assignment;                   // component id -> thread id
  std::vector<std::vector<int64_t>> per_thread;  // concatenated iterations
  std::vector<std::vector<size_t>> thread_ccs;   // component ids per thread
  int64_t makespan;                              // max thread load
};

/// Longest-processing-time-first packing: components sorted by size
/// descending go to the least-loaded thread; a component never splits, so
/// threads need no synchronization.
inline ThreadPlan pack_threads(const IterPartition& partition, int k) {
  if (k < 1) throw Error("scheduler/bad_thread_count", "thread count must be >= 1");
  ThreadPlan plan{k, std::vector<int>(partition.size(), -1), {}, {}, 0};
  plan.per_thread.resize(static_cast<size_t>(k));
  plan.thread_ccs.resize(static_cast<size_t>(k));

  std::vector<size_t> by_size(partition.size());
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(), [&](size_t a, size_t b) {
    return partition.components[a].size() > partition.components[b].size();
  });

  std::vector<int64_t> load(static_cast<size_t>(k), 0);
  for (size_t cc : by_size) {
    size_t t = static_cast<size_t>(
        std::min_element(load.begin(), load.end()) - load.begin());
    plan.assignment[cc] = static_cast<int>(t);
    plan.thread_ccs[t].push_back(cc);
    const auto& comp = partition.components[cc];
    plan.per_thread[t].insert(plan.per_thread[t].end(), comp.begin(), comp.end());
    load[t] += static_cast<int64_t>(comp.size());
  }
  plan.makespan = *std::max_element(load.begin(), load.end());
  return plan;
}

enum class LevelKind {
  ParallelComponents,  // first subscript-carrying loop: one group per seed
  ParallelValues,      // deeper subscript-carrying loop: one group per value
  Sequential,          // loop variable unused: full range in order
};

struct ScheduleLevel {
  int loop;  // index into the nest, outermost = 0
  LevelKind kind;
  std::vector<std::vector<int64_t>> groups;
  std::vector<int64_t> seeds;  // one per group at a ParallelComponents level
};

/// Per-loop schedule structure for a separable nest. Levels are listed
/// outermost-in; parallel groups at one level are synchronization-free.
struct ScheduleTree {
  std::vector<ScheduleLevel> levels;
  bool body_fully_parallel = false;  // no loop variable reaches a subscript

  /// Total body executions implied by the tree (product of level widths).
  int64_t leaf_count() const {
    int64_t n = 1;
    for (const auto& level : levels) {
      int64_t width = 0;
      for (const auto& g : level.groups) width += static_cast<int64_t>(g.size());
      n = checked_mul(n, width);
    }
    return n;
  }
};

/// Nested-loop schedule structure. The first subscript-carrying loop spawns
/// one synchronization-free group per seed, each executing its component in
/// order; every deeper subscript-carrying loop is fully parallel over its
/// range; loops whose variables stay out of subscripts remain sequential.
inline ScheduleTree schedule_nested(const LoopNest& nest, const DependenceRelation& rel) {
  ScheduleTree tree;
  bool inside_parallel = false;
  for (size_t i = 0; i < nest.loops.size(); ++i) {
    const IterRange& range = nest.loops[i].range;
    ScheduleLevel level{static_cast<int>(i), LevelKind::Sequential, {}, {}};
    if (rel.loop_in_v[i]) {
      if (!inside_parallel) {
        inside_parallel = true;
        level.kind = LevelKind::ParallelComponents;
        IterPartition part = project_loop_partition(rel, static_cast<int>(i));
        level.groups = part.components;  // ascending = per-seed schedule order
        level.seeds = seeds_of(part).seeds;
      } else {
        level.kind = LevelKind::ParallelValues;
        for (int64_t v = range.lo; v <= range.hi; ++v) level.groups.push_back({v});
      }
    } else {
      std::vector<int64_t> seq;
      seq.reserve(static_cast<size_t>(range.size()));
      for (int64_t v = range.lo; v <= range.hi; ++v) seq.push_back(v);
      level.groups.push_back(std::move(seq));
    }
    tree.levels.push_back(std::move(level));
  }
  tree.body_fully_parallel = !inside_parallel;
  return tree;
}

}  // namespace ldep
