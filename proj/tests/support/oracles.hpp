#pragma once

// Brute-force reference implementations, deliberately independent of the
// library's solution paths. Everything here is O(R^2)-style enumeration or
// direct simulation.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ldep/lde.hpp"
#include "ldep/nested.hpp"

namespace oracle {

/// All (x, y) in range^2 with a*x + b*y == c, by full scan.
inline std::vector<std::pair<int64_t, int64_t>> brute_solutions(int64_t a, int64_t b, int64_t c,
                                                                int64_t lo, int64_t hi) {
  std::vector<std::pair<int64_t, int64_t>> out;
  for (int64_t x = lo; x <= hi; ++x)
    for (int64_t y = lo; y <= hi; ++y)
      if (a * x + b * y == c) out.emplace_back(x, y);
  return out;
}

/// Map-based disjoint set, structurally unlike the library's array version.
class MapDsu {
public:
  int64_t find(int64_t v) {
    auto it = parent_.find(v);
    if (it == parent_.end() || it->second == v) {
      parent_[v] = v;
      return v;
    }
    int64_t root = find(it->second);
    parent_[v] = root;
    return root;
  }
  void unite(int64_t a, int64_t b) { parent_[find(a)] = find(b); }

private:
  std::map<int64_t, int64_t> parent_;
};

/// Partition of [lo, hi] under the union of the LDEs' brute-force solutions.
inline std::vector<std::vector<int64_t>> brute_partition(const std::vector<ldep::Lde>& ldes,
                                                         int64_t lo, int64_t hi) {
  MapDsu dsu;
  for (const auto& lde : ldes)
    for (auto [x, y] : brute_solutions(lde.a, lde.b, lde.c, lo, hi))
      if (x != y) dsu.unite(x, y);
  std::map<int64_t, std::vector<int64_t>> comps;
  for (int64_t v = lo; v <= hi; ++v) comps[dsu.find(v)].push_back(v);
  std::vector<std::vector<int64_t>> out;
  for (auto& [root, members] : comps) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

/// Self-dependent iterations: x with a*x + b*x == c for some LDE.
inline std::set<int64_t> brute_self_deps(const std::vector<ldep::Lde>& ldes, int64_t lo,
                                         int64_t hi) {
  std::set<int64_t> out;
  for (const auto& lde : ldes)
    for (int64_t x = lo; x <= hi; ++x)
      if (lde.a * x + lde.b * x == lde.c) out.insert(x);
  return out;
}

using Point = std::vector<int64_t>;
using PointPair = std::pair<Point, Point>;

/// All dependent iteration-point pairs of a nest, found by simulating the
/// memory accesses: group (point, access) records by touched address, then
/// emit every pair sharing an address with at least one write. Unordered
/// pairs, self-aliases included.
inline std::set<PointPair> alias_scan(const ldep::LoopNest& nest) {
  std::map<std::pair<int, std::vector<int64_t>>, std::vector<std::pair<Point, bool>>> by_addr;
  Point point(nest.loops.size());
  auto visit = [&](auto&& self, size_t depth) -> void {
    if (depth == nest.loops.size()) {
      for (const auto& acc : nest.accesses) {
        std::vector<int64_t> addr;
        for (const auto& sub : acc.subscripts) addr.push_back(sub.evaluate(point));
        by_addr[{acc.array, std::move(addr)}].emplace_back(point, acc.is_write);
      }
      return;
    }
    const auto& r = nest.loops[depth].range;
    for (int64_t v = r.lo; v <= r.hi; ++v) {
      point[depth] = v;
      self(self, depth + 1);
    }
  };
  visit(visit, 0);

  std::set<PointPair> pairs;
  for (const auto& [addr, touches] : by_addr) {
    for (size_t i = 0; i < touches.size(); ++i) {
      for (size_t j = i; j < touches.size(); ++j) {
        if (!touches[i].second && !touches[j].second) continue;  // read-read
        if (i == j && touches[i].first == touches[j].first) {
          // one access aliasing itself at one point is not a pair
          continue;
        }
        PointPair p = touches[i].first <= touches[j].first
                          ? PointPair{touches[i].first, touches[j].first}
                          : PointPair{touches[j].first, touches[i].first};
        pairs.insert(std::move(p));
      }
    }
  }
  return pairs;
}

}  // namespace oracle
