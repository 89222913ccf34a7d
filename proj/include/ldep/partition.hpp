#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "ldep/lde.hpp"

namespace ldep {

// A materialized partition walks every iteration in the range, so cap it.
inline constexpr int64_t kMaxMaterializedRange = int64_t{1} << 24;

/// Undirected dependence graph over a range: edges are the non-self solution
/// pairs of the contributing LDEs, self-solutions are kept separately.
struct DepGraph {
  IterRange range;
  std::vector<Lde> ldes;
  std::vector<std::pair<int64_t, int64_t>> edges;  // u < v, sorted, unique
  std::vector<int64_t> self_deps;                  // sorted, unique

  bool has_self_dep(int64_t v) const {
    return std::binary_search(self_deps.begin(), self_deps.end(), v);
  }
};

enum class CcClass { IndependentSingleton, SelfDepSingleton, NonSingleton };

/// Connected components of a DepGraph; components are ascending, listed by
/// their minimum element, and jointly cover the range exactly.
struct IterPartition {
  IterRange range;
  std::vector<std::vector<int64_t>> components;
  std::vector<CcClass> classes;

  size_t size() const { return components.size(); }
  int64_t max_component_size() const {
    size_t m = 0;
    for (const auto& c : components) m = std::max(m, c.size());
    return static_cast<int64_t>(m);
  }
};

/// One representative per component, sufficient to regenerate it on demand.
struct SeedSet {
  std::vector<int64_t> seeds;  // seeds[i] = min of components[i]
};

/// The closed-form estimates on component count and length for one LDE.
/// All counts are floor-free real-valued estimates, not exact values.
struct Bounds {
  int64_t r;                // range size
  int64_t beta;             // max(|dx|, |dy|) of the parametric steps
  double est_len2_count;    // R / beta
  double est_singletons;    // R - 2R / beta
  int64_t p_max;            // beta^p_max <= R < beta^(p_max+1)
  int64_t l_max;            // p_max + 1, upper bound on |CC|
  double n_max;             // alternating-series bound on non-singleton CCs
};

namespace detail {

/// Array-backed disjoint-set over range offsets.
class UnionFind {
public:
  explicit UnionFind(size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  size_t find(size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];  // path halving
      v = parent_[v];
    }
    return v;
  }

  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

private:
  std::vector<uint32_t> parent_;
  std::vector<uint32_t> size_;
};

inline void check_materializable(const IterRange& range) {
  if (range.size() > kMaxMaterializedRange)
    throw Error("partition/range_too_large",
                "range size " + std::to_string(range.size()) +
                    " exceeds materialization limit " +
                    std::to_string(kMaxMaterializedRange));
}

/// Shared partition construction: unions come from a caller-driven callback.
template <typename EmitUnions>
IterPartition components_from_unions(const IterRange& range, EmitUnions&& emit,
                                     const std::vector<int64_t>& self_deps) {
  check_materializable(range);
  size_t n = static_cast<size_t>(range.size());
  UnionFind uf(n);
  emit(uf);
  // Scanning ascending assigns component ids by first occurrence, so the
  // result is ordered by minimum element with members already sorted.
  std::vector<uint32_t> comp_id(n, UINT32_MAX);
  IterPartition part{range, {}, {}};
  for (size_t i = 0; i < n; ++i) {
    size_t root = uf.find(i);
    if (comp_id[root] == UINT32_MAX) {
      comp_id[root] = static_cast<uint32_t>(part.components.size());
      part.components.emplace_back();
    }
    part.components[comp_id[root]].push_back(range.lo + static_cast<int64_t>(i));
  }
  part.classes.reserve(part.components.size());
  for (const auto& comp : part.components) {
    if (comp.size() > 1) {
      part.classes.push_back(CcClass::NonSingleton);
    } else if (std::binary_search(self_deps.begin(), self_deps.end(), comp[0])) {
      part.classes.push_back(CcClass::SelfDepSingleton);
    } else {
      part.classes.push_back(CcClass::IndependentSingleton);
    }
  }
  return part;
}

}  // namespace detail

/// Union of the LDEs' solution pairs over the range as an undirected graph.
inline DepGraph build_graph(const std::vector<Lde>& ldes, const IterRange& range) {
  DepGraph g{range, ldes, {}, {}};
  for (const Lde& lde : ldes) {
    for (const DepPair& p : solutions_in_range(lde, range)) {
      if (p.self_dependence()) {
        g.self_deps.push_back(p.source);
      } else {
        g.edges.emplace_back(std::min(p.source, p.sink), std::max(p.source, p.sink));
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  std::sort(g.self_deps.begin(), g.self_deps.end());
  g.self_deps.erase(std::unique(g.self_deps.begin(), g.self_deps.end()),
                    g.self_deps.end());
  return g;
}

inline IterPartition connected_components(const DepGraph& graph) {
  return detail::components_from_unions(
      graph.range,
      [&](detail::UnionFind& uf) {
        for (const auto& [u, v] : graph.edges)
          uf.unite(static_cast<size_t>(u - graph.range.lo),
                   static_cast<size_t>(v - graph.range.lo));
      },
      graph.self_deps);
}

/// Regenerates the connected component of `seed` by transitive closure under
/// source/sink queries across all LDEs. Each iteration is queried once per
/// LDE per direction.
inline std::vector<int64_t> cc_from_seed(int64_t seed, const std::vector<Lde>& ldes,
                                         const IterRange& range) {
  std::unordered_set<int64_t> visited{seed};
  std::vector<int64_t> stack{seed};
  while (!stack.empty()) {
    int64_t n = stack.back();
    stack.pop_back();
    for (const Lde& lde : ldes) {
      if (auto y = sink_of(lde, n, range); y && visited.insert(*y).second)
        stack.push_back(*y);
      if (auto x = source_of(lde, n, range); x && visited.insert(*x).second)
        stack.push_back(*x);
    }
  }
  std::vector<int64_t> cc(visited.begin(), visited.end());
  std::sort(cc.begin(), cc.end());
  return cc;
}

/// Deterministic seed choice: the minimum iteration of each component.
inline SeedSet seeds_of(const IterPartition& partition) {
  SeedSet s;
  s.seeds.reserve(partition.components.size());
  for (const auto& comp : partition.components) s.seeds.push_back(comp.front());
  return s;
}

/// Estimates from the geometric count formulas, with beta taken from the
/// post-gcd parametric step magnitudes.
inline Bounds bounds(const Lde& lde, const IterRange& range) {
  int64_t g = gcd(lde.a, lde.b);
  int64_t beta = std::max(checked_abs(lde.a / g), checked_abs(lde.b / g));
  if (beta <= 1)
    throw DegenerateStepError("unit-step LDE (constant-distance dependence); geometric bounds diverge");
  int64_t r = range.size();
  int64_t p_max = 0;
  int64_t power = beta;  // beta^(p_max+1)
  while (power <= r) {
    ++p_max;
    power = checked_mul(power, beta);
  }
  double rd = static_cast<double>(r);
  double bd = static_cast<double>(beta);
  double n_max = 0.0;
  double sign = 1.0;
  double denom = bd;
  for (int64_t k = 1; k <= p_max; ++k, denom *= bd, sign = -sign) n_max += sign * rd / denom;
  return Bounds{r,     beta,      rd / bd, rd - 2.0 * rd / bd,
                p_max, p_max + 1, n_max};
}

}  // namespace ldep
