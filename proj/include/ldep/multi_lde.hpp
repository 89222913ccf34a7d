#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ldep/lde.hpp"
#include "ldep/partition.hpp"

namespace ldep {

/// Seed classification for a loop governed by several LDEs: CS holds the
/// iterations shared by at least two LDEs' solution sets, UCS a per-component
/// unique choice among them, UL_i what remains unique to each LDE.
struct SeedClassification {
  std::vector<int64_t> common_seeds;                    // CS, sorted
  std::vector<int64_t> unique_common_seeds;             // UCS, in pick order
  std::vector<std::vector<int64_t>> unique_seeds;       // UL_i residue, sorted
};

/// Union of the LDEs' solution sets (eq. form S = S_1 u ... u S_n).
inline DepGraph union_solutions(const std::vector<Lde>& ldes, const IterRange& range) {
  return build_graph(ldes, range);
}

namespace detail {

inline std::vector<int64_t> endpoint_set(const Lde& lde, const IterRange& range) {
  std::vector<int64_t> pts;
  for (const DepPair& p : solutions_in_range(lde, range)) {
    pts.push_back(p.source);
    pts.push_back(p.sink);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// Iterations appearing as an endpoint (source or sink, self-pairs included)
/// in the solutions of at least two distinct LDEs. Computed by counting
/// per-LDE endpoint sets, which gives the same set as the pairwise case
/// analysis in O(total solutions).
inline std::vector<int64_t> common_seeds(const std::vector<Lde>& ldes,
                                         const IterRange& range) {
  if (ldes.size() < 2) return {};
  std::map<int64_t, int> hits;
  for (const Lde& lde : ldes)
    for (int64_t v : detail::endpoint_set(lde, range)) ++hits[v];
  std::vector<int64_t> cs;
  for (const auto& [v, n] : hits)
    if (n >= 2) cs.push_back(v);
  return cs;
}

/// Unique common seeds and per-LDE unique seeds: starting from UL_i = the
/// endpoint set of LDE i, repeatedly move the minimum of CS into UCS, expand
/// its full component, and subtract that component from CS and every UL_i.
inline SeedClassification unique_common_seeds(const std::vector<Lde>& ldes,
                                              const IterRange& range) {
  SeedClassification out;
  out.common_seeds = common_seeds(ldes, range);
  out.unique_seeds.reserve(ldes.size());
  std::vector<std::set<int64_t>> ul;
  for (const Lde& lde : ldes) {
    auto pts = detail::endpoint_set(lde, range);
    ul.emplace_back(pts.begin(), pts.end());
  }
  std::set<int64_t> cs(out.common_seeds.begin(), out.common_seeds.end());
  while (!cs.empty()) {
    int64_t e = *cs.begin();
    cs.erase(cs.begin());
    out.unique_common_seeds.push_back(e);
    std::vector<int64_t> part = cc_from_seed(e, ldes, range);
    for (int64_t v : part) {
      cs.erase(v);
      for (auto& u : ul) u.erase(v);
    }
  }
  for (const auto& u : ul) out.unique_seeds.emplace_back(u.begin(), u.end());
  return out;
}

}  // namespace ldep
