#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldep/lde.hpp"
#include "ldep/partition.hpp"

namespace ldep {

/// Affine subscript expression: sum of coeff*var terms plus a constant.
/// Separable input keeps at most one term; more survive parsing only so
/// that separability checking can name the offender.
struct AffineExpr {
  struct Term {
    int64_t coeff;
    int var;  // loop index, outermost = 0
    bool operator==(const Term&) const = default;
  };
  std::vector<Term> terms;
  int64_t constant = 0;

  bool is_constant() const { return terms.empty(); }
  std::optional<int> single_var() const {
    if (terms.size() == 1) return terms[0].var;
    return std::nullopt;
  }
  int64_t evaluate(std::span<const int64_t> point) const {
    int64_t v = constant;
    for (const Term& t : terms)
      v = checked_add(v, checked_mul(t.coeff, point[static_cast<size_t>(t.var)]));
    return v;
  }
  bool operator==(const AffineExpr&) const = default;
};

struct Loop {
  std::string var;
  IterRange range;
  bool operator==(const Loop&) const = default;
};

struct ArrayDecl {
  std::string name;
  int dims;
  bool operator==(const ArrayDecl&) const = default;
};

struct ArrayAccess {
  int array;
  bool is_write;
  int stmt;  // originating statement, for provenance
  std::vector<AffineExpr> subscripts;
  bool operator==(const ArrayAccess&) const = default;
};

/// Parsed perfect nest: loops outermost-in, plus every array access of the
/// innermost body.
struct LoopNest {
  std::vector<Loop> loops;
  std::vector<ArrayDecl> arrays;
  std::vector<ArrayAccess> accesses;

  bool operator==(const LoopNest&) const = default;

  bool array_written(int array) const {
    for (const auto& a : accesses)
      if (a.array == array && a.is_write) return true;
    return false;
  }
};

/// Subscript-ownership partition: which loop variable owns each subscript of
/// each written array, plus the V/W loop classification.
struct SeparabilityInfo {
  // [array][subscript] -> owning loop, or -1 for constant-only subscripts.
  // Read-only arrays are not analyzed and hold empty vectors.
  std::vector<std::vector<int>> subscript_owner;
  // [array][loop] -> subscript indices (the D sets; disjoint per array).
  std::vector<std::vector<std::vector<int>>> d_sets;
  std::vector<int> v_loops;  // loops owning at least one subscript
  std::vector<int> w_loops;

  bool loop_in_v(int loop) const {
    return std::binary_search(v_loops.begin(), v_loops.end(), loop);
  }
};

inline SeparabilityInfo check_separable(const LoopNest& nest) {
  SeparabilityInfo info;
  int n_loops = static_cast<int>(nest.loops.size());
  info.subscript_owner.resize(nest.arrays.size());
  info.d_sets.resize(nest.arrays.size());
  std::vector<bool> in_v(static_cast<size_t>(n_loops), false);

  for (size_t ai = 0; ai < nest.arrays.size(); ++ai) {
    info.d_sets[ai].resize(static_cast<size_t>(n_loops));
    if (!nest.array_written(static_cast<int>(ai))) continue;  // read-only: exempt
    int dims = nest.arrays[ai].dims;
    std::vector<int> owner(static_cast<size_t>(dims), -1);
    for (const ArrayAccess& acc : nest.accesses) {
      if (acc.array != static_cast<int>(ai)) continue;
      for (int v = 0; v < dims; ++v) {
        const AffineExpr& e = acc.subscripts[static_cast<size_t>(v)];
        if (e.terms.size() > 1)
          throw NotSeparableError("subscript " + std::to_string(v + 1) + " of array " +
                                      nest.arrays[ai].name +
                                      " uses more than one loop variable",
                                  nest.arrays[ai].name, v + 1);
        if (auto var = e.single_var()) {
          if (owner[static_cast<size_t>(v)] == -1) {
            owner[static_cast<size_t>(v)] = *var;
          } else if (owner[static_cast<size_t>(v)] != *var) {
            throw NotSeparableError(
                "subscript " + std::to_string(v + 1) + " of array " +
                    nest.arrays[ai].name + " mixes loop variables across accesses",
                nest.arrays[ai].name, v + 1);
          }
        }
      }
    }
    for (int v = 0; v < dims; ++v) {
      if (owner[static_cast<size_t>(v)] >= 0) {
        info.d_sets[ai][static_cast<size_t>(owner[static_cast<size_t>(v)])].push_back(v);
        in_v[static_cast<size_t>(owner[static_cast<size_t>(v)])] = true;
      }
    }
    info.subscript_owner[ai] = std::move(owner);
  }
  for (int l = 0; l < n_loops; ++l)
    (in_v[static_cast<size_t>(l)] ? info.v_loops : info.w_loops).push_back(l);
  return info;
}

/// Pair set restricted to one loop axis. Kind AllPairs stands for the full
/// R_a x R_a square and is never materialized.
struct AxisFactor {
  bool all_pairs = true;
  std::vector<std::pair<int64_t, int64_t>> pairs;  // sorted; first = write side

  static AxisFactor all() { return AxisFactor{}; }
  static AxisFactor of(std::vector<std::pair<int64_t, int64_t>> p) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return AxisFactor{false, std::move(p)};
  }

  bool empty() const { return !all_pairs && pairs.empty(); }
  bool contains(int64_t x, int64_t y) const {
    if (all_pairs) return true;
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(x, y));
  }

  /// Set intersection; AllPairs is the identity element.
  AxisFactor intersect(const AxisFactor& o) const {
    if (all_pairs) return o;
    if (o.all_pairs) return *this;
    std::vector<std::pair<int64_t, int64_t>> both;
    std::set_intersection(pairs.begin(), pairs.end(), o.pairs.begin(), o.pairs.end(),
                          std::back_inserter(both));
    return AxisFactor{false, std::move(both)};
  }
};

/// Per access pair: the per-subscript solution sets S[v] and the per-loop
/// intersections S1[a] (the R_a x R_a square where no subscript constrains
/// the loop).
///
/// A write access also pairs with itself: through a constant subscript or an
/// unused loop it can store to one address at many iteration points (output
/// dependence). Same-access pairs whose factors are all diagonal relate no
/// two distinct points and are dropped.
struct PairSolutions {
  int array;
  int write_access;  // index into nest.accesses
  int other_access;
  bool same_access = false;
  bool never_aliases = false;  // constant subscripts differ
  std::vector<AxisFactor> per_subscript;  // S[u][v]
  std::vector<AxisFactor> per_loop;       // S1[u][a]
};

/// The factored dependence relation T = union of per-pair products of
/// per-loop pair sets. Terms with an empty factor are dropped whole.
struct DependenceTerm {
  int array;
  int write_access;
  int other_access;
  bool same_access = false;  // one physical access: excludes the X == Y tuple
  std::vector<AxisFactor> factors;  // one per loop
};

struct DependenceRelation {
  std::vector<IterRange> loop_ranges;
  std::vector<bool> loop_in_v;  // static V/W classification
  std::vector<DependenceTerm> terms;

  /// Membership with a globally consistent orientation: X and Y are
  /// dependent iff some term accepts (X,Y) on every axis or (Y,X) on every
  /// axis. Runs on the factored form, no expansion.
  bool contains(std::span<const int64_t> x, std::span<const int64_t> y) const {
    auto oriented = [&](const DependenceTerm& t, std::span<const int64_t> p,
                        std::span<const int64_t> q) {
      for (size_t a = 0; a < t.factors.size(); ++a)
        if (!t.factors[a].contains(p[a], q[a])) return false;
      return true;
    };
    bool same_point = std::equal(x.begin(), x.end(), y.begin(), y.end());
    for (const DependenceTerm& t : terms) {
      if (t.same_access && same_point) continue;  // one access event, no pair
      if (oriented(t, x, y) || oriented(t, y, x)) return true;
    }
    return false;
  }

  /// Factored entry count: sum over terms of the product of factor sizes.
  double factored_size() const {
    double total = 0.0;
    for (const DependenceTerm& t : terms) {
      double prod = 1.0;
      for (size_t a = 0; a < t.factors.size(); ++a) {
        double r = static_cast<double>(loop_ranges[a].size());
        prod *= t.factors[a].all_pairs ? r * r
                                       : static_cast<double>(t.factors[a].pairs.size());
      }
      total += prod;
    }
    return total;
  }
};

namespace detail {

/// S_{u,v} for one subscript of one access pair, on the owner loop's range.
/// Constant-vs-variable pairs pin one side and leave the other free.
inline AxisFactor subscript_solutions(const AffineExpr& w, const AffineExpr& o,
                                      const IterRange& range) {
  auto wv = w.single_var();
  auto ov = o.single_var();
  if (wv && ov) {
    const int64_t wc = w.terms[0].coeff, oc = o.terms[0].coeff;
    Lde lde = build_lde(wc, w.constant, oc, o.constant);
    std::vector<std::pair<int64_t, int64_t>> pairs;
    for (const DepPair& p : solutions_in_range(lde, range))
      pairs.emplace_back(p.source, p.sink);
    return AxisFactor::of(std::move(pairs));
  }
  if (wv && !ov) {
    // w.coeff * x + w.const == o.const
    int64_t num = checked_sub(o.constant, w.constant);
    std::vector<std::pair<int64_t, int64_t>> pairs;
    if (divides(w.terms[0].coeff, num)) {
      int64_t x = num / w.terms[0].coeff;
      if (range.contains(x))
        for (int64_t y = range.lo; y <= range.hi; ++y) pairs.emplace_back(x, y);
    }
    return AxisFactor::of(std::move(pairs));
  }
  if (!wv && ov) {
    int64_t num = checked_sub(w.constant, o.constant);
    std::vector<std::pair<int64_t, int64_t>> pairs;
    if (divides(o.terms[0].coeff, num)) {
      int64_t y = num / o.terms[0].coeff;
      if (range.contains(y))
        for (int64_t x = range.lo; x <= range.hi; ++x) pairs.emplace_back(x, y);
    }
    return AxisFactor::of(std::move(pairs));
  }
  // Both constant and owned by a loop through some other access pair.
  return w.constant == o.constant ? AxisFactor::all() : AxisFactor::of({});
}

}  // namespace detail

/// All (write, read-or-write) access pairs of one array with their solution
/// tables. Pair order follows access order; the write side goes first.
inline std::vector<PairSolutions> pair_solution_table(const LoopNest& nest, int array,
                                                      const SeparabilityInfo& sep) {
  std::vector<PairSolutions> table;
  const int n_loops = static_cast<int>(nest.loops.size());
  std::vector<int> idx;
  for (size_t i = 0; i < nest.accesses.size(); ++i)
    if (nest.accesses[i].array == array) idx.push_back(static_cast<int>(i));

  for (size_t i = 0; i < idx.size(); ++i) {
    for (size_t j = i; j < idx.size(); ++j) {
      const ArrayAccess& a1 = nest.accesses[static_cast<size_t>(idx[i])];
      const ArrayAccess& a2 = nest.accesses[static_cast<size_t>(idx[j])];
      if (!a1.is_write && !a2.is_write) continue;  // reads alone never depend
      if (i == j && !a1.is_write) continue;
      const bool first_writes = a1.is_write;
      const ArrayAccess& w = first_writes ? a1 : a2;
      const ArrayAccess& o = first_writes ? a2 : a1;

      PairSolutions ps;
      ps.array = array;
      ps.same_access = (i == j);
      ps.write_access = first_writes ? idx[i] : idx[j];
      ps.other_access = first_writes ? idx[j] : idx[i];
      const int dims = nest.arrays[static_cast<size_t>(array)].dims;
      ps.per_subscript.reserve(static_cast<size_t>(dims));
      for (int v = 0; v < dims; ++v) {
        int owner = sep.subscript_owner[static_cast<size_t>(array)][static_cast<size_t>(v)];
        const AffineExpr& we = w.subscripts[static_cast<size_t>(v)];
        const AffineExpr& oe = o.subscripts[static_cast<size_t>(v)];
        if (owner < 0) {
          // Constant-only subscript: equal constants never constrain, unequal
          // ones make the pair never alias.
          if (we.constant != oe.constant) ps.never_aliases = true;
          ps.per_subscript.push_back(AxisFactor::all());
        } else {
          ps.per_subscript.push_back(
              detail::subscript_solutions(we, oe, nest.loops[static_cast<size_t>(owner)].range));
        }
      }
      ps.per_loop.reserve(static_cast<size_t>(n_loops));
      for (int a = 0; a < n_loops; ++a) {
        AxisFactor s1 = AxisFactor::all();
        for (int v : sep.d_sets[static_cast<size_t>(array)][static_cast<size_t>(a)])
          s1 = s1.intersect(ps.per_subscript[static_cast<size_t>(v)]);
        ps.per_loop.push_back(std::move(s1));
      }
      if (ps.same_access) {
        // Self pairing matters only where some loop axis is unconstrained;
        // an all-diagonal product relates no two distinct points.
        bool has_free_axis = false;
        for (const AxisFactor& f : ps.per_loop) has_free_axis |= f.all_pairs;
        if (!has_free_axis) continue;
      }
      table.push_back(std::move(ps));
    }
  }
  return table;
}

/// Factored precise dependence of one array over the whole nest.
inline DependenceRelation precise_dependence_nested(const LoopNest& nest, int array) {
  SeparabilityInfo sep = check_separable(nest);
  DependenceRelation rel;
  for (const Loop& l : nest.loops) rel.loop_ranges.push_back(l.range);
  rel.loop_in_v.resize(nest.loops.size(), false);
  for (int v : sep.v_loops) rel.loop_in_v[static_cast<size_t>(v)] = true;

  for (const PairSolutions& ps : pair_solution_table(nest, array, sep)) {
    if (ps.never_aliases) continue;
    bool dead = false;
    for (const AxisFactor& f : ps.per_loop) dead = dead || f.empty();
    if (dead) continue;  // empty factor annihilates the whole product
    rel.terms.push_back(
        DependenceTerm{array, ps.write_access, ps.other_access, ps.same_access, ps.per_loop});
  }
  return rel;
}

/// Union of the per-array relations, kept factored per array.
inline DependenceRelation multi_array_dependence(const LoopNest& nest) {
  SeparabilityInfo sep = check_separable(nest);
  DependenceRelation rel;
  for (const Loop& l : nest.loops) rel.loop_ranges.push_back(l.range);
  rel.loop_in_v.resize(nest.loops.size(), false);
  for (int v : sep.v_loops) rel.loop_in_v[static_cast<size_t>(v)] = true;

  for (size_t ai = 0; ai < nest.arrays.size(); ++ai) {
    if (!nest.array_written(static_cast<int>(ai))) continue;
    DependenceRelation one = precise_dependence_nested(nest, static_cast<int>(ai));
    for (auto& t : one.terms) rel.terms.push_back(std::move(t));
  }
  return rel;
}

/// Collapses the factored relation onto one loop axis and partitions that
/// axis. Every stored term already has all factors nonempty, so each term's
/// axis pairs are dependence edges.
inline IterPartition project_loop_partition(const DependenceRelation& rel, int loop) {
  if (loop < 0 || static_cast<size_t>(loop) >= rel.loop_ranges.size())
    throw Error("nested/bad_loop_index", "loop index out of range");
  if (!rel.loop_in_v[static_cast<size_t>(loop)])
    throw LoopUnconstrainedError("loop variable never reaches a subscript; nothing to partition");

  const IterRange& range = rel.loop_ranges[static_cast<size_t>(loop)];
  std::vector<int64_t> self_deps;
  for (const DependenceTerm& t : rel.terms) {
    const AxisFactor& f = t.factors[static_cast<size_t>(loop)];
    if (f.all_pairs) {
      if (range.size() == 1 && !t.same_access) self_deps.push_back(range.lo);
      continue;
    }
    for (const auto& [x, y] : f.pairs)
      if (x == y) self_deps.push_back(x);
  }
  std::sort(self_deps.begin(), self_deps.end());
  self_deps.erase(std::unique(self_deps.begin(), self_deps.end()), self_deps.end());

  return detail::components_from_unions(
      range,
      [&](detail::UnionFind& uf) {
        for (const DependenceTerm& t : rel.terms) {
          const AxisFactor& f = t.factors[static_cast<size_t>(loop)];
          if (f.all_pairs) {
            // The unconstrained axis of a live term: a clique on the range.
            for (int64_t v = range.lo; v < range.hi; ++v)
              uf.unite(static_cast<size_t>(v - range.lo),
                       static_cast<size_t>(v + 1 - range.lo));
            continue;
          }
          for (const auto& [x, y] : f.pairs)
            if (x != y)
              uf.unite(static_cast<size_t>(x - range.lo), static_cast<size_t>(y - range.lo));
        }
      },
      self_deps);
}

}  // namespace ldep
