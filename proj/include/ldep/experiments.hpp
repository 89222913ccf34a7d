#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ldep/lde.hpp"
#include "ldep/partition.hpp"

namespace ldep {

// --- deterministic randomness -------------------------------------------

namespace detail {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  uint64_t s = detail::mix64(master);
  s = detail::mix64(s ^ detail::mix64(a + 0x100000001b3ULL));
  s = detail::mix64(s ^ detail::mix64(b + 0xcbf29ce484222325ULL));
  s = detail::mix64(s ^ detail::mix64(c + 0x27d4eb2f165667c5ULL));
  return s;
}

/// mt19937_64 with a portable bounded mapping, so identical seeds give
/// identical draws on every platform.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  /// Uniform integer in [lo, hi], inclusive.
  int64_t uniform(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(eng_());  // full 64-bit range
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t draw;
    do {
      draw = eng_();
    } while (draw >= limit);
    return lo + static_cast<int64_t>(draw % span);
  }

  int64_t uniform_nonzero(int64_t bound) {
    int64_t v;
    do {
      v = uniform(-bound, bound);
    } while (v == 0);
    return v;
  }

private:
  std::mt19937_64 eng_;
};

// --- random LDE generation ------------------------------------------------

/// n random feasible variable-distance LDEs: a, b uniform nonzero in
/// [-B, B], c uniform in [-B^2, B^2]; draws whose normalized shape is the
/// constant-distance x - y = c or whose gcd does not divide c are rejected.
inline std::vector<Lde> random_ldes(int n, int64_t coeff_bound, Rng& rng) {
  std::vector<Lde> out;
  out.reserve(static_cast<size_t>(n));
  int64_t c_bound = checked_mul(coeff_bound, coeff_bound);
  while (static_cast<int>(out.size()) < n) {
    int64_t a = rng.uniform_nonzero(coeff_bound);
    int64_t b = rng.uniform_nonzero(coeff_bound);
    int64_t c = rng.uniform(-c_bound, c_bound);
    Lde lde(a, b, c);
    if (lde.a == 1 && lde.b == -1) continue;  // constant-distance shape
    if (!solve_particular(lde)) continue;     // no integer solutions at all
    out.push_back(lde);
  }
  return out;
}

// --- per-trial counting ----------------------------------------------------

/// Component census of one partition trial. `parallels` counts every
/// component; `dep_components` those carrying at least one dependence
/// (non-singletons plus self-dependent singletons); `independents` the
/// dependence-free singletons. parallels == dep_components + independents.
struct TrialCounts {
  int64_t parallels = 0;
  int64_t dep_components = 0;
  int64_t independents = 0;
  int64_t self_singletons = 0;
  int64_t non_singletons = 0;
};

/// Counting-only census, no component materialization.
inline TrialCounts count_components(const DepGraph& graph) {
  size_t n = static_cast<size_t>(graph.range.size());
  detail::UnionFind uf(n);
  for (const auto& [u, v] : graph.edges)
    uf.unite(static_cast<size_t>(u - graph.range.lo), static_cast<size_t>(v - graph.range.lo));
  std::vector<uint32_t> comp_size(n, 0);
  for (size_t i = 0; i < n; ++i) ++comp_size[uf.find(i)];
  std::vector<bool> self_root(n, false);
  for (int64_t v : graph.self_deps)
    self_root[uf.find(static_cast<size_t>(v - graph.range.lo))] = true;
  TrialCounts t;
  for (size_t i = 0; i < n; ++i) {
    if (comp_size[i] == 0) continue;
    ++t.parallels;
    if (comp_size[i] > 1) {
      ++t.non_singletons;
      ++t.dep_components;
    } else if (self_root[i]) {
      ++t.self_singletons;
      ++t.dep_components;
    } else {
      ++t.independents;
    }
  }
  return t;
}

inline TrialCounts count_components(const std::vector<Lde>& ldes, const IterRange& range) {
  return count_components(build_graph(ldes, range));
}

// --- alpha-split heuristic ---------------------------------------------

/// Range cut for the split heuristic. The cut sits at the median of the
/// LDEs' fixed points c/(a+b), the value both endpoints of every solution
/// pair of that LDE straddle when a and b share a sign.
struct AlphaSplit {
  std::vector<std::optional<double>> fixed_points;  // per LDE; a+b == 0 -> none
  int64_t cut;                                      // alpha_h
  IterRange left;                                   // [lo, cut]
  IterRange right;                                  // [cut+1, hi]
  bool midpoint_fallback = false;  // every LDE was a pure shift
};

inline AlphaSplit alpha_split(const std::vector<Lde>& ldes, const IterRange& range) {
  if (range.size() < 2)
    throw Error("experiments/range_too_small", "cannot split a range of size < 2");
  struct Fp {
    int64_t num;
    int64_t den;  // den > 0
  };
  std::vector<Fp> defined;
  AlphaSplit out{{}, 0, range, range, false};
  out.fixed_points.reserve(ldes.size());
  for (const Lde& lde : ldes) {
    int64_t den = checked_add(lde.a, lde.b);
    if (den == 0) {
      out.fixed_points.push_back(std::nullopt);
      continue;
    }
    int64_t num = lde.c;
    if (den < 0) {
      den = checked_neg(den);
      num = checked_neg(num);
    }
    defined.push_back({num, den});
    out.fixed_points.push_back(static_cast<double>(num) / static_cast<double>(den));
  }

  int64_t cut;
  if (defined.empty()) {
    cut = range.lo + (range.size() - 1) / 2;
    out.midpoint_fallback = true;
  } else {
    auto less = [](const Fp& x, const Fp& y) {
      return checked_mul(x.num, y.den) < checked_mul(y.num, x.den);
    };
    std::sort(defined.begin(), defined.end(), less);
    size_t m = defined.size();
    if (m % 2 == 1) {
      cut = round_div(defined[m / 2].num, defined[m / 2].den);
    } else {
      const Fp& a = defined[m / 2 - 1];
      const Fp& b = defined[m / 2];
      // (a + b) / 2 as an exact rational, then round
      int64_t num = checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den));
      int64_t den = checked_mul(2, checked_mul(a.den, b.den));
      cut = round_div(num, den);
    }
  }
  cut = std::clamp(cut, range.lo, range.hi - 1);
  out.cut = cut;
  out.left = IterRange(range.lo, cut);
  out.right = IterRange(cut + 1, range.hi);
  return out;
}

// --- cells and aggregation -------------------------------------------------

struct Aggregate {
  int64_t min = 0;
  int64_t max = 0;
  double avg = 0.0;

  void add(int64_t v, bool first) {
    if (first) {
      min = max = v;
    } else {
      min = std::min(min, v);
      max = std::max(max, v);
    }
    avg += static_cast<double>(v);
  }
  void finish(int trials) { avg /= static_cast<double>(trials); }
};

struct CellStats {
  int64_t range_size = 0;
  int n_ldes = 0;
  int trials = 0;
  Aggregate parallels;
  Aggregate dep_components;
  Aggregate independents;
  Aggregate self_singletons;
  bool has_split = false;
  Aggregate split_parallels;
  double improvement_ratio_avg = 0.0;  // mean of per-trial split/unsplit
};

inline std::vector<Lde> trial_ldes(int n_ldes, int64_t coeff_bound, uint64_t cell_seed,
                                   int trial) {
  Rng rng(derive_seed(cell_seed, static_cast<uint64_t>(trial)));
  return random_ldes(n_ldes, coeff_bound, rng);
}

/// One experiment cell: `trials` independent draws of `n_ldes` LDEs over
/// `range`, reporting min/avg/max of the component census.
inline CellStats run_cell(const IterRange& range, int n_ldes, int trials, int64_t coeff_bound,
                          uint64_t cell_seed) {
  CellStats cell;
  cell.range_size = range.size();
  cell.n_ldes = n_ldes;
  cell.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::vector<Lde> ldes = trial_ldes(n_ldes, coeff_bound, cell_seed, t);
    TrialCounts counts = count_components(ldes, range);
    bool first = (t == 0);
    cell.parallels.add(counts.parallels, first);
    cell.dep_components.add(counts.dep_components, first);
    cell.independents.add(counts.independents, first);
    cell.self_singletons.add(counts.self_singletons, first);
  }
  cell.parallels.finish(trials);
  cell.dep_components.finish(trials);
  cell.independents.finish(trials);
  cell.self_singletons.finish(trials);
  return cell;
}

/// As run_cell, but each trial additionally cuts the range at the alpha
/// median and partitions both halves independently. Identical seeds draw
/// identical LDEs, so the unsplit columns match run_cell exactly.
inline CellStats run_split_cell(const IterRange& range, int n_ldes, int trials,
                                int64_t coeff_bound, uint64_t cell_seed) {
  CellStats cell;
  cell.range_size = range.size();
  cell.n_ldes = n_ldes;
  cell.trials = trials;
  cell.has_split = true;
  for (int t = 0; t < trials; ++t) {
    std::vector<Lde> ldes = trial_ldes(n_ldes, coeff_bound, cell_seed, t);
    TrialCounts counts = count_components(ldes, range);
    AlphaSplit split = alpha_split(ldes, range);
    TrialCounts left = count_components(ldes, split.left);
    TrialCounts right = count_components(ldes, split.right);
    int64_t split_parallels = left.parallels + right.parallels;
    bool first = (t == 0);
    cell.parallels.add(counts.parallels, first);
    cell.dep_components.add(counts.dep_components, first);
    cell.independents.add(counts.independents, first);
    cell.self_singletons.add(counts.self_singletons, first);
    cell.split_parallels.add(split_parallels, first);
    cell.improvement_ratio_avg +=
        static_cast<double>(split_parallels) / static_cast<double>(counts.parallels);
  }
  cell.parallels.finish(trials);
  cell.dep_components.finish(trials);
  cell.independents.finish(trials);
  cell.self_singletons.finish(trials);
  cell.split_parallels.finish(trials);
  cell.improvement_ratio_avg /= static_cast<double>(trials);
  return cell;
}

// --- whole experiment and report -------------------------------------------

struct ExperimentConfig {
  std::vector<int> range_exponents = {2, 3, 4, 5, 6, 7, 8, 9, 10};  // [-2^k, 2^k]
  std::vector<int> lde_counts = {1, 2, 5, 30, 90};
  int trials = 100;
  int64_t coeff_bound = 100;
  uint64_t seed = 1;
  bool split = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  // cells[i][j]: lde_counts[i] x range_exponents[j]
  std::vector<std::vector<CellStats>> cells;
};

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report{config, {}};
  for (int n : config.lde_counts) {
    std::vector<CellStats> row;
    for (int k : config.range_exponents) {
      int64_t bound = int64_t{1} << k;
      IterRange range(-bound, bound);
      uint64_t cell_seed = derive_seed(config.seed, static_cast<uint64_t>(k),
                                       static_cast<uint64_t>(n));
      row.push_back(config.split
                        ? run_split_cell(range, n, config.trials, config.coeff_bound, cell_seed)
                        : run_cell(range, n, config.trials, config.coeff_bound, cell_seed));
    }
    report.cells.push_back(std::move(row));
  }
  return report;
}

namespace detail {

inline std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Writes results.csv, results.md and gnuplot series under `out_dir`.
/// Output is byte-identical for identical configs.
inline void emit_report(const ExperimentReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::create_directories(out_dir + "/series");

  const ExperimentConfig& cfg = report.config;
  {
    std::ofstream csv(out_dir + "/results.csv");
    csv << "range,ldes,parallels_min,parallels_avg,parallels_max,"
           "ccs_min,ccs_avg,ccs_max,independents_min,independents_avg,independents_max,"
           "self_dep_singletons_avg";
    if (cfg.split) csv << ",split_parallels_min,split_parallels_avg,split_parallels_max,ratio_avg";
    csv << "\n";
    for (size_t i = 0; i < cfg.lde_counts.size(); ++i) {
      for (size_t j = 0; j < cfg.range_exponents.size(); ++j) {
        const CellStats& c = report.cells[i][j];
        csv << c.range_size << ',' << c.n_ldes << ',' << c.parallels.min << ','
            << detail::fmt2(c.parallels.avg) << ',' << c.parallels.max << ','
            << c.dep_components.min << ',' << detail::fmt2(c.dep_components.avg) << ','
            << c.dep_components.max << ',' << c.independents.min << ','
            << detail::fmt2(c.independents.avg) << ',' << c.independents.max << ','
            << detail::fmt2(c.self_singletons.avg);
        if (cfg.split) {
          csv << ',' << c.split_parallels.min << ',' << detail::fmt2(c.split_parallels.avg)
              << ',' << c.split_parallels.max << ',' << detail::fmt2(c.improvement_ratio_avg);
        }
        csv << "\n";
      }
    }
  }
  {
    std::ofstream md(out_dir + "/results.md");
    md << "# Randomized LDE experiments\n\n";
    md << "Coefficient bound " << cfg.coeff_bound << ", " << cfg.trials
       << " trials per cell, master seed " << cfg.seed << ".\n";
    for (size_t i = 0; i < cfg.lde_counts.size(); ++i) {
      md << "\n## " << cfg.lde_counts[i] << " LDE" << (cfg.lde_counts[i] == 1 ? "" : "s")
         << "\n\n";
      md << "| Range | Parallels | CCs | Independents |";
      if (cfg.split) md << " split-Parallels | ratio |";
      md << "\n|---|---|---|---|";
      if (cfg.split) md << "---|---|";
      md << "\n";
      for (size_t j = 0; j < cfg.range_exponents.size(); ++j) {
        const CellStats& c = report.cells[i][j];
        md << "| " << c.range_size << " | " << detail::fmt2(c.parallels.avg) << " | "
           << detail::fmt2(c.dep_components.avg) << " | " << detail::fmt2(c.independents.avg)
           << " |";
        if (cfg.split)
          md << ' ' << detail::fmt2(c.split_parallels.avg) << " | "
             << detail::fmt2(c.improvement_ratio_avg) << " |";
        md << "\n";
      }
    }
    if (cfg.lde_counts.size() > 1) {
      md << "\n## Average parallel components by LDE count\n\n| Range |";
      for (int n : cfg.lde_counts) md << ' ' << n << " LDE" << (n == 1 ? "" : "s") << " |";
      md << "\n|---|";
      for (size_t i = 0; i < cfg.lde_counts.size(); ++i) md << "---|";
      md << "\n";
      for (size_t j = 0; j < cfg.range_exponents.size(); ++j) {
        md << "| " << report.cells[0][j].range_size << " |";
        for (size_t i = 0; i < cfg.lde_counts.size(); ++i)
          md << ' ' << detail::fmt2(report.cells[i][j].parallels.avg) << " |";
        md << "\n";
      }
    }
  }
  for (size_t i = 0; i < cfg.lde_counts.size(); ++i) {
    std::ofstream dat(out_dir + "/series/ldes_" + std::to_string(cfg.lde_counts[i]) + ".dat");
    dat << "# range min avg max" << (cfg.split ? " split_avg" : "") << "\n";
    for (size_t j = 0; j < cfg.range_exponents.size(); ++j) {
      const CellStats& c = report.cells[i][j];
      dat << c.range_size << ' ' << c.parallels.min << ' ' << detail::fmt2(c.parallels.avg)
          << ' ' << c.parallels.max;
      if (cfg.split) dat << ' ' << detail::fmt2(c.split_parallels.avg);
      dat << "\n";
    }
  }
}

}  // namespace ldep
