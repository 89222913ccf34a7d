#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldep/checked_math.hpp"
#include "ldep/errors.hpp"

namespace ldep {

/// Inclusive integer interval [lo, hi].
struct IterRange {
  int64_t lo;
  int64_t hi;

  IterRange(int64_t lo_, int64_t hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw Error("lde_core/empty_range", "range lo > hi");
  }

  int64_t size() const { return checked_add(checked_sub(hi, lo), 1); }
  bool contains(int64_t v) const { return lo <= v && v <= hi; }

  bool operator==(const IterRange&) const = default;
};

/// Normalized two-variable linear Diophantine equation a*x + b*y = c,
/// a > 0, b != 0. Models aliasing between two affine array accesses:
/// x is the iteration performing the first (write-side) access, y the
/// iteration performing the second.
struct Lde {
  int64_t a;
  int64_t b;
  int64_t c;
  bool sign_flipped = false;  // normalization negated all three terms

  Lde(int64_t a_, int64_t b_, int64_t c_) : a(a_), b(b_), c(c_) {
    if (a == 0 || b == 0)
      throw ZeroCoefficientError("LDE coefficient is zero; not a two-variable dependence");
    if (a < 0) {
      a = checked_neg(a);
      b = checked_neg(b);
      c = checked_neg(c);
      sign_flipped = true;
    }
  }

  bool satisfied_by(int64_t x, int64_t y) const {
    return checked_add(checked_mul(a, x), checked_mul(b, y)) == c;
  }

  std::string text() const {
    auto term = [](int64_t k, char v) {
      std::string s = k < 0 ? "- " : "+ ";
      if (k < 0) k = -k;
      if (k != 1) s += std::to_string(k);
      s += v;
      return s;
    };
    std::string s = (a != 1 ? std::to_string(a) : "") + "x " + term(b, 'y') +
                    " = " + std::to_string(c);
    return s;
  }

  bool operator==(const Lde& o) const { return a == o.a && b == o.b && c == o.c; }
};

/// Full integer solution set of an Lde: (x0 + dx*t, y0 + dy*t) for t in Z,
/// with dx = b/g, dy = -a/g, g = gcd(a, b).
struct ParametricSolution {
  int64_t x0;
  int64_t y0;
  int64_t dx;
  int64_t dy;

  int64_t x_at(int64_t t) const { return checked_add(x0, checked_mul(dx, t)); }
  int64_t y_at(int64_t t) const { return checked_add(y0, checked_mul(dy, t)); }
};

/// One dependent iteration pair: the source executes the write-side access,
/// the sink the other one. source == sink marks a self dependence.
struct DepPair {
  int64_t source;
  int64_t sink;

  bool self_dependence() const { return source == sink; }
  bool operator==(const DepPair&) const = default;
};

/// Builds the LDE for a write access g[wc*i + wk] against a read (or second
/// write) access g[rc*i + rk]: wc*x + wk = rc*y + rk.
inline Lde build_lde(int64_t write_coeff, int64_t write_const, int64_t read_coeff,
                     int64_t read_const) {
  if (write_coeff == 0 || read_coeff == 0)
    throw ZeroCoefficientError("access pair has a constant subscript; not a two-variable dependence");
  return Lde(write_coeff, checked_neg(read_coeff),
             checked_sub(read_const, write_const));
}

/// Particular + parametric solution via extended Euclid, or nullopt when
/// gcd(a, b) does not divide c (dependence-free pair).
inline std::optional<ParametricSolution> solve_particular(const Lde& lde) {
  auto [g, u, v] = extended_gcd(lde.a, lde.b);
  if (!divides(g, lde.c)) return std::nullopt;
  int64_t scale = lde.c / g;
  int64_t x0 = checked_mul(u, scale);
  int64_t y0 = checked_mul(v, scale);
  int64_t dx = lde.b / g;
  int64_t dy = -(lde.a / g);
  // Shift the particular solution toward t = 0 to keep magnitudes small.
  int64_t k = x0 / dx;
  x0 = checked_sub(x0, checked_mul(k, dx));
  y0 = checked_sub(y0, checked_mul(k, dy));
  return ParametricSolution{x0, y0, dx, dy};
}

namespace detail {

/// t-interval [t_min, t_max] with lo <= v0 + dv*t <= hi; empty -> max < min.
inline std::pair<int64_t, int64_t> t_interval(int64_t v0, int64_t dv, const IterRange& range) {
  int64_t lo_off = checked_sub(range.lo, v0);
  int64_t hi_off = checked_sub(range.hi, v0);
  if (dv > 0) return {ceil_div(lo_off, dv), floor_div(hi_off, dv)};
  return {ceil_div(hi_off, dv), floor_div(lo_off, dv)};
}

}  // namespace detail

/// All solutions with both endpoints in range, sorted by source. Computed
/// from the parametric t-interval, never by scanning the range square.
inline std::vector<DepPair> solutions_in_range(const Lde& lde, const IterRange& range) {
  auto ps = solve_particular(lde);
  if (!ps) return {};
  auto [tx_min, tx_max] = detail::t_interval(ps->x0, ps->dx, range);
  auto [ty_min, ty_max] = detail::t_interval(ps->y0, ps->dy, range);
  int64_t t_min = std::max(tx_min, ty_min);
  int64_t t_max = std::min(tx_max, ty_max);
  std::vector<DepPair> out;
  if (t_min > t_max) return out;
  out.reserve(static_cast<size_t>(t_max - t_min + 1));
  // dx > 0 makes x(t) increasing; emit ascending in source either way.
  if (ps->dx > 0) {
    for (int64_t t = t_min; t <= t_max; ++t) out.push_back({ps->x_at(t), ps->y_at(t)});
  } else {
    for (int64_t t = t_max; t >= t_min; --t) out.push_back({ps->x_at(t), ps->y_at(t)});
  }
  return out;
}

/// Sink of a given source: y = (c - a*x)/b if integral and in range.
inline std::optional<int64_t> sink_of(const Lde& lde, int64_t x, const IterRange& range) {
  int64_t num = checked_sub(lde.c, checked_mul(lde.a, x));
  if (!divides(lde.b, num)) return std::nullopt;
  int64_t y = num / lde.b;
  if (!range.contains(y)) return std::nullopt;
  return y;
}

/// Source of a given sink: x = (c - b*y)/a if integral and in range.
inline std::optional<int64_t> source_of(const Lde& lde, int64_t y, const IterRange& range) {
  int64_t num = checked_sub(lde.c, checked_mul(lde.b, y));
  if (!divides(lde.a, num)) return std::nullopt;
  int64_t x = num / lde.a;
  if (!range.contains(x)) return std::nullopt;
  return x;
}

}  // namespace ldep
