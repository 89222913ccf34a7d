#pragma once

#include <cstdint>
#include <tuple>

#include "ldep/errors.hpp"

namespace ldep {

// Checked 64-bit integer arithmetic. Overflow is a caller bug, not a value.

inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("add overflow");
  return r;
}

inline int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("sub overflow");
  return r;
}

inline int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("mul overflow");
  return r;
}

inline int64_t checked_neg(int64_t a) { return checked_sub(0, a); }

inline int64_t checked_abs(int64_t a) { return a < 0 ? checked_neg(a) : a; }

/// Floor division, exact for negative operands: floor(p / q).
inline int64_t floor_div(int64_t p, int64_t q) {
  int64_t d = p / q;
  int64_t r = p % q;
  if (r != 0 && ((r < 0) != (q < 0))) --d;
  return d;
}

/// Ceiling division: ceil(p / q).
inline int64_t ceil_div(int64_t p, int64_t q) {
  int64_t d = p / q;
  int64_t r = p % q;
  if (r != 0 && ((r < 0) == (q < 0))) ++d;
  return d;
}

inline bool divides(int64_t q, int64_t p) { return q != 0 && p % q == 0; }

/// Nearest integer to p/q (q > 0); halves round toward +infinity.
inline int64_t round_div(int64_t p, int64_t q) {
  return floor_div(checked_add(checked_mul(2, p), q), checked_mul(2, q));
}

inline int64_t gcd(int64_t a, int64_t b) {
  a = checked_abs(a);
  b = checked_abs(b);
  while (b != 0) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct BezoutTriple {
  int64_t g;  // gcd(a, b) > 0
  int64_t u;  // a*u + b*v == g
  int64_t v;
};

/// Extended Euclid for arbitrary nonzero signs.
inline BezoutTriple extended_gcd(int64_t a, int64_t b) {
  int64_t old_r = checked_abs(a), r = checked_abs(b);
  int64_t old_u = 1, u = 0;
  int64_t old_v = 0, v = 1;
  while (r != 0) {
    int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
    std::tie(old_u, u) = std::make_tuple(u, old_u - q * u);
    std::tie(old_v, v) = std::make_tuple(v, old_v - q * v);
  }
  if (a < 0) old_u = -old_u;
  if (b < 0) old_v = -old_v;
  return {old_r, old_u, old_v};
}

}  // namespace ldep
