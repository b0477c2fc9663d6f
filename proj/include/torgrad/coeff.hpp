#pragma once

#include <cstdint>
#include <stdexcept>

namespace torgrad {

struct OverflowError : std::overflow_error {
  OverflowError() : std::overflow_error("int64 coefficient overflow") {}
};

// p == 0 means integer coefficients, otherwise residues mod p.
inline int64_t cadd(int64_t a, int64_t b, int64_t p = 0) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError();
  if (p) r %= p;
  return r;
}

inline int64_t cmul(int64_t a, int64_t b, int64_t p = 0) {
  if (p) return static_cast<int64_t>((static_cast<__int128>(a) * b) % p);
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError();
  return r;
}

inline int64_t cnorm(int64_t a, int64_t p = 0) {
  a = p ? ((a % p) + p) % p : a;
  return a;
}

// Trivial norm over a finite field.
inline int64_t cabs(int64_t a, int64_t p = 0) {
  if (p) return (a % p) != 0 ? 1 : 0;
  if (a == INT64_MIN) throw OverflowError();
  return a < 0 ? -a : a;
}

}  // namespace torgrad
