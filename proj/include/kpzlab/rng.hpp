#pragma once

#include <bit>
#include <cstdint>

namespace kpz {

// Counter-based random streams. Every draw in the project is a pure function
// of (seed, domain tag, counters), so replicas and coupled fields can be
// evaluated in any order, on any number of threads, with identical results.

// SplitMix64 finalizer (Stafford mix13).
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Absorb two words into a seeded state, one mixing round per word.
inline uint64_t hash2(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t h = mix64(seed ^ (a + 0x9e3779b97f4a7c15ull));
  return mix64(h ^ (b + 0xd1b54a32d192ed03ull));
}

// Seed for (replica, role) pairs, injective on any desk-scale index range.
inline uint64_t derive_seed(uint64_t master, uint64_t replica_index, uint32_t domain_tag) {
  uint64_t h = mix64(master ^ 0x8e2f9d4b1c6a35e7ull);
  h = mix64(h ^ (replica_index + 0x9e3779b97f4a7c15ull));
  h = mix64(h ^ (uint64_t(domain_tag) + 0xd1b54a32d192ed03ull));
  return h;
}

// U uniform on (0,1], exactly ((h>>11)+1) * 2^-53.
inline double unit_from_hash(uint64_t h) {
  return double((h >> 11) + 1) * 0x1.0p-53;
}

// -ln(U) for U = unit_from_hash(h).
//
// Branch-free so the weight-fill loops auto-vectorize; the DP kernels spend
// most of their time here. Max relative error vs libm log is ~4e-14 over the
// full draw range, and the same code path serves single-cell lookups and row
// sweeps, so a given (seed,i,j) always yields the same bits.
inline double neg_log_unit(uint64_t h) {
  double u = unit_from_hash(h);
  uint64_t bits = std::bit_cast<uint64_t>(u);
  double e = double(int32_t((bits >> 52) & 0x7FF) - 1023);
  double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
  double big = (m > 1.4142135623730951) ? 1.0 : 0.0;
  m -= big * 0.5 * m;
  e += big;
  double z = (m - 1.0) / (m + 1.0);
  double z2 = z * z;
  double p = 2.0 / 15.0;
  p = p * z2 + 2.0 / 13.0;
  p = p * z2 + 2.0 / 11.0;
  p = p * z2 + 2.0 / 9.0;
  p = p * z2 + 2.0 / 7.0;
  p = p * z2 + 2.0 / 5.0;
  p = p * z2 + 2.0 / 3.0;
  p = p * z2 + 2.0;
  return -(e * 0.6931471805599453094172321215 + p * z);
}

// Exp(rate) by inversion.
inline double exp_from_hash(uint64_t h, double rate) {
  return neg_log_unit(h) / rate;
}

}  // namespace kpz
