#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kpzlab/rng.hpp"

namespace kpz {

struct LatticePoint {
  int64_t i = 0;
  int64_t j = 0;
  friend bool operator==(LatticePoint a, LatticePoint b) { return a.i == b.i && a.j == b.j; }
};

// Partial order: an up-right path from a to b exists iff a <= b coordinatewise.
inline bool lattice_leq(LatticePoint a, LatticePoint b) { return a.i <= b.i && a.j <= b.j; }

enum class BoundaryMode { ZeroBoundary, Stationary };

class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Per-field cell cap (full tables and field rectangles), configurable.
int64_t max_table_cells();
void set_max_table_cells(int64_t cells);

// Rectangle of waiting times addressed by absolute lattice coordinates.
//
// The field covers [origin.i, origin.i+width] x [origin.j, origin.j+height];
// the origin row/column is the boundary, the remaining width x height cells
// are the bulk. Values are generated on demand from counter-based streams:
//   bulk     (seed, BULK, i, j)      Exp(1), keyed by absolute (i,j)
//   row axis (seed, ROW_AXIS, i-oi)  Exp(1-rho)   (Stationary only)
//   col axis (seed, COL_AXIS, j-oj)  Exp(rho)     (Stationary only)
// Bulk values therefore agree across boundary modes and across overlapping
// rectangles built from the same seed, which is what the stationary
// comparison coupling and the nested slow-decorrelation runs rely on.
class WeightField {
 public:
  WeightField(uint64_t seed, LatticePoint origin, int64_t width, int64_t height,
              BoundaryMode mode, double rho = 0.0);

  double operator()(int64_t i, int64_t j) const {
    if (mode_ == BoundaryMode::ZeroBoundary) {
      if (i <= origin_.i || j <= origin_.j) return 0.0;
      return bulk(i, j);
    }
    bool on_col = (i == origin_.i);
    bool on_row = (j == origin_.j);
    if (on_col && on_row) return 0.0;
    if (on_row) return exp_from_hash(hash2(row_stream_, uint64_t(i - origin_.i), 0), 1.0 - rho_);
    if (on_col) return exp_from_hash(hash2(col_stream_, uint64_t(j - origin_.j), 0), rho_);
    return bulk(i, j);
  }

  double bulk(int64_t i, int64_t j) const {
    return neg_log_unit(hash2(bulk_stream_, uint64_t(i), uint64_t(j)));
  }

  // Bulk-only row fill for the DP sweeps, out[k] = w(i_lo+k, j).
  void fill_bulk_row(int64_t i_lo, int64_t i_hi, int64_t j, double* out) const {
    for (int64_t i = i_lo; i <= i_hi; ++i)
      out[i - i_lo] = neg_log_unit(hash2(bulk_stream_, uint64_t(i), uint64_t(j)));
  }

  uint64_t seed() const { return seed_; }
  LatticePoint origin() const { return origin_; }
  int64_t width() const { return width_; }
  int64_t height() const { return height_; }
  BoundaryMode mode() const { return mode_; }
  double rho() const { return rho_; }
  bool contains(int64_t i, int64_t j) const {
    return i >= origin_.i && i <= origin_.i + width_ && j >= origin_.j && j <= origin_.j + height_;
  }

 private:
  uint64_t seed_;
  LatticePoint origin_;
  int64_t width_, height_;
  BoundaryMode mode_;
  double rho_;
  uint64_t bulk_stream_, row_stream_, col_stream_;
};

// Explicit weight table for deterministic tests. Same access interface as
// WeightField; cells outside the stored bulk follow the boundary mode.
class FixedWeightField {
 public:
  FixedWeightField(LatticePoint origin, int64_t width, int64_t height,
                   std::vector<double> bulk_row_major, BoundaryMode mode = BoundaryMode::ZeroBoundary,
                   std::vector<double> row_axis = {}, std::vector<double> col_axis = {});

  double operator()(int64_t i, int64_t j) const;

  LatticePoint origin() const { return origin_; }
  int64_t width() const { return width_; }
  int64_t height() const { return height_; }
  BoundaryMode mode() const { return mode_; }
  bool contains(int64_t i, int64_t j) const {
    return i >= origin_.i && i <= origin_.i + width_ && j >= origin_.j && j <= origin_.j + height_;
  }

 private:
  LatticePoint origin_;
  int64_t width_, height_;
  BoundaryMode mode_;
  std::vector<double> bulk_;      // width*height, row-major from (origin.i+1, origin.j+1)
  std::vector<double> row_axis_;  // width entries for (origin.i+k, origin.j), k=1..width
  std::vector<double> col_axis_;  // height entries for (origin.i, origin.j+k)
};

}  // namespace kpz
