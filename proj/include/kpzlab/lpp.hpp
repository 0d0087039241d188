#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "kpzlab/lattice.hpp"

namespace kpz {

enum class Storage { FullTable, RollingRow };

// Last passage times L(i,j) over a field rectangle, including the axes.
//
// FullTable stores the whole (width+1) x (height+1) grid and supports
// backtracking; RollingRow retains only the final row (enough for endpoint
// values and top-row increments) and records that backtracking is
// unavailable.
class PassageField {
 public:
  Storage storage() const { return storage_; }
  LatticePoint origin() const { return origin_; }
  int64_t width() const { return width_; }
  int64_t height() const { return height_; }
  BoundaryMode mode() const { return mode_; }
  double rho() const { return rho_; }

  double at(int64_t i, int64_t j) const;
  double at(LatticePoint p) const { return at(p.i, p.j); }
  bool can_backtrack() const { return storage_ == Storage::FullTable; }

  // Values L(origin.i .. origin.i+width, j) for a retained row.
  std::span<const double> row(int64_t j) const;

 private:
  friend struct PassageBuilder;
  Storage storage_ = Storage::RollingRow;
  LatticePoint origin_{};
  int64_t width_ = 0, height_ = 0;
  BoundaryMode mode_ = BoundaryMode::ZeroBoundary;
  double rho_ = 0.0;
  std::vector<double> data_;  // full table row-major, or just the final row
};

struct MonotonePath {
  std::vector<LatticePoint> points;
};

struct ExitPoint {
  int64_t z = 0;
};

// Down-right set of start points {(column_at(k), k) : k_lo <= k <= k_hi}.
class StartSet {
 public:
  // Flat density rho: column_at(k) = k - floor(k/rho), the LPP image of the
  // TASEP initial condition x_k(0) = -floor(k/rho).
  static StartSet flat(double rho, int64_t k_lo, int64_t k_hi);
  // Flat plus per-particle offsets u_k (k = k_lo + index).
  static StartSet offsets(double rho, int64_t k_lo, std::span<const int64_t> u);
  // Particle labels of a Bernoulli(rho) configuration on a site window,
  // optionally conditioned on eta_0 = 0, eta_1 = 1.
  static StartSet bernoulli(double rho, int64_t site_lo, int64_t site_hi, uint64_t seed,
                            bool condition_origin);
  static StartSet single(LatticePoint p);
  // Raw columns, validated down-right.
  static StartSet from_columns(int64_t k_lo, std::vector<int64_t> cols);

  int64_t k_lo() const { return k_lo_; }
  int64_t k_hi() const { return k_lo_ + int64_t(cols_.size()) - 1; }
  int64_t column_at(int64_t k) const { return cols_.at(size_t(k - k_lo_)); }
  LatticePoint point(int64_t k) const { return {column_at(k), k}; }
  bool is_down_right() const;  // columns nonincreasing in k

 private:
  int64_t k_lo_ = 0;
  std::vector<int64_t> cols_;
};

struct LineToPointResult {
  double value = 0.0;
  int64_t argmax_k = 0;  // start index achieving the max
};

// x_k(0) = -floor(k/rho) with the quotient snapped to the nearest integer
// when within 1e-9 (k/rho in doubles can land one ulp around an exact
// integer, e.g. 3/0.3).
int64_t flat_position(double rho, int64_t k);

// --- operations ---------------------------------------------------------

PassageField solve_passage(const WeightField& weights, Storage storage);
PassageField solve_passage(const FixedWeightField& weights, Storage storage);

double last_passage(const PassageField& field, LatticePoint end);

// Increments between consecutive interior columns of a computed row:
// L(m+1,row) - L(m,row) for interior m, width-1 values. For RollingRow the
// row must be the final one.
std::vector<double> top_row_increments(const PassageField& field, int64_t row);

// Maximizing path from the boundary/start to end; ties prefer the horizontal
// predecessor. FullTable only.
MonotonePath backtrack_maximizer(const PassageField& field, LatticePoint end);

// Exit point of the stationary-boundary maximizer: z > 0 exits at (z,0),
// z < 0 at (0,-z). Ties walk toward positive z. FullTable + Stationary only.
ExitPoint exit_point(const PassageField& field, LatticePoint end);

// Max over admissible start points of the start-excluded path weight, plus
// the achieving start index. Weights are read as pure bulk; the field's
// boundary axes must lie strictly outside the swept region.
LineToPointResult line_to_point(const StartSet& starts, LatticePoint end, const WeightField& weights,
                                bool need_argmax = false);
LineToPointResult line_to_point(const StartSet& starts, LatticePoint end,
                                const FixedWeightField& weights, bool need_argmax = false);

// Point-to-point passage time with bulk weights (start excluded), i.e.
// line_to_point from the singleton {from}.
double point_to_point(const WeightField& weights, LatticePoint from, LatticePoint end);

// One rolling sweep of the field capturing L at the given points (each must
// lie in the field rectangle). Used where several nested endpoints share one
// realization.
std::vector<double> passage_checkpoints(const WeightField& weights,
                                        std::span<const LatticePoint> points);

}  // namespace kpz
