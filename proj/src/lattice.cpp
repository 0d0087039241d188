#include "kpzlab/lattice.hpp"

namespace kpz {

namespace {
std::atomic<int64_t> g_max_table_cells{100'000'000};

enum : uint32_t { kBulkTag = 0x1fd3, kRowAxisTag = 0x2ae1, kColAxisTag = 0x3c97 };
}  // namespace

int64_t max_table_cells() { return g_max_table_cells.load(std::memory_order_relaxed); }
void set_max_table_cells(int64_t cells) {
  if (cells < 1) throw std::invalid_argument("set_max_table_cells: cells must be positive");
  g_max_table_cells.store(cells, std::memory_order_relaxed);
}

WeightField::WeightField(uint64_t seed, LatticePoint origin, int64_t width, int64_t height,
                         BoundaryMode mode, double rho)
    : seed_(seed), origin_(origin), width_(width), height_(height), mode_(mode), rho_(rho) {
  if (width < 1 || height < 1) throw std::invalid_argument("WeightField: width, height must be >= 1");
  if (mode == BoundaryMode::Stationary && !(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("WeightField: stationary density must lie in (0,1)");
  if (width > max_table_cells() || height > max_table_cells() ||
      width * height > max_table_cells())
    throw capacity_error("WeightField: width*height exceeds the configured cell cap");
  // bulk stream is mode-independent by construction
  bulk_stream_ = mix64(seed ^ (uint64_t(kBulkTag) * 0x9e3779b97f4a7c15ull));
  row_stream_ = mix64(seed ^ (uint64_t(kRowAxisTag) * 0x9e3779b97f4a7c15ull));
  col_stream_ = mix64(seed ^ (uint64_t(kColAxisTag) * 0x9e3779b97f4a7c15ull));
}

FixedWeightField::FixedWeightField(LatticePoint origin, int64_t width, int64_t height,
                                   std::vector<double> bulk_row_major, BoundaryMode mode,
                                   std::vector<double> row_axis, std::vector<double> col_axis)
    : origin_(origin),
      width_(width),
      height_(height),
      mode_(mode),
      bulk_(std::move(bulk_row_major)),
      row_axis_(std::move(row_axis)),
      col_axis_(std::move(col_axis)) {
  if (width < 1 || height < 1) throw std::invalid_argument("FixedWeightField: bad size");
  if (int64_t(bulk_.size()) != width * height)
    throw std::invalid_argument("FixedWeightField: bulk size mismatch");
  if (mode == BoundaryMode::Stationary &&
      (int64_t(row_axis_.size()) != width || int64_t(col_axis_.size()) != height))
    throw std::invalid_argument("FixedWeightField: axis size mismatch");
}

double FixedWeightField::operator()(int64_t i, int64_t j) const {
  int64_t di = i - origin_.i, dj = j - origin_.j;
  if (mode_ == BoundaryMode::ZeroBoundary) {
    if (di <= 0 || dj <= 0) return 0.0;
  } else {
    if (di == 0 && dj == 0) return 0.0;
    if (dj == 0) return row_axis_.at(size_t(di - 1));
    if (di == 0) return col_axis_.at(size_t(dj - 1));
  }
  if (di < 1 || di > width_ || dj < 1 || dj > height_)
    throw std::out_of_range("FixedWeightField: cell outside rectangle");
  return bulk_[size_t((dj - 1) * width_ + (di - 1))];
}

}  // namespace kpz
