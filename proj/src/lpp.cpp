#include "kpzlab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace kpz {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

struct PassageBuilder {
  static PassageField make(Storage storage, LatticePoint origin, int64_t w, int64_t h,
                           BoundaryMode mode, double rho, std::vector<double>&& data) {
    PassageField f;
    f.storage_ = storage;
    f.origin_ = origin;
    f.width_ = w;
    f.height_ = h;
    f.mode_ = mode;
    f.rho_ = rho;
    f.data_ = std::move(data);
    return f;
  }
};

double PassageField::at(int64_t i, int64_t j) const {
  int64_t di = i - origin_.i, dj = j - origin_.j;
  if (di < 0 || di > width_ || dj < 0 || dj > height_)
    throw std::out_of_range("PassageField::at: endpoint outside rectangle");
  if (storage_ == Storage::FullTable) return data_[size_t(dj) * size_t(width_ + 1) + size_t(di)];
  if (dj != height_)
    throw std::out_of_range("PassageField::at: RollingRow retains only the final row");
  return data_[size_t(di)];
}

std::span<const double> PassageField::row(int64_t j) const {
  int64_t dj = j - origin_.j;
  if (dj < 0 || dj > height_) throw std::out_of_range("PassageField::row: row outside rectangle");
  if (storage_ == Storage::FullTable)
    return {data_.data() + size_t(dj) * size_t(width_ + 1), size_t(width_ + 1)};
  if (dj != height_)
    throw std::out_of_range("PassageField::row: RollingRow retains only the final row");
  return {data_.data(), size_t(width_ + 1)};
}

namespace {

template <class WF>
void fill_row(const WF& wf, int64_t i_lo, int64_t i_hi, int64_t j, double* out) {
  if constexpr (std::is_same_v<WF, WeightField>) {
    wf.fill_bulk_row(i_lo, i_hi, j, out);
  } else {
    for (int64_t i = i_lo; i <= i_hi; ++i) out[i - i_lo] = wf(i, j);
  }
}

template <class WF>
PassageField solve_impl(const WF& wf, Storage storage) {
  const int64_t W = wf.width(), H = wf.height();
  const LatticePoint o = wf.origin();
  const int64_t row_len = W + 1;
  if (storage == Storage::FullTable && (W + 1) * (H + 1) > max_table_cells())
    throw capacity_error("solve_passage: full table exceeds the configured cell cap");

  const bool full = storage == Storage::FullTable;
  std::vector<double> data;
  std::vector<double> wrow(static_cast<size_t>(W));
  std::vector<double> prev(static_cast<size_t>(row_len)), cur(static_cast<size_t>(row_len));

  prev[0] = 0.0;
  for (int64_t i = 1; i <= W; ++i) prev[size_t(i)] = prev[size_t(i - 1)] + wf(o.i + i, o.j);
  if (full) {
    data.resize(size_t(row_len) * size_t(H + 1));
    std::copy(prev.begin(), prev.end(), data.begin());
  }

  double col_acc = 0.0;
  for (int64_t j = 1; j <= H; ++j) {
    col_acc += wf(o.i, o.j + j);
    fill_row(wf, o.i + 1, o.i + W, o.j + j, wrow.data());
    const double* below = prev.data();
    double* dst = cur.data();
    dst[0] = col_acc;
    double left = col_acc;
    for (int64_t i = 1; i <= W; ++i) {
      left = wrow[size_t(i - 1)] + std::max(left, below[i]);
      dst[i] = left;
    }
    if (full) std::copy(cur.begin(), cur.end(), data.begin() + size_t(j) * size_t(row_len));
    std::swap(prev, cur);
  }
  if (!full) data = std::move(prev);

  double rho = 0.0;
  if constexpr (std::is_same_v<WF, WeightField>) rho = wf.rho();
  return PassageBuilder::make(storage, o, W, H, wf.mode(), rho, std::move(data));
}

}  // namespace

PassageField solve_passage(const WeightField& weights, Storage storage) {
  return solve_impl(weights, storage);
}
PassageField solve_passage(const FixedWeightField& weights, Storage storage) {
  return solve_impl(weights, storage);
}

double last_passage(const PassageField& field, LatticePoint end) { return field.at(end); }

std::vector<double> top_row_increments(const PassageField& field, int64_t row) {
  auto r = field.row(row);
  std::vector<double> inc;
  inc.reserve(r.size() >= 2 ? r.size() - 2 : 0);
  for (size_t m = 1; m + 1 < r.size(); ++m) inc.push_back(r[m + 1] - r[m]);
  return inc;
}

MonotonePath backtrack_maximizer(const PassageField& field, LatticePoint end) {
  if (!field.can_backtrack())
    throw std::logic_error("backtrack_maximizer: RollingRow storage has no table to walk");
  field.at(end);  // range check
  const LatticePoint o = field.origin();
  std::vector<LatticePoint> rev;
  int64_t i = end.i, j = end.j;
  while (i > o.i || j > o.j) {
    rev.push_back({i, j});
    if (j == o.j) {
      --i;
    } else if (i == o.i) {
      --j;
    } else if (field.at(i - 1, j) >= field.at(i, j - 1)) {
      --i;  // ties prefer the horizontal predecessor
    } else {
      --j;
    }
  }
  rev.push_back(o);
  MonotonePath path;
  path.points.assign(rev.rbegin(), rev.rend());
  return path;
}

ExitPoint exit_point(const PassageField& field, LatticePoint end) {
  if (!field.can_backtrack())
    throw std::logic_error("exit_point: RollingRow storage has no table to walk");
  if (field.mode() != BoundaryMode::Stationary)
    throw std::logic_error("exit_point: field has no stationary boundary");
  field.at(end);
  const LatticePoint o = field.origin();
  int64_t i = end.i, j = end.j;
  while (i > o.i && j > o.j) {
    // ties walk down, toward an x-axis exit (positive z)
    if (field.at(i - 1, j) > field.at(i, j - 1)) {
      --i;
    } else {
      --j;
    }
  }
  if (j == o.j && i == o.i) return {0};
  if (j == o.j) return {i - o.i};
  return {-(j - o.j)};
}

int64_t flat_position(double rho, int64_t k) {
  double q = double(k) / rho;
  double r = std::nearbyint(q);
  if (std::abs(q - r) < 1e-9) q = r;
  return -int64_t(std::floor(q));
}

StartSet StartSet::flat(double rho, int64_t k_lo, int64_t k_hi) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("StartSet::flat: rho must be in (0,1)");
  if (k_hi < k_lo) throw std::invalid_argument("StartSet::flat: empty index range");
  StartSet s;
  s.k_lo_ = k_lo;
  s.cols_.reserve(static_cast<size_t>(k_hi - k_lo + 1));
  for (int64_t k = k_lo; k <= k_hi; ++k) s.cols_.push_back(k + flat_position(rho, k));
  return s;
}

StartSet StartSet::offsets(double rho, int64_t k_lo, std::span<const int64_t> u) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("StartSet::offsets: rho must be in (0,1)");
  if (u.empty()) throw std::invalid_argument("StartSet::offsets: empty offset list");
  StartSet s;
  s.k_lo_ = k_lo;
  s.cols_.reserve(u.size());
  for (size_t idx = 0; idx < u.size(); ++idx) {
    int64_t k = k_lo + int64_t(idx);
    s.cols_.push_back(k + flat_position(rho, k) + u[idx]);
  }
  if (!s.is_down_right())
    throw std::invalid_argument("StartSet::offsets: offsets break the down-right ordering");
  return s;
}

StartSet StartSet::bernoulli(double rho, int64_t site_lo, int64_t site_hi, uint64_t seed,
                             bool condition_origin) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("StartSet::bernoulli: rho must be in (0,1)");
  if (site_hi < site_lo) throw std::invalid_argument("StartSet::bernoulli: empty site window");
  uint64_t stream = mix64(seed ^ 0x5b7e1a2490cd3f68ull);
  std::vector<int64_t> occupied;  // ascending site order
  for (int64_t s = site_lo; s <= site_hi; ++s) {
    bool occ;
    if (condition_origin && s == 0) {
      occ = false;
    } else if (condition_origin && s == 1) {
      occ = true;
    } else {
      occ = unit_from_hash(hash2(stream, uint64_t(s), 0)) <= rho;
    }
    if (occ) occupied.push_back(s);
  }
  if (occupied.empty()) throw std::invalid_argument("StartSet::bernoulli: no particles in window");
  // label convention: particle 0 is the leftmost particle at site >= 0,
  // labels increase to the left
  auto first_nonneg = std::lower_bound(occupied.begin(), occupied.end(), int64_t(0));
  int64_t label_of_front = int64_t(first_nonneg - occupied.begin());  // label of occupied[0]
  // occupied[idx] has label label_of_front - ... : labels decrease with site
  // occupied[0] (leftmost site) carries the largest label.
  StartSet s;
  // k runs from the label of the rightmost particle to the label of the leftmost
  int64_t n = int64_t(occupied.size());
  s.k_lo_ = label_of_front - (n - 1);  // rightmost particle's label
  s.cols_.resize(static_cast<size_t>(n));
  for (int64_t idx = 0; idx < n; ++idx) {
    int64_t label = label_of_front - idx;  // occupied[idx] has this label
    s.cols_[size_t(label - s.k_lo_)] = label + occupied[size_t(idx)];
  }
  return s;
}

StartSet StartSet::single(LatticePoint p) {
  StartSet s;
  s.k_lo_ = p.j;
  s.cols_ = {p.i};
  return s;
}

StartSet StartSet::from_columns(int64_t k_lo, std::vector<int64_t> cols) {
  if (cols.empty()) throw std::invalid_argument("StartSet::from_columns: empty column list");
  StartSet s;
  s.k_lo_ = k_lo;
  s.cols_ = std::move(cols);
  if (!s.is_down_right())
    throw std::invalid_argument("StartSet::from_columns: columns must be nonincreasing");
  return s;
}

bool StartSet::is_down_right() const {
  for (size_t idx = 1; idx < cols_.size(); ++idx)
    if (cols_[idx] > cols_[idx - 1]) return false;
  return true;
}

namespace {

template <class WF>
LineToPointResult line_to_point_impl(const StartSet& S, LatticePoint end, const WF& wf,
                                     bool need_argmax) {
  if (!S.is_down_right())
    throw std::invalid_argument("line_to_point: start set is not down-right");
  // admissible rows: k <= end.j and column_at(k) <= end.i; columns are
  // nonincreasing in k, so these form a (possibly empty) suffix
  const int64_t k_top = std::min(S.k_hi(), end.j);
  int64_t k_bot = S.k_lo();
  while (k_bot <= k_top && S.column_at(k_bot) > end.i) ++k_bot;
  if (k_bot > k_top) throw std::domain_error("line_to_point: no start point precedes the endpoint");

  const int64_t i_min = S.column_at(k_top);  // leftmost reachable column
  const int64_t width = end.i - i_min + 1;
  if (width * (end.j - k_bot + 1) > max_table_cells())
    throw capacity_error("line_to_point: sweep region exceeds the configured cell cap");
  if constexpr (std::is_same_v<WF, WeightField>) {
    if (!(wf.origin().i < i_min && wf.origin().j < k_bot))
      throw std::invalid_argument("line_to_point: field axes intersect the swept region");
    if (!wf.contains(end.i, end.j) || !wf.contains(i_min, k_bot))
      throw std::out_of_range("line_to_point: sweep region leaves the weight field");
  }

  std::vector<double> row(size_t(width), kNegInf);
  std::vector<double> wrow(static_cast<size_t>(width));
  std::vector<int32_t> krow, karg;
  if (need_argmax) krow.assign(size_t(width), 0);

  for (int64_t j = k_bot; j <= end.j; ++j) {
    const int64_t i0 = (j <= k_top) ? S.column_at(j) : i_min;
    const int64_t lo = i0 - i_min;  // first active slot
    fill_row(wf, i0, end.i, j, wrow.data() + lo);
    double left = kNegInf;
    int32_t left_k = 0;
    if (need_argmax) {
      for (int64_t i = i0; i <= end.i; ++i) {
        const size_t s = size_t(i - i_min);
        double below = row[s];
        int32_t pick;
        double v;
        if (left >= below) {  // ties prefer the horizontal predecessor
          v = left;
          pick = left_k;
        } else {
          v = below;
          pick = krow[s];
        }
        v = wrow[s] + v;
        if (j <= k_top && i == i0 && !(v > 0.0)) {
          v = 0.0;
          pick = int32_t(j);
        }
        row[s] = v;
        krow[s] = pick;
        left = v;
        left_k = pick;
      }
    } else {
      for (int64_t i = i0; i <= end.i; ++i) {
        const size_t s = size_t(i - i_min);
        double v = wrow[s] + std::max(left, row[s]);
        if (j <= k_top && i == i0 && !(v > 0.0)) v = 0.0;
        row[s] = v;
        left = v;
      }
    }
  }

  LineToPointResult res;
  res.value = row[size_t(end.i - i_min)];
  res.argmax_k = need_argmax ? krow[size_t(end.i - i_min)] : 0;
  if (!(res.value >= 0.0)) throw std::domain_error("line_to_point: endpoint unreachable");
  return res;
}

}  // namespace

LineToPointResult line_to_point(const StartSet& starts, LatticePoint end, const WeightField& weights,
                                bool need_argmax) {
  return line_to_point_impl(starts, end, weights, need_argmax);
}
LineToPointResult line_to_point(const StartSet& starts, LatticePoint end,
                                const FixedWeightField& weights, bool need_argmax) {
  return line_to_point_impl(starts, end, weights, need_argmax);
}

double point_to_point(const WeightField& weights, LatticePoint from, LatticePoint end) {
  if (!lattice_leq(from, end)) throw std::domain_error("point_to_point: endpoints not ordered");
  return line_to_point(StartSet::single(from), end, weights).value;
}

std::vector<double> passage_checkpoints(const WeightField& weights,
                                        std::span<const LatticePoint> points) {
  const int64_t W = weights.width(), H = weights.height();
  const LatticePoint o = weights.origin();
  std::vector<size_t> order(points.size());
  for (size_t k = 0; k < points.size(); ++k) {
    order[k] = k;
    if (!weights.contains(points[k].i, points[k].j))
      throw std::out_of_range("passage_checkpoints: point outside the field");
  }
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return points[a].j < points[b].j; });

  std::vector<double> out(points.size());
  std::vector<double> wrow(static_cast<size_t>(W));
  std::vector<double> prev(static_cast<size_t>(W + 1)), cur(static_cast<size_t>(W + 1));
  prev[0] = 0.0;
  for (int64_t i = 1; i <= W; ++i) prev[size_t(i)] = prev[size_t(i - 1)] + weights(o.i + i, o.j);

  size_t next = 0;
  auto capture = [&](int64_t j, const std::vector<double>& r) {
    while (next < order.size() && points[order[next]].j == j) {
      out[order[next]] = r[size_t(points[order[next]].i - o.i)];
      ++next;
    }
  };
  capture(o.j, prev);

  double col_acc = 0.0;
  for (int64_t j = 1; j <= H && next < order.size(); ++j) {
    col_acc += weights(o.i, o.j + j);
    fill_row(weights, o.i + 1, o.i + W, o.j + j, wrow.data());
    cur[0] = col_acc;
    double left = col_acc;
    const double* below = prev.data();
    for (int64_t i = 1; i <= W; ++i) {
      left = wrow[size_t(i - 1)] + std::max(left, below[i]);
      cur[size_t(i)] = left;
    }
    capture(o.j + j, cur);
    std::swap(prev, cur);
  }
  return out;
}

}  // namespace kpz
