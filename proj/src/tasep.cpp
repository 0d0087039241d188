#include "kpzlab/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace kpz {

InitialCondition InitialCondition::flat(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("InitialCondition::flat: rho must be in (0,1)");
  InitialCondition ic;
  ic.kind = InitKind::FlatDensity;
  ic.rho = rho;
  return ic;
}

InitialCondition InitialCondition::step() {
  InitialCondition ic;
  ic.kind = InitKind::Step;
  ic.rho = 0.0;
  return ic;
}

InitialCondition InitialCondition::offsets(double rho, int64_t k_lo, std::vector<int64_t> u) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("InitialCondition::offsets: rho must be in (0,1)");
  if (u.empty()) throw std::invalid_argument("InitialCondition::offsets: empty offsets");
  InitialCondition ic;
  ic.kind = InitKind::Offsets;
  ic.rho = rho;
  ic.bounded = true;
  ic.label_lo = k_lo;
  ic.label_hi = k_lo + int64_t(u.size()) - 1;
  ic.x0.resize(u.size());
  for (size_t idx = 0; idx < u.size(); ++idx) {
    int64_t k = k_lo + int64_t(idx);
    ic.x0[idx] = flat_position(rho, k) + u[idx];
  }
  for (size_t idx = 1; idx < ic.x0.size(); ++idx)
    if (ic.x0[idx] >= ic.x0[idx - 1])
      throw std::invalid_argument("InitialCondition::offsets: positions not strictly decreasing");
  return ic;
}

InitialCondition InitialCondition::bernoulli(double rho, int64_t site_lo, int64_t site_hi,
                                             uint64_t seed, bool condition_origin) {
  StartSet s = StartSet::bernoulli(rho, site_lo, site_hi, seed, condition_origin);
  InitialCondition ic;
  ic.kind = InitKind::BernoulliStationary;
  ic.rho = rho;
  ic.bounded = true;
  ic.label_lo = s.k_lo();
  ic.label_hi = s.k_hi();
  ic.x0.resize(size_t(ic.label_hi - ic.label_lo + 1));
  for (int64_t k = ic.label_lo; k <= ic.label_hi; ++k)
    ic.x0[size_t(k - ic.label_lo)] = s.column_at(k) - k;
  return ic;
}

int64_t InitialCondition::position0(int64_t k) const {
  switch (kind) {
    case InitKind::FlatDensity:
      return flat_position(rho, k);
    case InitKind::Step:
      if (k < 0) throw std::out_of_range("step initial condition has labels k >= 0");
      return -k;
    default:
      if (!has_label(k)) throw std::out_of_range("label outside the initial-condition window");
      return x0[size_t(k - label_lo)];
  }
}

bool InitialCondition::has_label(int64_t k) const {
  if (kind == InitKind::FlatDensity) return true;
  if (kind == InitKind::Step) return k >= 0;
  return k >= label_lo && k <= label_hi;
}

StartSet InitialCondition::start_set(int64_t k_lo, int64_t k_hi) const {
  if (bounded) {
    k_lo = std::max(k_lo, label_lo);
    k_hi = std::min(k_hi, label_hi);
  }
  if (kind == InitKind::Step) k_lo = std::max<int64_t>(k_lo, 0);
  if (k_hi < k_lo) throw std::invalid_argument("start_set: empty label range");
  std::vector<int64_t> cols(static_cast<size_t>(k_hi - k_lo + 1));
  for (int64_t k = k_lo; k <= k_hi; ++k) cols[size_t(k - k_lo)] = k + position0(k);
  return StartSet::from_columns(k_lo, std::move(cols));
}

SimWindow window_for(int64_t obs_lo, int64_t obs_hi, double t_max, double margin) {
  SimWindow w;
  int64_t pad = int64_t(std::ceil(margin * t_max)) + 1;
  w.site_lo = obs_lo - pad;
  w.site_hi = obs_hi + pad;
  w.obs_lo = obs_lo;
  w.obs_hi = obs_hi;
  w.margin = margin;
  return w;
}

int64_t Trajectory::jump_count(int64_t k, double t) const {
  const auto& v = jump_times_.at(static_cast<size_t>(k - label_lo_));
  return int64_t(std::upper_bound(v.begin(), v.end(), t) - v.begin());
}

int64_t Trajectory::position(int64_t k, double t) const {
  if (t < 0 || t > t_max_) throw std::out_of_range("Trajectory::position: time outside horizon");
  return x0_.at(static_cast<size_t>(k - label_lo_)) + jump_count(k, t);
}

int64_t Trajectory::current(double t) const {
  if (t < 0 || t > t_max_) throw std::out_of_range("Trajectory::current: time outside horizon");
  return int64_t(std::upper_bound(bond01_times_.begin(), bond01_times_.end(), t) -
                 bond01_times_.begin());
}

namespace {

struct Event {
  double t;
  int64_t label;
  friend bool operator>(const Event& a, const Event& b) { return a.t > b.t; }
};

}  // namespace

class TasepEngine {
 public:
  TasepEngine(const InitialCondition& init, double t_max, SimWindow win)
      : t_max_(t_max), win_(win) {
    if (t_max <= 0) throw std::invalid_argument("simulate: t_max must be positive");
    double pad_lo = double(win.obs_lo - win.site_lo);
    double pad_hi = double(win.site_hi - win.obs_hi);
    if (pad_lo < win.margin * t_max || pad_hi < win.margin * t_max)
      throw std::invalid_argument(
          "simulate: window too small for the requested horizon and observables");
    if (win.site_hi - win.site_lo > max_table_cells())
      throw capacity_error("simulate: window exceeds the configured cap");

    // labels with initial position inside the window; positions decrease in k
    int64_t k = 0;
    while (init.has_label(k - 1) && init.position0(k - 1) <= win.site_hi) --k;
    while (init.has_label(k) && init.position0(k) > win.site_hi) ++k;
    if (!init.has_label(k) || init.position0(k) < win.site_lo)
      throw std::invalid_argument("simulate: no particles in window");
    label_lo_ = k;
    while (init.has_label(k + 1) && init.position0(k + 1) >= win.site_lo) ++k;
    label_hi_ = k;

    int64_t count = label_hi_ - label_lo_ + 1;
    x_.resize(static_cast<size_t>(count));
    for (int64_t lbl = label_lo_; lbl <= label_hi_; ++lbl)
      x_[size_t(lbl - label_lo_)] = init.position0(lbl);
    // one frozen blocker just ahead of the front, if the labeling has one
    front_block_ = init.has_label(label_lo_ - 1) ? init.position0(label_lo_ - 1)
                                                 : std::numeric_limits<int64_t>::max();
    traj_.t_max_ = t_max;
    traj_.window_ = win;
    traj_.label_lo_ = label_lo_;
    traj_.x0_ = x_;
    traj_.jump_times_.assign(size_t(count), {});
  }

  Trajectory run_poisson(uint64_t seed) {
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> q;
    std::vector<uint64_t> clock_count(x_.size(), 0);
    auto next_ring = [&](int64_t lbl, double now) {
      size_t idx = size_t(lbl - label_lo_);
      uint64_t stream = mix64(seed ^ mix64(uint64_t(lbl) + 0x6a09e667f3bcc909ull));
      double dt = exp_from_hash(hash2(stream, clock_count[idx]++, 0), 1.0);
      return Event{now + dt, lbl};
    };
    for (int64_t lbl = label_lo_; lbl <= label_hi_; ++lbl) q.push(next_ring(lbl, 0.0));
    while (!q.empty() && q.top().t <= t_max_) {
      Event e = q.top();
      q.pop();
      if (target_free(e.label)) do_jump(e.label, e.t);
      q.push(next_ring(e.label, e.t));
    }
    return std::move(traj_);
  }

  Trajectory run_replay(const WeightField& wf) {
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> q;
    waiting_.assign(x_.size(), false);
    auto omega = [&](int64_t lbl) {
      // column of the next jump of lbl
      size_t idx = size_t(lbl - label_lo_);
      int64_t column = lbl + x_[idx] + 1;
      if (!wf.contains(column, lbl) || column <= wf.origin().i || lbl <= wf.origin().j)
        throw std::out_of_range("replay: waiting-time field does not cover the needed jumps");
      return wf.bulk(column, lbl);
    };
    for (int64_t lbl = label_lo_; lbl <= label_hi_; ++lbl) {
      if (target_free(lbl))
        q.push({omega(lbl), lbl});
      else
        waiting_[size_t(lbl - label_lo_)] = true;
    }
    while (!q.empty() && q.top().t <= t_max_) {
      Event e = q.top();
      q.pop();
      do_jump(e.label, e.t);
      size_t idx = size_t(e.label - label_lo_);
      if (target_free(e.label))
        q.push({e.t + omega(e.label), e.label});
      else
        waiting_[idx] = true;
      // the vacated site may release the particle behind
      if (e.label < label_hi_ && waiting_[idx + 1] && target_free(e.label + 1)) {
        waiting_[idx + 1] = false;
        q.push({e.t + omega(e.label + 1), e.label + 1});
      }
    }
    return std::move(traj_);
  }

 private:
  bool target_free(int64_t lbl) const {
    size_t idx = size_t(lbl - label_lo_);
    int64_t ahead = (lbl == label_lo_) ? front_block_ : x_[idx - 1];
    return x_[idx] + 1 < ahead;
  }

  void do_jump(int64_t lbl, double t) {
    size_t idx = size_t(lbl - label_lo_);
    if (x_[idx] == 0) traj_.bond01_times_.push_back(t);
    ++x_[idx];
    traj_.jump_times_[idx].push_back(t);
  }

  double t_max_;
  SimWindow win_;
  int64_t label_lo_ = 0, label_hi_ = 0;
  int64_t front_block_ = 0;
  std::vector<int64_t> x_;
  std::vector<bool> waiting_;
  Trajectory traj_;
};

Trajectory kmc_simulate(const InitialCondition& init, double t_max, SimWindow window,
                        uint64_t seed) {
  TasepEngine eng(init, t_max, window);
  return eng.run_poisson(seed);
}

Trajectory replay_from_weights(const InitialCondition& init, double t_max, SimWindow window,
                               const WeightField& weights) {
  TasepEngine eng(init, t_max, window);
  return eng.run_replay(weights);
}

int64_t current(const Trajectory& traj, double t) { return traj.current(t); }

int64_t height(const Trajectory& traj, int64_t j, double t) {
  SimWindow w = traj.window();
  if (j < w.site_lo || j > w.site_hi)
    throw std::out_of_range("height: site outside the simulated window");
  int64_t h = 2 * traj.current(t);
  if (j == 0) return h;
  // occupation over the needed span
  int64_t lo = std::min<int64_t>(1, j + 1), hi = std::max<int64_t>(0, j);
  std::vector<uint8_t> occ(size_t(hi - lo + 1), 0);
  for (int64_t k = traj.label_lo(); k <= traj.label_hi(); ++k) {
    int64_t p = traj.position(k, t);
    if (p >= lo && p <= hi) occ[size_t(p - lo)] = 1;
  }
  if (j >= 1) {
    for (int64_t i = 1; i <= j; ++i) h += 1 - 2 * int64_t(occ[size_t(i - lo)]);
  } else {
    for (int64_t i = j + 1; i <= 0; ++i) h -= 1 - 2 * int64_t(occ[size_t(i - lo)]);
  }
  return h;
}

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// shared sweep over the coupling region seeded on the start set
template <class RowSink>
void coupled_sweep(const WeightField& wf, const StartSet& S, int64_t n_hi, int64_t m_hi,
                   RowSink&& sink) {
  const int64_t k_top = std::min(S.k_hi(), n_hi);
  int64_t k_bot = S.k_lo();
  while (k_bot <= k_top && S.column_at(k_bot) > m_hi) ++k_bot;
  if (k_bot > k_top) throw std::domain_error("coupled sweep: no admissible start point");
  const int64_t i_min = S.column_at(k_top);
  if (!(wf.origin().i < i_min && wf.origin().j < k_bot) || !wf.contains(m_hi, n_hi) ||
      !wf.contains(i_min, k_bot))
    throw std::invalid_argument("coupled sweep: field does not cover the region as bulk");

  std::vector<double> row(size_t(m_hi - i_min + 1), kNegInf);
  std::vector<double> wrow(row.size());
  for (int64_t j = k_bot; j <= n_hi; ++j) {
    const int64_t i0 = (j <= k_top) ? S.column_at(j) : i_min;
    const int64_t lo = i0 - i_min;
    wf.fill_bulk_row(i0, m_hi, j, wrow.data() + size_t(lo));
    double left = kNegInf;
    for (int64_t i = i0; i <= m_hi; ++i) {
      const size_t s = size_t(i - i_min);
      double v = wrow[s] + std::max(left, row[s]);
      if (j <= k_top && i == i0 && !(v > 0.0)) v = 0.0;
      row[s] = v;
      left = v;
    }
    if (sink(j, i0, i_min, row)) return;
  }
}
}  // namespace

CoupledTable coupled_from_weights(const WeightField& weights, const InitialCondition& init,
                                  int64_t n_lo, int64_t n_hi, int64_t m_hi) {
  if (weights.mode() != BoundaryMode::ZeroBoundary)
    throw std::invalid_argument("coupled_from_weights: zero-boundary weights required");
  if (n_hi < n_lo) throw std::invalid_argument("coupled_from_weights: empty row range");
  if (!init.has_label(n_lo) || !init.has_label(n_hi))
    throw std::invalid_argument("coupled_from_weights: rows outside the particle window");
  // the start set must extend below n_lo far enough to cover every admissible
  // start; take labels down to the staircase column m_hi
  int64_t k_lo = n_lo;
  while (init.has_label(k_lo - 1) && init.position0(k_lo - 1) + (k_lo - 1) <= m_hi) --k_lo;
  StartSet S = init.start_set(k_lo, n_hi);

  CoupledTable tbl;
  tbl.n_lo_ = n_lo;
  tbl.m_hi_ = m_hi;
  tbl.col0_.reserve(static_cast<size_t>(n_hi - n_lo + 1));
  tbl.rows_.reserve(static_cast<size_t>(n_hi - n_lo + 1));
  for (int64_t n = n_lo; n <= n_hi; ++n) tbl.col0_.push_back(S.column_at(n));

  coupled_sweep(weights, S, n_hi, m_hi,
                [&](int64_t j, int64_t, int64_t i_min, const std::vector<double>& row) {
                  if (j >= n_lo) {
                    int64_t c0 = tbl.col0_[size_t(j - n_lo)];
                    std::vector<double> r;
                    r.reserve(static_cast<size_t>(m_hi - c0));
                    for (int64_t i = c0 + 1; i <= m_hi; ++i) r.push_back(row[size_t(i - i_min)]);
                    tbl.rows_.push_back(std::move(r));
                  }
                  return false;
                });
  return tbl;
}

double CoupledTable::at(int64_t m, int64_t n) const {
  if (n < n_lo_ || n > n_hi()) throw std::out_of_range("CoupledTable::at: row outside table");
  int64_t c0 = col0_[size_t(n - n_lo_)];
  if (m <= c0) return 0.0;  // particle n is already at or right of site m-n at time 0
  if (m > m_hi_) throw std::out_of_range("CoupledTable::at: column outside table");
  return rows_[size_t(n - n_lo_)][size_t(m - c0 - 1)];
}

namespace {
int64_t current_cap(const InitialCondition& init, double t) {
  double chi = init.rho * (1.0 - init.rho);
  if (init.kind == InitKind::Step) chi = 0.25;  // step current runs at the rho=1/2 rate
  return int64_t(std::ceil(chi * t + 10.0 * std::pow(chi, 2.0 / 3.0) * std::cbrt(t) + 32.0));
}
}  // namespace

WeightField current_coupling_field(uint64_t seed, const InitialCondition& init, double t) {
  if (!(t > 0)) throw std::invalid_argument("current_coupling_field: t must be positive");
  int64_t k_cap = current_cap(init, t);
  int64_t k_lo = 0;
  while (init.has_label(k_lo - 1) && init.position0(k_lo - 1) + (k_lo - 1) <= k_cap) --k_lo;
  int64_t i_min = (k_cap - 1) + init.position0(k_cap - 1);
  LatticePoint origin{i_min - 1, k_lo - 1};
  return WeightField(seed, origin, k_cap - origin.i, (k_cap - 1) - origin.j,
                     BoundaryMode::ZeroBoundary);
}

int64_t current_coupled(const WeightField& weights, const InitialCondition& init, double t) {
  if (t <= 0) return 0;
  int64_t k_cap = current_cap(init, t);
  int64_t k_lo = 0;
  while (init.has_label(k_lo - 1) && init.position0(k_lo - 1) + (k_lo - 1) <= k_cap) --k_lo;
  StartSet S = init.start_set(k_lo, k_cap - 1);
  // first label that ever crosses bond (0,1): 0 if x_0(0)=0, else 1
  const int64_t r = (init.position0(0) == 0) ? 0 : 1;

  int64_t jumps = 0;
  bool saturated = true;
  coupled_sweep(weights, S, k_cap - 1, k_cap,
                [&](int64_t j, int64_t, int64_t i_min, const std::vector<double>& row) {
                  if (j >= r) {
                    double T = row[size_t(j + 1 - i_min)];  // T(j+1, j)
                    if (T <= t) {
                      ++jumps;
                    } else {
                      saturated = false;
                      return true;  // T(k,k-1) is nondecreasing in k
                    }
                  }
                  return false;
                });
  if (saturated)
    throw std::logic_error("current_coupled: capacity bound reached, enlarge the cap");
  return jumps;
}

}  // namespace kpz
