#pragma once

#include <cstdint>
#include <vector>

#include "kpzlab/lpp.hpp"

namespace kpz {

enum class InitKind { FlatDensity, Step, Offsets, BernoulliStationary };

// Particle labels follow ... < x_2(0) < x_1(0) < 0 <= x_0(0) < x_-1(0) < ...
// Flat and step conditions are defined for every label; offset and Bernoulli
// conditions carry an explicit label window.
struct InitialCondition {
  InitKind kind = InitKind::FlatDensity;
  double rho = 0.5;
  bool bounded = false;
  int64_t label_lo = 0, label_hi = 0;
  std::vector<int64_t> x0;  // positions for bounded kinds, index k - label_lo

  static InitialCondition flat(double rho);
  static InitialCondition step();
  static InitialCondition offsets(double rho, int64_t k_lo, std::vector<int64_t> u);
  static InitialCondition bernoulli(double rho, int64_t site_lo, int64_t site_hi, uint64_t seed,
                                    bool condition_origin);

  int64_t position0(int64_t k) const;  // x_k(0)
  bool has_label(int64_t k) const;
  // LPP start set {(k + x_k(0), k)}; for unbounded kinds over [k_lo, k_hi]
  StartSet start_set(int64_t k_lo, int64_t k_hi) const;
};

// Finite simulation window. Particles whose initial position falls outside
// [site_lo, site_hi] are frozen; the window must keep the frozen boundary at
// least margin * t_max sites away from the observation region.
struct SimWindow {
  int64_t site_lo = 0, site_hi = 0;
  int64_t obs_lo = 0, obs_hi = 0;
  double margin = 4.0;
};
SimWindow window_for(int64_t obs_lo, int64_t obs_hi, double t_max, double margin = 4.0);

class Trajectory {
 public:
  double t_max() const { return t_max_; }
  SimWindow window() const { return window_; }
  int64_t label_lo() const { return label_lo_; }
  int64_t label_hi() const { return label_lo_ + int64_t(jump_times_.size()) - 1; }

  int64_t position(int64_t k, double t) const;  // x_k(t)
  int64_t current(double t) const;              // J(t): jumps across bond (0,1)
  int64_t jump_count(int64_t k, double t) const;

 private:
  friend class TasepEngine;
  double t_max_ = 0;
  SimWindow window_{};
  int64_t label_lo_ = 0;
  std::vector<int64_t> x0_;
  std::vector<std::vector<double>> jump_times_;  // per label, ascending
  std::vector<double> bond01_times_;             // ascending
};

// Exact event-driven TASEP: every particle carries an independent Exp(1)
// clock; a ring is a jump attempt that succeeds iff the target site is
// empty. Blocked attempts simply re-arm (memorylessness makes this exact).
Trajectory kmc_simulate(const InitialCondition& init, double t_max, SimWindow window,
                        uint64_t seed);

// Same event engine driven by the waiting-time field: particle j's jump in
// column i completes one field weight after both enabling events, i.e.
// T(i,j) = w(i,j) + max(T(i-1,j), T(i,j-1)) pathwise. Realizes the TASEP
// side of the LPP coupling on the same randomness.
Trajectory replay_from_weights(const InitialCondition& init, double t_max, SimWindow window,
                               const WeightField& weights);

// Height function of Eq-style three-branch form: h(0,t) = 2 J(t), and unit
// slopes away from the origin determined by the occupation variables.
int64_t height(const Trajectory& traj, int64_t j, double t);
int64_t current(const Trajectory& traj, double t);

// Passage/jump-completion times T(i,j) over the coupling region: rows
// n_lo..n_hi, columns up to m_hi, seeded on the start set of the initial
// condition. T(m,n) <= t iff x_n(t) >= m-n on shared waiting times.
class CoupledTable {
 public:
  double at(int64_t m, int64_t n) const;  // T(m,n); 0 at the start column
  int64_t n_lo() const { return n_lo_; }
  int64_t n_hi() const { return n_lo_ + int64_t(rows_.size()) - 1; }
  int64_t m_hi() const { return m_hi_; }
  int64_t start_column(int64_t n) const { return col0_.at(size_t(n - n_lo_)); }

 private:
  friend CoupledTable coupled_from_weights(const WeightField&, const InitialCondition&, int64_t,
                                           int64_t, int64_t);
  int64_t n_lo_ = 0, m_hi_ = 0;
  std::vector<int64_t> col0_;               // start column per row
  std::vector<std::vector<double>> rows_;   // T(col0+1 .. m_hi, n)
};

CoupledTable coupled_from_weights(const WeightField& weights, const InitialCondition& init,
                                  int64_t n_lo, int64_t n_hi, int64_t m_hi);

// J(t) through the coupling: J(t) >= k iff particle k-1 has entered site 1,
// i.e. T(k, k-1) <= t; one rolling sweep over the coupling region.
int64_t current_coupled(const WeightField& weights, const InitialCondition& init, double t);

// Zero-boundary field sized so current_coupled(field, init, t) reads only
// bulk cells.
WeightField current_coupling_field(uint64_t seed, const InitialCondition& init, double t);

}  // namespace kpz
