#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kpzlab/lpp.hpp"
#include "kpzlab/scaling.hpp"

namespace kpz {

// Pooled stationary top-row increments L^rho(m+1,n) - L^rho(m,n), m >= 1;
// exactly i.i.d. Exp(1-rho) at every finite n.
std::vector<double> burke_samples(double rho, int64_t n, int64_t m_count, int64_t replicas,
                                  uint64_t seed);

struct BProcessSample {
  std::vector<double> u;
  std::vector<double> value;  // B^{rho_sign}_n(u)
};

// Rescaled stationary increment process along the top row,
// B(u) = [L^rho(m(u),n) - L^rho(m(0),n) - beta1 u n^{2/3}/(1-rho)] / (beta2 n^{1/3}),
// rho = rho0 + sign * kappa n^{-1/3}, m(u) = floor(gamma^2 n + beta1 u n^{2/3}).
BProcessSample b_process(double gamma, double kappa, int sign, int64_t n,
                         std::span<const double> u_grid, uint64_t seed);

struct ExitEstimate {
  double p_hat = 0.0, ci_lo = 0.0, ci_hi = 0.0;  // 95% normal CI
  int64_t hits = 0, replicas = 0;
};

// Fraction of replicas with Z^{rho+}(.) > 0 (sign=+1) or Z^{rho-}(.) < 0
// (sign=-1), endpoint (gamma^2 n -+ sign * beta1 M n^{2/3}, n). Replicas are
// independent and may run on several threads.
ExitEstimate exit_probability(double gamma, int64_t n, double kappa, int sign,
                              double endpoint_shift_M, int64_t replicas, uint64_t seed,
                              int threads = 1);

struct ComparisonReport {
  bool exit_plus_ok = false;
  bool exit_minus_ok = false;
  int64_t inequality_violations = 0;
  double max_slack = 0.0;  // max of (violating side) - (bounding side); <= 0 when clean
  int64_t pairs_checked = 0;
};

// Pathwise check of the increment comparison on one coupled realization:
// zero-boundary L and stationary L^{rho+-} share bulk weights; whenever
// Z^{rho+}(m(-M1),n) >= 0 every increment of L over the u-grid is dominated
// by the corresponding increment of L^{rho+} (and symmetrically from below
// for rho- when Z^{rho-}(m(M2),n) <= 0). Tolerance 1e-9 absolute.
ComparisonReport comparison_check(double gamma, double kappa, int64_t n, double M1, double M2,
                                  std::span<const double> u_grid, uint64_t seed);

}  // namespace kpz
