#include "kpzlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpzlab/parallel.hpp"

namespace kpz {

std::vector<double> burke_samples(double rho, int64_t n, int64_t m_count, int64_t replicas,
                                  uint64_t seed) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("burke_samples: rho in (0,1)");
  if (n < 1 || m_count < 1 || replicas < 1)
    throw std::invalid_argument("burke_samples: bad sizes");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(m_count * replicas));
  for (int64_t r = 0; r < replicas; ++r) {
    WeightField wf(derive_seed(seed, uint64_t(r), 0x21), {0, 0}, m_count + 1, n,
                   BoundaryMode::Stationary, rho);
    PassageField pf = solve_passage(wf, Storage::RollingRow);
    auto inc = top_row_increments(pf, n);
    out.insert(out.end(), inc.begin(), inc.end());
  }
  return out;
}

BProcessSample b_process(double gamma, double kappa, int sign, int64_t n,
                         std::span<const double> u_grid, uint64_t seed) {
  if (u_grid.empty()) throw std::invalid_argument("b_process: empty grid");
  const double rho = rho_pm(gamma, kappa, n, sign);
  const SlopeParams sp(gamma);
  const double n13 = std::cbrt(double(n));
  const double n23 = n13 * n13;

  const int64_t m0 = lattice_floor(gamma * gamma * double(n));
  int64_t m_min = m0, m_max = m0;
  std::vector<int64_t> m(u_grid.size());
  for (size_t k = 0; k < u_grid.size(); ++k) {
    m[k] = horizontal_target(gamma, n, u_grid[k]);
    if (m[k] < 1) throw std::invalid_argument("b_process: grid point leaves the lattice");
    m_min = std::min(m_min, m[k]);
    m_max = std::max(m_max, m[k]);
  }
  WeightField wf(seed, {0, 0}, m_max, n, BoundaryMode::Stationary, rho);
  PassageField pf = solve_passage(wf, Storage::RollingRow);
  auto row = pf.row(n);

  BProcessSample s;
  s.u.assign(u_grid.begin(), u_grid.end());
  s.value.resize(u_grid.size());
  const double L0 = row[size_t(m0)];
  for (size_t k = 0; k < u_grid.size(); ++k) {
    double centered = row[size_t(m[k])] - L0 - sp.beta1() * u_grid[k] * n23 / (1.0 - rho);
    s.value[k] = centered / (sp.beta2() * n13);
  }
  return s;
}

ExitEstimate exit_probability(double gamma, int64_t n, double kappa, int sign,
                              double endpoint_shift_M, int64_t replicas, uint64_t seed,
                              int threads) {
  if (replicas < 1) throw std::invalid_argument("exit_probability: replicas >= 1");
  const double rho = rho_pm(gamma, kappa, n, sign);
  const int64_t m_end = horizontal_target(gamma, n, -double(sign) * endpoint_shift_M);
  if (m_end < 1) throw std::invalid_argument("exit_probability: endpoint leaves the lattice");

  std::vector<uint8_t> hit(size_t(replicas), 0);
  parallel_replicas(replicas, threads, [&](int64_t r) {
    WeightField wf(derive_seed(seed, uint64_t(r), 0x22), {0, 0}, m_end, n,
                   BoundaryMode::Stationary, rho);
    PassageField pf = solve_passage(wf, Storage::FullTable);
    int64_t z = exit_point(pf, {m_end, n}).z;
    hit[size_t(r)] = (sign > 0 ? z > 0 : z < 0) ? 1 : 0;
  });
  int64_t hits = 0;
  for (uint8_t h : hit) hits += h;
  ExitEstimate e;
  e.hits = hits;
  e.replicas = replicas;
  e.p_hat = double(hits) / double(replicas);
  double se = std::sqrt(std::max(e.p_hat * (1.0 - e.p_hat), 1e-12) / double(replicas));
  e.ci_lo = std::max(0.0, e.p_hat - 1.96 * se);
  e.ci_hi = std::min(1.0, e.p_hat + 1.96 * se);
  return e;
}

ComparisonReport comparison_check(double gamma, double kappa, int64_t n, double M1, double M2,
                                  std::span<const double> u_grid, uint64_t seed) {
  if (u_grid.size() < 2) throw std::invalid_argument("comparison_check: need a grid");
  for (size_t k = 1; k < u_grid.size(); ++k)
    if (!(u_grid[k] > u_grid[k - 1]))
      throw std::invalid_argument("comparison_check: grid must be increasing");
  const double rho_p = rho_pm(gamma, kappa, n, +1);
  const double rho_m = rho_pm(gamma, kappa, n, -1);

  std::vector<int64_t> m(u_grid.size());
  for (size_t k = 0; k < u_grid.size(); ++k) m[k] = horizontal_target(gamma, n, u_grid[k]);
  const int64_t m_lo = horizontal_target(gamma, n, -M1);
  const int64_t m_hi = horizontal_target(gamma, n, M2);
  if (m_lo < 1) throw std::invalid_argument("comparison_check: M1 leaves the lattice");
  if (m.front() < m_lo || m.back() > m_hi)
    throw std::invalid_argument("comparison_check: grid exceeds [-M1, M2]");

  // coupled triple: same seed => shared bulk sub-stream, different axes
  WeightField w0(seed, {0, 0}, m_hi, n, BoundaryMode::ZeroBoundary);
  WeightField wp(seed, {0, 0}, m_hi, n, BoundaryMode::Stationary, rho_p);
  WeightField wm(seed, {0, 0}, m_hi, n, BoundaryMode::Stationary, rho_m);

  PassageField p0 = solve_passage(w0, Storage::RollingRow);
  PassageField pp = solve_passage(wp, Storage::FullTable);
  PassageField pm = solve_passage(wm, Storage::FullTable);

  ComparisonReport rep;
  rep.exit_plus_ok = exit_point(pp, {m_lo, n}).z >= 0;
  rep.exit_minus_ok = exit_point(pm, {m_hi, n}).z <= 0;

  auto r0 = p0.row(n);
  auto rp = pp.row(n);
  auto rm = pm.row(n);
  const double tol = 1e-9;
  rep.max_slack = -std::numeric_limits<double>::infinity();
  for (size_t k = 1; k < m.size(); ++k) {
    double d0 = r0[size_t(m[k])] - r0[size_t(m[k - 1])];
    if (rep.exit_plus_ok) {
      double dp = rp[size_t(m[k])] - rp[size_t(m[k - 1])];
      rep.max_slack = std::max(rep.max_slack, d0 - dp);
      if (d0 - dp > tol) ++rep.inequality_violations;
      ++rep.pairs_checked;
    }
    if (rep.exit_minus_ok) {
      double dm = rm[size_t(m[k])] - rm[size_t(m[k - 1])];
      rep.max_slack = std::max(rep.max_slack, dm - d0);
      if (dm - d0 > tol) ++rep.inequality_violations;
      ++rep.pairs_checked;
    }
  }
  if (rep.pairs_checked == 0) rep.max_slack = 0.0;
  return rep;
}

}  // namespace kpz
