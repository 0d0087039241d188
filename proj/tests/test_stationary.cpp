#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kpzlab/parallel.hpp"
#include "kpzlab/stationary.hpp"
#include "kpzlab/stats.hpp"

using namespace kpz;

namespace {
double exp_cdf(double rate, double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-rate * x); }
}  // namespace

TEST_CASE("burke increments: KS inside the stated band at rho=1/2, n=200") {
  auto inc = burke_samples(0.5, 200, 1000, 100, 2026);
  REQUIRE(inc.size() == 100'000);
  for (double x : inc) REQUIRE(x >= 0.0);
  double d = ks_distance(EmpiricalDistribution(inc), [](double x) { return exp_cdf(0.5, x); });
  CHECK(d <= 0.0195);  // documented loose band; the tight DKW one is in acceptance
}

TEST_CASE("burke increments: mean at rho=0.7") {
  auto inc = burke_samples(0.7, 100, 500, 200, 7);
  CHECK(mean(inc) == doctest::Approx(1.0 / 0.3).epsilon(0.015));
}

TEST_CASE("burke increments stay exponential at n=1") {
  auto inc = burke_samples(0.4, 1, 1000, 50, 99);
  double d = ks_distance(EmpiricalDistribution(inc), [](double x) { return exp_cdf(0.6, x); });
  CHECK(d <= dkw_epsilon(int64_t(inc.size()), 0.001));
}

TEST_CASE("b_process starts at zero and has the exact Burke variance") {
  std::vector<double> grid = {0.0, 0.25, 0.5, 1.0};
  auto s = b_process(1.0, 0.0, +1, 400, grid, 5);
  CHECK(s.value[0] == 0.0);

  // Var(B(u)) equals (#increments)/((1-rho)^2 beta2^2 n^{2/3}), about 2u;
  // the sign of the answer is independent of gamma.
  for (double gamma : {1.0, 2.0}) {
    const int64_t n = 1000, R = 4000;
    SlopeParams sp(gamma);
    int64_t m0 = horizontal_target(gamma, n, 0.0);
    int64_t m1 = horizontal_target(gamma, n, 1.0);
    double analytic = double(m1 - m0) / ((1.0 - sp.rho0()) * (1.0 - sp.rho0()) * sp.beta2() *
                                         sp.beta2() * std::pow(double(n), 2.0 / 3.0));
    CHECK(analytic == doctest::Approx(2.0).epsilon(0.02));

    std::vector<double> b1(static_cast<size_t>(R));
    std::vector<double> g2 = {0.0, 1.0};
    parallel_replicas(R, resolve_threads(0), [&](int64_t r) {
      auto smp = b_process(gamma, 0.0, +1, n, g2, derive_seed(4242, uint64_t(r), 1));
      b1[size_t(r)] = smp.value[1];
    });
    CHECK(sample_variance(b1) == doctest::Approx(analytic).epsilon(0.05));
  }
}

TEST_CASE("b_process sup over [0, 0.1] obeys the Brownian tail band") {
  // P(sup |B| > 1) <= exp(-1/(2*0.1*sigma^2)) with sigma^2 = 2
  const int64_t n = 500, R = 4000;
  std::vector<double> grid;
  for (int k = 0; k <= 4; ++k) grid.push_back(0.025 * k);
  std::vector<uint8_t> hit(size_t(R), 0);
  parallel_replicas(R, resolve_threads(0), [&](int64_t r) {
    auto smp = b_process(1.0, 0.0, +1, n, grid, derive_seed(888, uint64_t(r), 2));
    for (double v : smp.value)
      if (std::abs(v) > 1.0) hit[size_t(r)] = 1;
  });
  double p = 0.0;
  for (auto h : hit) p += h;
  p /= double(R);
  CHECK(p <= 1.5 * std::exp(-1.0 / (2.0 * 0.1 * 2.0)));
}

TEST_CASE("b_process guards") {
  std::vector<double> g = {0.0, 1.0};
  CHECK_THROWS_AS(b_process(1.0, 40.0, +1, 8, g, 1), std::invalid_argument);  // rho leaves (0,1)
}

TEST_CASE("exit probability: symmetric at kappa=0, saturating at kappa=3") {
  auto p0 = exit_probability(1.0, 500, 0.0, +1, 0.0, 1200, 31, resolve_threads(0));
  CHECK(p0.p_hat == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(p0.p_hat - 0.5) < 0.05);

  auto p3 = exit_probability(1.0, 500, 3.0, +1, 0.0, 400, 32, resolve_threads(0));
  CHECK(p3.p_hat >= 0.95);

  auto plo = exit_probability(1.0, 500, 0.5, +1, 0.0, 800, 33, resolve_threads(0));
  auto phi = exit_probability(1.0, 500, 2.0, +1, 0.0, 800, 33, resolve_threads(0));
  CHECK(phi.p_hat >= plo.p_hat - (plo.ci_hi - plo.ci_lo));
}

TEST_CASE("exit probability is symmetric under gamma -> 1/gamma with sign flip") {
  auto a = exit_probability(1.5, 300, 1.0, +1, 0.0, 800, 55, resolve_threads(0));
  auto b = exit_probability(1.0 / 1.5, 300, 1.0, -1, 0.0, 800, 56, resolve_threads(0));
  CHECK(std::abs(a.p_hat - b.p_hat) < 0.06);
}

TEST_CASE("comparison check: clean on exit events, trivial on equal pairs") {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(-1.0 + 0.2 * k);
  int64_t ok = 0, checked = 0, violations = 0;
  for (int64_t r = 0; r < 300; ++r) {
    auto rep = comparison_check(1.0, 2.0, 200, 1.0, 1.0, grid, derive_seed(606, uint64_t(r), 3));
    violations += rep.inequality_violations;
    if (rep.exit_plus_ok && rep.exit_minus_ok) ++ok;
    checked += rep.pairs_checked;
  }
  CHECK(violations == 0);
  CHECK(checked > 0);
  CHECK(double(ok) / 300.0 >= 0.85);
}

TEST_CASE("comparison rescaled form with the exact coefficient equals the raw form") {
  // algebra check on one realization: the rescaled inequality margin equals
  // the raw margin divided by beta2 n^{1/3}
  const double gamma = 1.0, kappa = 2.0;
  const int64_t n = 200;
  SlopeParams sp(gamma);
  const double n13 = std::cbrt(double(n));
  const double n23 = n13 * n13;
  const double rho_p = rho_pm(gamma, kappa, n, +1);
  const double rho_0 = sp.rho0();

  WeightField w0(777, {0, 0}, horizontal_target(gamma, n, 1.0), n, BoundaryMode::ZeroBoundary);
  WeightField wp(777, {0, 0}, horizontal_target(gamma, n, 1.0), n, BoundaryMode::Stationary,
                 rho_p);
  auto r0 = solve_passage(w0, Storage::RollingRow);
  auto rp = solve_passage(wp, Storage::RollingRow);

  auto resc = [&](double L, double u) { return rescale_horizontal(L, n, gamma, u).value; };
  auto bval = [&](double Lm, double L0, double u) {
    return (Lm - L0 - sp.beta1() * u * n23 / (1.0 - rho_p)) / (sp.beta2() * n13);
  };
  const double remainder_coeff = sp.beta1() * kappa / (sp.beta2() * (1.0 - rho_p) * (1.0 - rho_0));

  for (double u : {0.3, 0.7, 1.0}) {
    double v = -0.5;
    int64_t mu = horizontal_target(gamma, n, u), mv = horizontal_target(gamma, n, v);
    int64_t m0 = horizontal_target(gamma, n, 0.0);
    double raw_margin = (rp.at(mu, n) - rp.at(mv, n)) - (r0.at(mu, n) - r0.at(mv, n));
    double lhs = resc(r0.at(mu, n), u) - resc(r0.at(mv, n), v);
    double rhs = bval(rp.at(mu, n), rp.at(m0, n), u) - bval(rp.at(mv, n), rp.at(m0, n), v) +
                 (u * u - v * v) + remainder_coeff * (u - v);
    CHECK(rhs - lhs == doctest::Approx(raw_margin / (sp.beta2() * n13)).epsilon(1e-10));
  }
}

TEST_CASE("comparison check rejects bad grids") {
  std::vector<double> bad = {0.5, 0.2};
  CHECK_THROWS_AS(comparison_check(1.0, 1.0, 100, 1.0, 1.0, bad, 1), std::invalid_argument);
}
