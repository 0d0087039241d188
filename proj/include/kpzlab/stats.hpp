#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kpz {

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);  // sorts

  int64_t n() const { return int64_t(samples_.size()); }
  const std::vector<double>& samples() const { return samples_; }
  // right-continuous ECDF
  double ecdf(double x) const;
  // order-statistic quantile, q in [0,1]
  double quantile(double q) const;

 private:
  std::vector<double> samples_;
};

// sup_x |ECDF - ref| against a continuous reference, evaluating both
// one-sided gaps at every order statistic (the sup is attained there).
double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& ref);

// two-sample KS distance
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// DKW band: P(sup |F_n - F| > eps) <= alpha for eps = sqrt(ln(2/alpha)/(2n)).
double dkw_epsilon(int64_t n, double alpha);

// Modulus of continuity of grid samples f(u) over [-M, M]:
// max |f(u)-f(v)| over grid pairs with |u-v| <= delta. The grid must cover
// [-M, M] with spacing at most delta/4.
double modulus_of_continuity(std::span<const double> u_grid, std::span<const double> values,
                             double delta, double M);

struct LocationHistogram {
  double bin_width = 0.0;
  double lo = 0.0;                  // left edge of the first bin
  std::vector<int64_t> counts;
  std::vector<double> thresholds;   // M values
  std::vector<double> tail_mass;    // empirical P(|v| > M)
  int64_t n = 0;
};

LocationHistogram location_histogram(std::span<const double> vs, double bin_width,
                                     std::span<const double> thresholds);

// Least-squares slope of y against x.
double linear_slope(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double median(std::vector<double> xs);

}  // namespace kpz
