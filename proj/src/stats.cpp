#include "kpzlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpz {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) throw std::invalid_argument("EmpiricalDistribution: empty sample set");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return double(it - samples_.begin()) / double(samples_.size());
}

double EmpiricalDistribution::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0,1]");
  if (q == 0.0) return samples_.front();
  size_t k = size_t(std::ceil(q * double(samples_.size())));
  return samples_[std::min(k, samples_.size()) - 1];
}

double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& ref) {
  const auto& xs = emp.samples();
  const double n = double(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double f = ref(xs[i]);
    d = std::max(d, std::max(double(i + 1) / n - f, f - double(i) / n));
  }
  return d;
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& xa = a.samples();
  const auto& xb = b.samples();
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < xa.size() && j < xb.size()) {
    double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] <= x) ++i;
    while (j < xb.size() && xb[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / double(xa.size()) - double(j) / double(xb.size())));
  }
  return d;
}

double dkw_epsilon(int64_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("dkw_epsilon: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("dkw_epsilon: alpha in (0,1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * double(n)));
}

double modulus_of_continuity(std::span<const double> u_grid, std::span<const double> values,
                             double delta, double M) {
  if (u_grid.size() != values.size() || u_grid.empty())
    throw std::invalid_argument("modulus_of_continuity: grid/value size mismatch");
  if (!(delta > 0.0 && M > 0.0)) throw std::invalid_argument("modulus_of_continuity: bad delta/M");
  if (u_grid.front() > -M || u_grid.back() < M)
    throw std::invalid_argument("modulus_of_continuity: grid does not cover [-M, M]");
  for (size_t i = 1; i < u_grid.size(); ++i)
    if (u_grid[i] - u_grid[i - 1] > delta / 4.0 + 1e-12)
      throw std::invalid_argument("modulus_of_continuity: grid spacing exceeds delta/4");
  double w = 0.0;
  for (size_t i = 0; i < u_grid.size(); ++i) {
    if (u_grid[i] < -M || u_grid[i] > M) continue;
    for (size_t j = i + 1; j < u_grid.size(); ++j) {
      if (u_grid[j] > M || u_grid[j] - u_grid[i] > delta) break;
      w = std::max(w, std::abs(values[j] - values[i]));
    }
  }
  return w;
}

LocationHistogram location_histogram(std::span<const double> vs, double bin_width,
                                     std::span<const double> thresholds) {
  if (vs.empty()) throw std::invalid_argument("location_histogram: empty sample set");
  if (!(bin_width > 0.0)) throw std::invalid_argument("location_histogram: bad bin width");
  LocationHistogram h;
  h.bin_width = bin_width;
  h.n = int64_t(vs.size());
  double vmin = *std::min_element(vs.begin(), vs.end());
  double vmax = *std::max_element(vs.begin(), vs.end());
  int64_t b_lo = int64_t(std::floor(vmin / bin_width));
  int64_t b_hi = int64_t(std::floor(vmax / bin_width));
  h.lo = double(b_lo) * bin_width;
  h.counts.assign(size_t(b_hi - b_lo + 1), 0);
  for (double v : vs) {
    int64_t b = int64_t(std::floor(v / bin_width)) - b_lo;
    ++h.counts[size_t(b)];
  }
  h.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double M : thresholds) {
    int64_t exceed = 0;
    for (double v : vs)
      if (std::abs(v) > M) ++exceed;
    h.tail_mass.push_back(double(exceed) / double(vs.size()));
  }
  return h;
}

double linear_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_slope: need at least two points");
  double mx = mean(x), my = mean(y), num = 0.0, den = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

double sample_variance(std::span<const double> xs) {
  double m = mean(xs), s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / double(xs.size() - 1);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty");
  size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  double hi = xs[mid];
  if (xs.size() % 2 == 1) return hi;
  std::nth_element(xs.begin(), xs.begin() + mid - 1, xs.end());
  return 0.5 * (xs[mid - 1] + hi);
}

}  // namespace kpz
