#include "kpzlab/tracy_widom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpz {

namespace {

// --- double-double arithmetic for the compensated Maclaurin series --------

struct dd {
  double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  dd r = two_sum(s.hi, s.lo);
  return r;
}

inline dd dd_mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  dd r = two_sum(p.hi, p.lo);
  return r;
}

inline dd dd_mul(dd a, double b) { return dd_mul(a, dd{b, 0.0}); }

inline dd dd_div(dd a, double b) {
  double q1 = a.hi / b;
  dd p = two_prod(q1, b);
  double q2 = ((a.hi - p.hi) - p.lo + a.lo) / b;
  return two_sum(q1, q2);
}

// Ai(0) and -Ai'(0): 3^{-2/3}/Gamma(2/3) and 3^{-1/3}/Gamma(1/3)
constexpr double kC1Hi = 0.3550280538878172;
constexpr double kC1Lo = 2.05233632436212e-17;
constexpr double kC2Hi = 0.2588194037928068;
constexpr double kC2Lo = -2.522243111610832e-17;

struct AiryPair {
  double ai, aip;
};

// Maclaurin series for Ai, Ai' on [-12, 5]. The two auxiliary series f, g
// and their derivatives satisfy the term recurrences
//   f_{k+1} = f_k x^3 / ((3k+3)(3k+2)),   g_{k+1} = g_k x^3 / ((3k+4)(3k+3)),
//   f'_{k+1} = f'_k x^3 / ((3k)(3k+2)),   g'_{k+1} = g'_k x^3 / ((3k+1)(3k+3)),
// all evaluated in double-double to survive the cancellation at x << 0.
AiryPair airy_series(double x) {
  dd x3 = dd_mul(dd_mul(dd{x, 0.0}, dd{x, 0.0}), dd{x, 0.0});
  dd f{1.0, 0.0}, g{x, 0.0};
  dd fp{0.0, 0.0}, gp{1.0, 0.0};
  dd sf = f, sg = g, sfp = fp, sgp = gp;
  dd tf = f, tg = g, tfp{0.5 * x * x, 0.0}, tgp = gp;
  // tfp seeds f'_1 = x^2/2 directly
  sfp = dd_add(sfp, tfp);
  for (int k = 0; k < 120; ++k) {
    double K = double(k);
    tf = dd_div(dd_mul(tf, x3), (3 * K + 3) * (3 * K + 2));
    tg = dd_div(dd_mul(tg, x3), (3 * K + 4) * (3 * K + 3));
    sf = dd_add(sf, tf);
    sg = dd_add(sg, tg);
    if (k >= 1) {
      tfp = dd_div(dd_mul(tfp, x3), (3 * K) * (3 * K + 2));
      sfp = dd_add(sfp, tfp);
    }
    tgp = dd_div(dd_mul(tgp, x3), (3 * K + 1) * (3 * K + 3));
    sgp = dd_add(sgp, tgp);
    if (std::abs(tf.hi) < 1e-26 && std::abs(tg.hi) < 1e-26 && std::abs(tfp.hi) < 1e-26 &&
        std::abs(tgp.hi) < 1e-26)
      break;
  }
  dd c1{kC1Hi, kC1Lo}, c2{kC2Hi, kC2Lo};
  dd ai = dd_add(dd_mul(c1, sf), dd_mul(dd_mul(c2, sg), -1.0));
  dd aip = dd_add(dd_mul(c1, sfp), dd_mul(dd_mul(c2, sgp), -1.0));
  return {ai.hi + ai.lo, aip.hi + aip.lo};
}

// Asymptotic expansion for x > 5 (DLMF 9.7.5/9.7.6).
AiryPair airy_asymptotic(double x) {
  double zeta = (2.0 / 3.0) * x * std::sqrt(x);
  if (zeta > 740.0) return {0.0, 0.0};  // e^{-zeta} underflows
  double pre = std::exp(-zeta) / (2.0 * std::sqrt(M_PI));
  double x14 = std::pow(x, 0.25);
  double su = 1.0, sv = 1.0;
  double u = 1.0, term_u = 1.0;
  double sign = -1.0;
  double prev = 1.0;
  for (int k = 1; k <= 40; ++k) {
    double K = double(k);
    u *= (6 * K - 5) * (6 * K - 3) * (6 * K - 1) / ((2 * K - 1) * 216.0 * K);
    term_u = u / std::pow(zeta, K);
    if (term_u > prev) break;  // past the optimal truncation point
    prev = term_u;
    su += sign * term_u;
    double v = (6 * K + 1) / (1 - 6 * K) * u;
    sv += sign * v / std::pow(zeta, K);
    if (term_u < 1e-20) break;
    sign = -sign;
  }
  return {pre / x14 * su, -pre * x14 * sv};
}

// The series stays in play slightly past 5 so that finite-difference
// stencils at x = 5 never straddle the seam: the asymptotic branch has an
// optimal-truncation floor of a few 1e-12 there, which a 1e-4 step second
// difference would amplify past the documented residual bound.
AiryPair airy_both(double x) {
  if (x <= 5.5) return airy_series(x);
  return airy_asymptotic(x);
}

// Kernel-internal evaluator: quadrature nodes run to +infinity where Ai
// underflows to zero well inside double range.
inline double ai_kernel(double x) {
  if (x > 200.0) return 0.0;
  return airy_ai(x);
}
inline AiryPair ai_pair_kernel(double x) {
  if (x > 200.0) return {0.0, 0.0};
  return airy_both(x);
}

// --- Nystrom machinery ----------------------------------------------------

constexpr double kMapScale = 10.0;  // c in x = s + c(1+t)/(1-t)

struct Quadrature {
  std::vector<double> x;   // mapped nodes on (s, infinity)
  std::vector<double> sw;  // sqrt(w_i * dx/dt)
};

Quadrature mapped_rule(double s, int order) {
  std::vector<double> t, w;
  gauss_legendre(order, t, w);
  Quadrature q;
  q.x.resize(static_cast<size_t>(order));
  q.sw.resize(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) {
    double om = 1.0 - t[size_t(i)];
    q.x[size_t(i)] = s + kMapScale * (1.0 + t[size_t(i)]) / om;
    q.sw[size_t(i)] = std::sqrt(w[size_t(i)] * 2.0 * kMapScale / (om * om));
  }
  return q;
}

// det(I - M) by LU with partial pivoting; M is order x order, overwritten.
double det_I_minus(std::vector<double>& K, int n) {
  std::vector<double> a(size_t(n) * size_t(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[size_t(i) * size_t(n) + size_t(j)] = double(i == j) - K[size_t(i) * size_t(n) + size_t(j)];
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a[size_t(col) * size_t(n) + size_t(col)]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a[size_t(r) * size_t(n) + size_t(col)]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j)
        std::swap(a[size_t(piv) * size_t(n) + size_t(j)], a[size_t(col) * size_t(n) + size_t(j)]);
      det = -det;
    }
    double d = a[size_t(col) * size_t(n) + size_t(col)];
    det *= d;
    for (int r = col + 1; r < n; ++r) {
      double f = a[size_t(r) * size_t(n) + size_t(col)] / d;
      if (f == 0.0) continue;
      for (int j = col + 1; j < n; ++j)
        a[size_t(r) * size_t(n) + size_t(j)] -= f * a[size_t(col) * size_t(n) + size_t(j)];
    }
  }
  return det;
}

void check_args(double s, int order, const char* who) {
  if (order < 8) throw std::invalid_argument(std::string(who) + ": order must be >= 8");
  if (!(s >= -10.0 && s <= 10.0))
    throw std::domain_error(std::string(who) + ": s outside [-10, 10]");
}

double clamp_prob(double det, const char* who) {
  if (det < -1e-6 || det > 1.0 + 1e-6)
    throw std::runtime_error(std::string(who) + ": determinant escaped [0,1]");
  return std::min(1.0, std::max(0.0, det));
}

}  // namespace

double airy_ai(double x) {
  if (!(x >= -12.0 && x <= 200.0)) throw std::domain_error("airy_ai: x outside [-12, 200]");
  return airy_both(x).ai;
}

double airy_ai_prime(double x) {
  if (!(x >= -12.0 && x <= 200.0)) throw std::domain_error("airy_ai_prime: x outside [-12, 200]");
  return airy_both(x).aip;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  nodes.assign(size_t(n), 0.0);
  weights.assign(size_t(n), 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = double(n) * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[size_t(i)] = -z;
    nodes[size_t(n - 1 - i)] = z;
    weights[size_t(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[size_t(n - 1 - i)] = weights[size_t(i)];
  }
}

double f_gue(double s, int order) {
  check_args(s, order, "f_gue");
  Quadrature q = mapped_rule(s, order);
  std::vector<double> ai(static_cast<size_t>(order)), aip(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) {
    AiryPair p = ai_pair_kernel(q.x[size_t(i)]);
    ai[size_t(i)] = p.ai;
    aip[size_t(i)] = p.aip;
  }
  std::vector<double> K(size_t(order) * size_t(order));
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      double xi = q.x[size_t(i)], xj = q.x[size_t(j)];
      double val;
      if (std::abs(xi - xj) < 1e-6) {
        val = aip[size_t(i)] * aip[size_t(i)] - xi * ai[size_t(i)] * ai[size_t(i)];
      } else {
        val = (ai[size_t(i)] * aip[size_t(j)] - aip[size_t(i)] * ai[size_t(j)]) / (xi - xj);
      }
      K[size_t(i) * size_t(order) + size_t(j)] = q.sw[size_t(i)] * val * q.sw[size_t(j)];
    }
  }
  return clamp_prob(det_I_minus(K, order), "f_gue");
}

double f_gue_product_form(double s, int order) {
  check_args(s, order, "f_gue_product_form");
  Quadrature q = mapped_rule(s, order);
  // t-integral over (0, infinity) with the same rational map anchored at 0
  Quadrature qt = mapped_rule(0.0, order);
  std::vector<double> B(size_t(order) * size_t(order));
  for (int i = 0; i < order; ++i)
    for (int k = 0; k < order; ++k)
      B[size_t(i) * size_t(order) + size_t(k)] =
          ai_kernel(q.x[size_t(i)] + qt.x[size_t(k)]) * qt.sw[size_t(k)];
  std::vector<double> K(size_t(order) * size_t(order));
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      double acc = 0.0;
      for (int k = 0; k < order; ++k)
        acc += B[size_t(i) * size_t(order) + size_t(k)] * B[size_t(j) * size_t(order) + size_t(k)];
      K[size_t(i) * size_t(order) + size_t(j)] = q.sw[size_t(i)] * acc * q.sw[size_t(j)];
    }
  }
  return clamp_prob(det_I_minus(K, order), "f_gue_product_form");
}

double f_goe(double s, int order) {
  check_args(s, order, "f_goe");
  Quadrature q = mapped_rule(s, order);
  std::vector<double> K(size_t(order) * size_t(order));
  for (int i = 0; i < order; ++i) {
    for (int j = i; j < order; ++j) {
      double val = 0.5 * ai_kernel(0.5 * (q.x[size_t(i)] + q.x[size_t(j)]));
      double e = q.sw[size_t(i)] * val * q.sw[size_t(j)];
      K[size_t(i) * size_t(order) + size_t(j)] = e;
      K[size_t(j) * size_t(order) + size_t(i)] = e;
    }
  }
  return clamp_prob(det_I_minus(K, order), "f_goe");
}

std::vector<TwRow> tw_table(TwFamily family, double s_from, double s_to, double step, int order) {
  if (!(s_from < s_to) || !(step > 0.0)) throw std::invalid_argument("tw_table: bad range/step");
  int64_t count = int64_t(std::floor((s_to - s_from) / step + 1e-9)) + 1;
  std::vector<TwRow> rows;
  rows.reserve(static_cast<size_t>(count));
  for (int64_t k = 0; k < count; ++k) {
    double s = s_from + double(k) * step;
    double f = family == TwFamily::GUE ? f_gue(s, order) : f_goe(s, order);
    rows.push_back({s, f});
  }
  return rows;
}

ReferenceCdf::ReferenceCdf(TwFamily family, int order, double s_lo, double s_hi)
    : family_(family), s_lo_(s_lo), s_hi_(s_hi) {
  if (!(s_lo < s_hi)) throw std::invalid_argument("ReferenceCdf: bad domain");
  step_ = 1.0 / 128.0;
  int64_t count = int64_t(std::ceil((s_hi - s_lo) / step_)) + 1;
  table_.resize(static_cast<size_t>(count));
  for (int64_t k = 0; k < count; ++k) {
    double s = std::min(s_hi, s_lo + double(k) * step_);
    table_[size_t(k)] = family == TwFamily::GUE ? f_gue(s, order) : f_goe(s, order);
  }
  slope_.resize(table_.size());
  for (size_t k = 0; k < table_.size(); ++k) {
    if (k == 0)
      slope_[k] = (table_[1] - table_[0]) / step_;
    else if (k + 1 == table_.size())
      slope_[k] = (table_[k] - table_[k - 1]) / step_;
    else
      slope_[k] = (table_[k + 1] - table_[k - 1]) / (2.0 * step_);
  }
}

double ReferenceCdf::operator()(double s) const {
  if (s <= s_lo_) return table_.front();
  if (s >= s_hi_) return table_.back();
  double u = (s - s_lo_) / step_;
  size_t k = std::min(size_t(u), table_.size() - 2);
  double t = u - double(k);
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  double h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  double v = h00 * table_[k] + h10 * step_ * slope_[k] + h01 * table_[k + 1] +
             h11 * step_ * slope_[k + 1];
  return std::min(1.0, std::max(0.0, v));
}

}  // namespace kpz
