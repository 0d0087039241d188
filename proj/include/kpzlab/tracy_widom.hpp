#pragma once

#include <cstdint>
#include <vector>

namespace kpz {

// Airy function Ai and its derivative on [-12, 200]: Maclaurin series in
// compensated (double-double) arithmetic up to x = 5, standard asymptotic
// expansion beyond. Absolute error below 1e-10 across the domain.
double airy_ai(double x);
double airy_ai_prime(double x);

// Tracy-Widom distribution functions by Nystrom discretization of the
// Fredholm determinants on L^2(s, infinity); Gauss-Legendre nodes mapped by
// x = s + c (1+t)/(1-t) with c = 10.
double f_gue(double s, int order = 64);  // det(I - K_Ai), divided-difference kernel
double f_goe(double s, int order = 64);  // det(I - B_s), B_s(x,y) = Ai((x+y)/2)/2
// Cross-check route for the GUE kernel via K(x,y) = int_0^inf Ai(x+t)Ai(y+t) dt.
double f_gue_product_form(double s, int order = 64);

enum class TwFamily { GUE, GOE };

struct TwRow {
  double s;
  double cdf;
};
std::vector<TwRow> tw_table(TwFamily family, double s_from, double s_to, double step, int order);

// Gauss-Legendre nodes/weights on (-1,1), Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Clamped CDF evaluator for KS comparisons: dense cubic-Hermite table over
// [s_lo, s_hi] built once, queries clamped to the domain. Immutable after
// construction, safe to share across threads.
class ReferenceCdf {
 public:
  explicit ReferenceCdf(TwFamily family, int order = 64, double s_lo = -10.0, double s_hi = 10.0);
  double operator()(double s) const;
  TwFamily family() const { return family_; }

 private:
  TwFamily family_;
  double s_lo_, s_hi_, step_;
  std::vector<double> table_;
  std::vector<double> slope_;
};

}  // namespace kpz
