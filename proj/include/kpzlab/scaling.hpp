#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "kpzlab/lattice.hpp"

namespace kpz {

// Scaling constants for the horizontal point-to-point process in direction
// (gamma^2 n, n).
struct SlopeParams {
  double gamma;
  explicit SlopeParams(double g) : gamma(g) {
    if (!(g > 0.0)) throw std::invalid_argument("SlopeParams: gamma must be positive");
  }
  double beta1() const { return 2.0 * std::pow(1.0 + gamma, 2.0 / 3.0) * std::pow(gamma, 4.0 / 3.0); }
  double beta2() const { return std::pow(1.0 + gamma, 4.0 / 3.0) / std::cbrt(gamma); }
  double rho0() const { return 1.0 / (1.0 + gamma); }
};

struct DensityParams {
  double rho;
  explicit DensityParams(double r) : rho(r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("DensityParams: rho must be in (0,1)");
  }
  double chi() const { return rho * (1.0 - rho); }
  // characteristic direction e_rho = ((1-rho)^2, rho^2)
  double e_i() const { return (1.0 - rho) * (1.0 - rho); }
  double e_j() const { return rho * rho; }
};

enum class LimitLaw { PointGue, FlatGoe, CurrentGoe };

struct RescaledSample {
  double value = 0.0;
  LimitLaw law = LimitLaw::PointGue;
  int64_t size = 0;   // n or N (t is carried in arg-metadata by the harness)
  double shape = 0.0; // gamma or rho
  double arg = 0.0;   // u or w
};

// mu(m,n) = (sqrt(m)+sqrt(n))^2, the law-of-large-numbers centering.
inline double mu_pp(int64_t m, int64_t n) {
  if (m < 0 || n < 0) throw std::invalid_argument("mu_pp: coordinates must be nonnegative");
  double r = std::sqrt(double(m)) + std::sqrt(double(n));
  return r * r;
}

// Lattice targets like gamma^2 n + beta1 u n^{2/3} are floored.
inline int64_t lattice_floor(double x) { return int64_t(std::floor(x)); }

inline int64_t horizontal_target(double gamma, int64_t n, double u) {
  SlopeParams sp(gamma);
  return lattice_floor(gamma * gamma * double(n) + sp.beta1() * u * std::pow(double(n), 2.0 / 3.0));
}

// Polynomial centering of the rescaled horizontal process: the square-root
// centering expanded to order n^{1/3}, which avoids the cancellation in the
// square root at large n.
inline RescaledSample rescale_horizontal(double L, int64_t n, double gamma, double u) {
  if (n < 1) throw std::invalid_argument("rescale_horizontal: n must be >= 1");
  SlopeParams sp(gamma);
  double n13 = std::cbrt(double(n));
  double n23 = n13 * n13;
  double center = (1.0 + gamma) * (1.0 + gamma) * double(n) +
                  2.0 * u * std::pow(1.0 + gamma, 5.0 / 3.0) * std::cbrt(gamma) * n23 -
                  sp.beta2() * u * u * n13;
  return {(L - center) / (sp.beta2() * n13), LimitLaw::PointGue, n, gamma, u};
}

// End point E_N(w) of the line-to-point problem. A single rounding at the
// end, half away from zero, reproduces the documented lattice targets.
inline LatticePoint endpoint_EN(double rho, double w, int64_t N) {
  DensityParams dp(rho);
  double n23 = std::pow(double(N), 2.0 / 3.0);
  double c = 2.0 * w * std::pow(dp.chi(), -1.0 / 3.0) * n23;
  double m = (1.0 - rho) / rho * double(N) - c * (1.0 - rho);
  double n = rho / (1.0 - rho) * double(N) + c * rho;
  if (!(m >= 1.0) || !(n >= 1.0))
    throw std::invalid_argument("endpoint_EN: endpoint coordinate not positive");
  return {int64_t(std::llround(m)), int64_t(std::llround(n))};
}

// Anchor A^flat(v) on the flat line, same rounding convention.
inline LatticePoint flat_anchor(double rho, double v, int64_t N) {
  DensityParams dp(rho);
  double n23 = std::pow(double(N), 2.0 / 3.0);
  double c = 2.0 * std::pow(dp.chi(), -1.0 / 3.0) * v * n23;
  return {int64_t(std::llround(-c * (1.0 - rho))), int64_t(std::llround(c * rho))};
}

inline RescaledSample rescale_line_to_point(double L, double rho, int64_t N) {
  if (N < 1) throw std::invalid_argument("rescale_line_to_point: N must be >= 1");
  DensityParams dp(rho);
  double s = (L - double(N) / dp.chi()) * std::pow(dp.chi(), 2.0 / 3.0) / std::cbrt(double(N));
  return {s, LimitLaw::FlatGoe, N, rho, 0.0};
}

inline double invert_line_to_point(double s, double rho, int64_t N) {
  DensityParams dp(rho);
  return double(N) / dp.chi() + s * std::cbrt(double(N)) / std::pow(dp.chi(), 2.0 / 3.0);
}

// J(t) >= chi t - s chi^{2/3} t^{1/3}; the sample is compared against
// s -> F_GOE(2^{2/3} s).
inline RescaledSample rescale_current(int64_t J, double t, double rho) {
  if (!(t > 0.0)) throw std::invalid_argument("rescale_current: t must be positive");
  DensityParams dp(rho);
  double s = (dp.chi() * t - double(J)) / (std::pow(dp.chi(), 2.0 / 3.0) * std::cbrt(t));
  return {s, LimitLaw::CurrentGoe, int64_t(t), rho, 0.0};
}

inline double rho_pm(double gamma, double kappa, int64_t n, int sign) {
  if (n < 1) throw std::invalid_argument("rho_pm: n must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("rho_pm: sign must be +-1");
  double r = SlopeParams(gamma).rho0() + double(sign) * kappa / std::cbrt(double(n));
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("rho_pm: density left (0,1); kappa too large for n");
  return r;
}

inline double kappa_tilde(double kappa, double M, double gamma) {
  return kappa - M * std::cbrt(gamma) * std::pow(1.0 + gamma, -4.0 / 3.0);
}

}  // namespace kpz
