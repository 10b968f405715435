#pragma once

#include "quasisol/detail/dual.hpp"

// Pointwise nonlinear kernels shared by residual evaluation and Jacobian
// assembly. Templated on the scalar so that Dual<N> yields exact partials.
namespace quasisol::detail {

struct RadialOperatorValue {
  double re;
  double im;
};

// Radial L(phi) at one node, given phi = a + i b, its s-derivative
// (as, bs) and its Laplacian 4 s phi_ss + 2 d phi_s = (la, lb).
template <class T>
void radial_operator_point(const T& a, const T& b, const T& as, const T& bs, const T& la, const T& lb,
                           double s, int alpha, T& out_re, T& out_im) {
  const T q = a * a + b * b;
  const T q_am1 = ipow(q, alpha - 1);
  const T p = q_am1 * q;
  const T denom = 1.0 - p;
  const T inv = 1.0 / denom;
  const T common = (4.0 * s * alpha) * q_am1 * inv * inv;
  const T g = a * as + b * bs;
  const T h = as * as + bs * bs;
  out_re = -la * inv + common * (h * a - 2.0 * g * as) - p * a;
  out_im = -lb * inv + common * (h * b - 2.0 * g * bs) - p * b;
}

// Ground-state equation in s = r^2:
// 4 s phi'' + 2 d phi' + (phi^{2a+1} - omega phi)(1 - phi^{2a})
//   + 4 a s (phi')^2 phi^{2a-1} / (1 - phi^{2a}).
template <class T>
T groundstate_point(const T& phi, const T& dphi, const T& d2phi, double s, int dim, int alpha, double omega) {
  const T p_m1 = ipow(phi, 2 * alpha - 1);
  const T p = p_m1 * phi;
  const T denom = 1.0 - p;
  return (4.0 * s) * d2phi + (2.0 * dim) * dphi + (p * phi - omega * phi) * denom +
         (4.0 * alpha * s) * dphi * dphi * p_m1 / denom;
}

// Semilinear limit -Delta psi + psi - psi^{2a+1} = 0 in s, sign-flipped to
// 4 s psi'' + 2 d psi' - psi + psi^{2a+1}.
template <class T>
T semilinear_point(const T& psi, const T& dpsi, const T& d2psi, double s, int dim, int alpha) {
  return (4.0 * s) * d2psi + (2.0 * dim) * dpsi - psi + ipow(psi, 2 * alpha + 1);
}

}  // namespace quasisol::detail
