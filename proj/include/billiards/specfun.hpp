#pragma once

// Bessel and Hankel functions of integer order.
//
// Evaluation envelope (|order| <= 60, |z| <= 1e4):
//   |z| < 12        power series
//   12 <= |z| <= 40 Miller downward recurrence for J, Neumann series for Y0/Y1
//   |z| > 40        Hankel asymptotic expansion for orders 0 and 1
// Higher Y orders always come from upward recurrence, which is stable.
// Complex Y is obtained from H1 and J rather than evaluated directly.

#include <complex>
#include <span>

namespace billiards::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 60;
inline constexpr double kMaxArgument = 1e4;

cplx bessel_j(int order, cplx z);
double bessel_j(int order, double x);

/// Y_order(x) for real x > 0.
double bessel_y(int order, double x);
cplx bessel_y(int order, cplx z);

cplx hankel1(int order, cplx z);
/// d/dz H1_order(z) = H1_{order-1}(z) - (order/z) H1_order(z).
cplx hankel1_prime(int order, cplx z);

/// J'_order(z) = (J_{order-1} - J_{order+1}) / 2.
cplx bessel_j_prime(int order, cplx z);

/// J_0..J_max_order and Y_0..Y_max_order at one argument; both spans must
/// hold max_order + 1 entries. z must be nonzero.
void bessel_jy_sequence(int max_order, cplx z, std::span<cplx> j, std::span<cplx> y);

/// Orders 0 and 1 together, the only ones the layer kernels need.
struct Cylinder01 {
  cplx j0, j1, h0, h1;
};
/// Taylor tables on unit cells for 0 <= Re z < 64, -4 <= Im z < 2 (built
/// once from cylinder01_direct), direct evaluation elsewhere.
Cylinder01 cylinder01(cplx z);
Cylinder01 cylinder01_direct(cplx z);

struct RealCylinder01 {
  double j0, j1, y0, y1;
};
/// Piecewise Chebyshev table for 0 < x < 64 (built once from
/// cylinder01_direct), direct evaluation beyond.
RealCylinder01 cylinder01(double x);
/// Series / Miller recurrence / asymptotics without the table.
RealCylinder01 cylinder01_direct(double x);

}  // namespace billiards::specfun
