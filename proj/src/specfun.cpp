#include "billiards/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "billiards/errors.hpp"

namespace billiards::specfun {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr double kAsymptoticLimit = 40.0;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Real and complex paths share the same algebra; for real x > 0 every
// intermediate stays real.
template <class T>
double magnitude(const T& z) {
  return std::abs(z);
}

template <class T>
bool is_finite(const T& z) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(z);
  } else {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  }
}

template <class T>
T j_series(int order, const T& z) {
  const T half = z / 2.0;
  const T q = -half * half;
  T term = 1.0;
  for (int i = 1; i <= order; ++i) term *= half / double(i);
  T sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= q / (double(k) * double(k + order));
    sum += term;
    if (magnitude(term) <= 1e-17 * magnitude(sum) && double(k) > magnitude(half)) break;
  }
  return sum;
}

// Y0 and Y1 by their ascending series; valid for small |z|.
template <class T>
void y01_series(const T& z, const T& j0, const T& j1, T& y0, T& y1) {
  const T half = z / 2.0;
  const T q = -half * half;
  const T log_half = std::log(half);

  // Y0 = (2/pi) [ (ln(z/2) + gamma) J0 - sum_{k>=1} H_k t_k ],
  // t_k = (-z^2/4)^k / (k!)^2.
  T t = 1.0;
  T s0 = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 300; ++k) {
    t *= q / (double(k) * double(k));
    harmonic += 1.0 / k;
    const T contrib = harmonic * t;
    s0 += contrib;
    if (magnitude(contrib) <= 1e-17 * (magnitude(s0) + 1e-300) && double(k) > magnitude(half)) break;
  }
  y0 = (2.0 / kPi) * ((log_half + kEulerGamma) * j0 - s0);

  // Y1 = -2/(pi z) + (2/pi) ln(z/2) J1
  //      - (1/pi) sum_{k>=0} (psi(k+1) + psi(k+2)) u_k,  u_k = J1 series terms.
  T u = half;
  T s1 = 0.0;
  double h_k = 0.0;
  for (int k = 0; k < 300; ++k) {
    if (k > 0) {
      u *= q / (double(k) * double(k + 1));
      h_k += 1.0 / k;
    }
    const double psi_sum = (-kEulerGamma + h_k) + (-kEulerGamma + h_k + 1.0 / (k + 1));
    const T contrib = psi_sum * u;
    s1 += contrib;
    if (k > 2 && magnitude(contrib) <= 1e-17 * magnitude(s1) && double(k) > magnitude(half)) break;
  }
  y1 = -2.0 / (kPi * z) + (2.0 / kPi) * log_half * j1 - s1 / kPi;
}

// Miller's downward recurrence normalized by J0 + 2 sum J_2k = 1.
// Fills j[0..top] where top >= needed; returns top.
template <class T>
int j_miller(const T& z, int needed, std::vector<T>& j) {
  const double az = magnitude(z);
  int start = std::max(needed, int(std::ceil(az))) + 30 + int(6.0 * std::cbrt(az));
  if (start % 2) ++start;
  j.assign(start + 2, T(0.0));
  j[start + 1] = 0.0;
  j[start] = 1e-30;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / z) * j[k] - j[k + 1];
    if (magnitude(j[k - 1]) > 1e200) {
      for (int i = k - 1; i <= start; ++i) j[i] *= 1e-200;
    }
  }
  T norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  for (auto& v : j) v /= norm;
  return start;
}

// Neumann series for Y0, Y1 from a Miller J sequence.
template <class T>
void y01_neumann(const T& z, const std::vector<T>& j, int top, T& y0, T& y1) {
  const T lg = std::log(z / 2.0) + kEulerGamma;
  T s0 = 0.0;
  T s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top; ++k) {
    const double sign = (k % 2) ? -1.0 : 1.0;
    s0 += sign * j[2 * k] / double(k);
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / double(k);
  }
  y0 = (2.0 / kPi) * (lg * j[0] - 2.0 * s0);
  y1 = (2.0 / kPi) * (lg * j[1] - j[0] / z + s1);
}

// Hankel asymptotic expansion for H1 and H2 of order 0 or 1.
void hankel_asymptotic(int order, cplx z, cplx& h1, cplx& h2) {
  const double mu = 4.0 * order * order;
  const cplx omega = z - (0.5 * order + 0.25) * kPi;
  const cplx pref = std::sqrt(2.0 / (kPi * z));
  cplx sum1 = 1.0;
  cplx sum2 = 1.0;
  double a = 1.0;
  cplx zinv_pow = 1.0;
  cplx ik = 1.0;
  double last = 1.0;
  for (int k = 1; k < 80; ++k) {
    a *= (mu - double((2 * k - 1) * (2 * k - 1))) / (8.0 * k);
    zinv_pow /= z;
    ik *= kI;
    const double size = std::abs(a) * std::abs(zinv_pow);
    if (size > last) break;  // asymptotic series started diverging
    sum1 += ik * a * zinv_pow;
    sum2 += std::conj(ik) * a * zinv_pow;
    last = size;
    if (size < 1e-17) break;
  }
  h1 = pref * std::exp(kI * omega) * sum1;
  h2 = pref * std::exp(-kI * omega) * sum2;
}

template <class T>
void check_argument(const T& z, int order) {
  if (!is_finite(z)) throw DomainError("Bessel argument is not finite");
  if (magnitude(z) > kMaxArgument) {
    throw DomainError("Bessel argument |z| = " + std::to_string(magnitude(z)) + " exceeds 1e4");
  }
  if (std::abs(order) > kMaxOrder) {
    throw DomainError("Bessel order " + std::to_string(order) + " exceeds 60");
  }
}

double order_sign(int order) { return (order < 0 && (order % 2)) ? -1.0 : 1.0; }

}  // namespace

void bessel_jy_sequence(int max_order, cplx z, std::span<cplx> j, std::span<cplx> y) {
  check_argument(z, max_order);
  if (max_order < 1) max_order = 1;
  if (z == cplx(0.0)) throw DomainError("Y and H1 are singular at z = 0");
  if (j.size() < std::size_t(max_order + 1) || y.size() < std::size_t(max_order + 1)) {
    throw ContractError("bessel_jy_sequence: output spans too short");
  }
  const double az = std::abs(z);
  cplx y0, y1;
  if (az < kSeriesLimit) {
    for (int m = 0; m <= max_order; ++m) j[m] = j_series(m, z);
    y01_series(z, j[0], j[1], y0, y1);
  } else if (az <= kAsymptoticLimit) {
    std::vector<cplx> seq;
    const int top = j_miller(z, max_order, seq);
    for (int m = 0; m <= max_order; ++m) j[m] = seq[m];
    y01_neumann(z, seq, top, y0, y1);
  } else {
    cplx h1_0, h2_0, h1_1, h2_1;
    hankel_asymptotic(0, z, h1_0, h2_0);
    hankel_asymptotic(1, z, h1_1, h2_1);
    j[0] = 0.5 * (h1_0 + h2_0);
    j[1] = 0.5 * (h1_1 + h2_1);
    y0 = (h1_0 - h2_0) / (2.0 * kI);
    y1 = (h1_1 - h2_1) / (2.0 * kI);
    if (max_order >= 2) {
      if (double(max_order) < az) {
        for (int m = 1; m < max_order; ++m) j[m + 1] = (2.0 * m / z) * j[m] - j[m - 1];
      } else {
        std::vector<cplx> seq;
        j_miller(z, max_order, seq);
        for (int m = 2; m <= max_order; ++m) j[m] = seq[m];
      }
    }
  }
  y[0] = y0;
  y[1] = y1;
  for (int m = 1; m < max_order; ++m) y[m + 1] = (2.0 * m / z) * y[m] - y[m - 1];
}

cplx bessel_j(int order, cplx z) {
  check_argument(z, order);
  const int m = std::abs(order);
  if (z == cplx(0.0)) return m == 0 ? 1.0 : 0.0;
  cplx value;
  if (std::abs(z) < kSeriesLimit) {
    value = j_series(m, z);
  } else {
    std::vector<cplx> j(m + 2), y(m + 2);
    bessel_jy_sequence(std::max(m, 1), z, j, y);
    value = j[m];
  }
  return order_sign(order) * value;
}

double bessel_j(int order, double x) {
  if (!std::isfinite(x)) throw DomainError("Bessel argument is not finite");
  if (x < 0.0) {
    // J_m(-x) = (-1)^m J_m(x)
    return ((std::abs(order) % 2) ? -1.0 : 1.0) * bessel_j(order, -x);
  }
  check_argument(x, order);
  const int m = std::abs(order);
  if (x < kSeriesLimit) return order_sign(order) * j_series(m, x);
  return bessel_j(order, cplx(x, 0.0)).real();
}

cplx hankel1(int order, cplx z) {
  check_argument(z, order);
  if (z == cplx(0.0)) throw DomainError("H1 is singular at z = 0");
  const int m = std::abs(order);
  std::vector<cplx> j(m + 2), y(m + 2);
  bessel_jy_sequence(std::max(m, 1), z, j, y);
  return order_sign(order) * (j[m] + kI * y[m]);
}

cplx bessel_y(int order, cplx z) {
  // Y = (H1 - J) / i
  return (hankel1(order, z) - bessel_j(order, z)) / kI;
}

double bessel_y(int order, double x) {
  if (!(x > 0.0)) throw DomainError("Y is defined here only for x > 0");
  return bessel_y(order, cplx(x, 0.0)).real();
}

cplx hankel1_prime(int order, cplx z) {
  if (z == cplx(0.0)) throw DomainError("H1' is singular at z = 0");
  return hankel1(order - 1, z) - (double(order) / z) * hankel1(order, z);
}

cplx bessel_j_prime(int order, cplx z) {
  return 0.5 * (bessel_j(order - 1, z) - bessel_j(order + 1, z));
}

Cylinder01 cylinder01_direct(cplx z) {
  check_argument(z, 1);
  if (z == cplx(0.0)) throw DomainError("H1 is singular at z = 0");
  const double az = std::abs(z);
  Cylinder01 out;
  if (az < kSeriesLimit) {
    out.j0 = j_series(0, z);
    out.j1 = j_series(1, z);
    cplx y0, y1;
    y01_series(z, out.j0, out.j1, y0, y1);
    out.h0 = out.j0 + kI * y0;
    out.h1 = out.j1 + kI * y1;
  } else if (az <= kAsymptoticLimit) {
    thread_local std::vector<cplx> seq;
    const int top = j_miller(z, 1, seq);
    cplx y0, y1;
    y01_neumann(z, seq, top, y0, y1);
    out.j0 = seq[0];
    out.j1 = seq[1];
    out.h0 = out.j0 + kI * y0;
    out.h1 = out.j1 + kI * y1;
  } else {
    cplx h2_0, h2_1;
    hankel_asymptotic(0, z, out.h0, h2_0);
    hankel_asymptotic(1, z, out.h1, h2_1);
    out.j0 = 0.5 * (out.h0 + h2_0);
    out.j1 = 0.5 * (out.h1 + h2_1);
  }
  return out;
}

RealCylinder01 cylinder01_direct(double x) {
  if (!(x > 0.0)) throw DomainError("cylinder01 requires x > 0");
  check_argument(x, 1);
  RealCylinder01 out;
  if (x < kSeriesLimit) {
    out.j0 = j_series(0, x);
    out.j1 = j_series(1, x);
    y01_series(x, out.j0, out.j1, out.y0, out.y1);
  } else if (x <= kAsymptoticLimit) {
    thread_local std::vector<double> seq;
    const int top = j_miller(x, 1, seq);
    out.j0 = seq[0];
    out.j1 = seq[1];
    y01_neumann(x, seq, top, out.y0, out.y1);
  } else {
    cplx h1_0, h2_0, h1_1, h2_1;
    hankel_asymptotic(0, cplx(x, 0.0), h1_0, h2_0);
    hankel_asymptotic(1, cplx(x, 0.0), h1_1, h2_1);
    out.j0 = h1_0.real();
    out.y0 = h1_0.imag();
    out.j1 = h1_1.real();
    out.y1 = h1_1.imag();
  }
  return out;
}

namespace {

// Unit intervals, Chebyshev degree 15: truncation error is far below
// rounding for functions oscillating with unit frequency. Below x = 2 the
// logarithm would limit convergence, so there the tables hold the regular parts
//   Y0 - (2/pi) ln(x/2) J0,   Y1 - (2/pi) ln(x/2) J1 + 2/(pi x).
constexpr int kTableEnd = 64;
constexpr int kChebN = 16;

struct CylinderTable {
  // [interval][function][coefficient], functions j0, j1, y0, y1
  std::vector<std::array<std::array<double, kChebN>, 4>> coef;

  CylinderTable() : coef(kTableEnd) {
    for (int iv = 0; iv < kTableEnd; ++iv) {
      std::array<std::array<double, kChebN>, 4> values{};
      for (int j = 0; j < kChebN; ++j) {
        const double x = iv + 0.5 + 0.5 * std::cos(kPi * (j + 0.5) / kChebN);
        const auto c = cylinder01_direct(x);
        double y0 = c.y0, y1 = c.y1;
        if (iv < 2) {
          const double l = (2.0 / kPi) * std::log(x / 2.0);
          y0 -= l * c.j0;
          y1 += -l * c.j1 + 2.0 / (kPi * x);
        }
        values[0][j] = c.j0;
        values[1][j] = c.j1;
        values[2][j] = y0;
        values[3][j] = y1;
      }
      for (int f = 0; f < 4; ++f) {
        for (int k = 0; k < kChebN; ++k) {
          double acc = 0.0;
          for (int j = 0; j < kChebN; ++j) {
            acc += values[f][j] * std::cos(kPi * k * (j + 0.5) / kChebN);
          }
          coef[iv][f][k] = (k == 0 ? 1.0 : 2.0) * acc / kChebN;
        }
      }
    }
  }
};

double clenshaw(const std::array<double, kChebN>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = kChebN - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

// Complex plane: Taylor series about the centres of unit cells, coefficients
// from samples on a unit circle (discrete Cauchy integral). Near the origin
// the cells hold the entire parts J and
//   R0 = Y0 - (2/pi) ln(z/2) J0,   R1 = Y1 - (2/pi) ln(z/2) J1 + 2/(pi z).
// Elsewhere the nearest singularity is at least 4.5 away from a centre, so
// degree 22 is below rounding anywhere inside a cell (|z - c| <= 0.71).
constexpr int kCellRe = 64;
constexpr int kCellImLo = -4;
constexpr int kCellImHi = 2;
constexpr int kTaylor = 23;
constexpr int kLogCells = 4;

struct ComplexCylinderTable {
  using Coef = std::array<cplx, kTaylor>;
  // [cell][function], functions j0, j1, h0 (or R0), h1 (or R1)
  std::vector<std::array<Coef, 4>> cells;

  static std::array<cplx, 4> sample(cplx z, bool regular) {
    if (!regular) {
      const auto c = cylinder01_direct(z);
      return {c.j0, c.j1, c.h0, c.h1};
    }
    const cplx j0 = j_series(0, z), j1 = j_series(1, z);
    cplx y0, y1;
    y01_series(z, j0, j1, y0, y1);
    const cplx l = (2.0 / kPi) * std::log(z / 2.0);
    return {j0, j1, y0 - l * j0, y1 - l * j1 + 2.0 / (kPi * z)};
  }

  ComplexCylinderTable() : cells(kCellRe * (kCellImHi - kCellImLo)) {
    constexpr int n = 32;
    for (int ir = 0; ir < kCellRe; ++ir) {
      for (int ii = 0; ii < kCellImHi - kCellImLo; ++ii) {
        const cplx centre(ir + 0.5, kCellImLo + ii + 0.5);
        std::array<std::array<cplx, 4>, n> values;
        for (int j = 0; j < n; ++j) {
          values[j] = sample(centre + std::polar(1.0, 2.0 * kPi * j / n), ir < kLogCells);
        }
        auto& cell = cells[ir * (kCellImHi - kCellImLo) + ii];
        for (int f = 0; f < 4; ++f) {
          for (int m = 0; m < kTaylor; ++m) {
            cplx acc = 0.0;
            for (int j = 0; j < n; ++j) acc += values[j][f] * std::polar(1.0, -2.0 * kPi * j * m / n);
            cell[f][m] = acc / double(n);
          }
        }
      }
    }
  }
};

cplx horner(const ComplexCylinderTable::Coef& c, cplx dz) {
  cplx acc = c[kTaylor - 1];
  for (int m = kTaylor - 2; m >= 0; --m) acc = acc * dz + c[m];
  return acc;
}

}  // namespace

Cylinder01 cylinder01(cplx z) {
  const double ir = std::floor(z.real()), ii = std::floor(z.imag());
  if (!(ir >= 0.0 && ir < kCellRe && ii >= kCellImLo && ii < kCellImHi)) {
    return cylinder01_direct(z);
  }
  if (z == cplx(0.0)) throw DomainError("H1 is singular at z = 0");
  static const ComplexCylinderTable table;
  const int cell = int(ir) * (kCellImHi - kCellImLo) + int(ii) - kCellImLo;
  const auto& c = table.cells[cell];
  const cplx dz = z - cplx(ir + 0.5, ii + 0.5);
  Cylinder01 out;
  out.j0 = horner(c[0], dz);
  out.j1 = horner(c[1], dz);
  out.h0 = horner(c[2], dz);
  out.h1 = horner(c[3], dz);
  if (ir < kLogCells) {
    const cplx l = (2.0 / kPi) * std::log(z / 2.0);
    const cplx y0 = out.h0 + l * out.j0;
    const cplx y1 = out.h1 + l * out.j1 - 2.0 / (kPi * z);
    out.h0 = out.j0 + kI * y0;
    out.h1 = out.j1 + kI * y1;
  }
  return out;
}

RealCylinder01 cylinder01(double x) {
  if (!(x > 0.0)) throw DomainError("cylinder01 requires x > 0");
  if (!(x < kTableEnd)) return cylinder01_direct(x);
  static const CylinderTable table;
  const int iv = int(x);
  const double t = 2.0 * (x - iv) - 1.0;
  const auto& c = table.coef[iv];
  RealCylinder01 out;
  out.j0 = clenshaw(c[0], t);
  out.j1 = clenshaw(c[1], t);
  out.y0 = clenshaw(c[2], t);
  out.y1 = clenshaw(c[3], t);
  if (iv < 2) {
    const double l = (2.0 / kPi) * std::log(x / 2.0);
    out.y0 += l * out.j0;
    out.y1 += l * out.j1 - 2.0 / (kPi * x);
  }
  return out;
}

}  // namespace billiards::specfun
