#include <algorithm>
#include <cmath>

#include "billiards/bem.hpp"
#include "billiards/errors.hpp"
#include "billiards/specfun.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace billiards;

namespace {

double rel_sigma(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

// Zeros of the TM characteristic function of order m inside the rectangle,
// by the winding number of its phase along the boundary.
int winding_count(int m, double n, double re_lo, double re_hi, double im_lo, double im_hi) {
  const int per_side = 4000;
  std::vector<cplx> path;
  auto side = [&](cplx a, cplx b) {
    for (int i = 0; i < per_side; ++i) path.push_back(a + (b - a) * (double(i) / per_side));
  };
  side({re_lo, im_lo}, {re_hi, im_lo});
  side({re_hi, im_lo}, {re_hi, im_hi});
  side({re_hi, im_hi}, {re_lo, im_hi});
  side({re_lo, im_hi}, {re_lo, im_lo});
  double turn = 0.0;
  cplx prev = circle_tm_characteristic(m, n, path.front());
  for (std::size_t i = 1; i <= path.size(); ++i) {
    const cplx cur = circle_tm_characteristic(m, n, path[i % path.size()]);
    turn += std::arg(cur / prev);
    prev = cur;
  }
  return int(std::lround(turn / (2.0 * M_PI)));
}

}  // namespace

TEST_SUITE("bem") {

TEST_CASE("singular value helpers") {
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(5, 5);
  CHECK(std::abs(min_singular_value(id) - 1.0) < 1e-15);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Random(6, 6);
  const double s = min_singular_value(r);
  CHECK(std::abs(min_singular_value(cplx(2.5, -1.0) * r) - std::abs(cplx(2.5, -1.0)) * s) < 1e-12);
  r.row(3).setZero();
  CHECK(min_singular_value(r) < 1e-14);

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  const auto v = boundary_null_vector(d, 1e-6);
  CHECK(std::abs(v(2) - 1.0) < 1e-15);
  CHECK(std::abs(v(0)) + std::abs(v(1)) < 1e-15);
  CHECK_THROWS_AS(boundary_null_vector(id, 1e-6), NotSingularError);

  const auto v2 = boundary_null_vector(r, 1e-6);
  Eigen::Index imax;
  v2.cwiseAbs().maxCoeff(&imax);
  CHECK(std::abs(v2(imax).imag()) < 1e-15);
  CHECK(v2(imax).real() > 0.0);
  CHECK((r * v2).norm() <= min_singular_value(r) * (1.0 + 1e-12) + 1e-15);
}

TEST_CASE("closed circle operator") {
  const auto disc = discretize(BoundaryShape::circle(1.0), 12.0, 6.0);
  const double j01 = oracle::bessel_zero(0, 1);
  CHECK(rel_sigma(assemble_dirichlet(disc, 3.0).values) > 1e-3);
  CHECK(rel_sigma(assemble_dirichlet(disc, j01).values) < 1e-6);
  // equispaced nodes on a circle: the kernel depends on |i - j| only
  const auto a = assemble_dirichlet(disc, 4.4).values;
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("open circle operator at a characteristic root") {
  const auto roots = circle_tm_resonance_oracle(2.0, 6, 2.0, 4.0, -1.0, 0.0);
  REQUIRE(!roots.empty());
  const auto disc = discretize(BoundaryShape::circle(1.0), 12.0, 2.0 * 4.0);
  for (const auto& r : roots) {
    CHECK(rel_sigma(assemble_dielectric_tm(disc, r.k, 2.0).values) < 1e-5);
  }
  CHECK(rel_sigma(assemble_dielectric_tm(disc, cplx(3.0, -0.5), 2.0).values) > 1e-4);
}

TEST_CASE("sector basis") {
  for (const Parity& p : kAllParities) {
    SectorBasis b(24, p);
    Eigen::VectorXcd red = Eigen::VectorXcd::Random(b.size());
    const auto full = b.expand(red);
    CHECK((b.reduce(full) - red).norm() < 1e-14);
    // mirror images carry the parity signs: t -> -t is node j -> M - j
    for (int j = 1; j < 24; ++j) CHECK(std::abs(full(24 - j) - double(p.y) * full(j)) < 1e-14);
    for (int j = 0; j < 24; ++j) CHECK(std::abs(full((12 - j + 24) % 24) - double(p.x) * full(j)) < 1e-14);
  }
  int total = 0;
  for (const Parity& p : kAllParities) total += SectorBasis(24, p).size();
  CHECK(total == 24);
  CHECK_THROWS_AS(SectorBasis(22, Parity{}), ContractError);
}

TEST_CASE("circle Dirichlet eigenvalues") {
  std::vector<double> expect;
  for (int m = 0; m < 10; ++m) {
    for (int n = 1; n < 4; ++n) {
      const double z = oracle::bessel_zero(m, n);
      if (z >= 2.0 && z <= 6.0) {
        expect.push_back(z);
        if (m > 0) expect.push_back(z);
      }
    }
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(expect.size() == 6);
  auto found = find_real_eigen_k(BoundaryShape::circle(1.0), 2.0, 6.0, 1e-8);
  REQUIRE(found.size() == expect.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    CHECK(std::abs(found[i].k.real() - expect[i]) < 1e-6 * expect[i]);
    CHECK(found[i].k.imag() == 0.0);
    CHECK(found[i].converged);
  }
  // degenerate pairs come out as orthogonal densities
  for (std::size_t i = 0; i + 1 < found.size(); ++i) {
    if (std::abs(found[i].k - found[i + 1].k) < 1e-6) {
      CHECK(std::abs(found[i].boundary_density.dot(found[i + 1].boundary_density)) < 1e-8);
    }
  }
  CHECK(find_real_eigen_k(BoundaryShape::circle(1.0), 2.5, 3.7, 1e-8).empty());

  const auto oracle_list = circle_dirichlet_oracle(10, 2.0, 4.0);
  REQUIRE(oracle_list.size() == 2);
  CHECK(std::abs(oracle_list[0].k - 2.404826) < 1e-6);
  CHECK(std::abs(oracle_list[1].k - 3.831706) < 1e-6);
  CHECK(oracle_list[1].multiplicity == 2);
  const auto wide = circle_dirichlet_oracle(8, 0.5, 20.0);
  for (const auto& a : wide) {
    for (const auto& b : wide) {
      if (a.n == b.n && b.m == a.m + 1) CHECK(a.k < b.k);
    }
  }
}

TEST_CASE("ellipse eigenvalues deform continuously from the circle") {
  const auto c = find_real_eigen_k(BoundaryShape::circle(1.0), 2.0, 4.2, 1e-8);
  const auto e = find_real_eigen_k(ellipse_shape(0.01), 2.0, 4.2, 1e-8);
  REQUIRE(c.size() == e.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i].k - e[i].k) < 0.05);
}

TEST_CASE("mesh refinement stability") {
  const auto shape = ellipse_shape(0.3);
  SolverOptions opt;
  const int m = required_node_count(shape, 12.0, 6.0);
  ModeSolver coarse(discretize_nodes(shape, m), ProblemKind::dirichlet_closed, 1.0, opt);
  ModeSolver fine(discretize_nodes(shape, 2 * m), ProblemKind::dirichlet_closed, 1.0, opt);
  const auto a = coarse.scan_real(4.0, 6.0, nullptr);
  REQUIRE(!a.empty());
  for (const auto& mode : a) {
    const auto r = fine.refine(mode.parity, mode.k);
    CHECK(r.converged);
    CHECK(std::abs(r.k - mode.k) < 10.0 * opt.tol);
  }
}

TEST_CASE("circle TM resonances") {
  const double n = 2.0;
  const auto oracle_roots = circle_tm_resonance_oracle(n, 20, 1.0, 3.5, -1.0, 0.0);
  int expected = 0;
  for (const auto& r : oracle_roots) {
    CHECK(r.k.imag() < 0.0);
    CHECK(std::abs(circle_tm_characteristic(r.m, n, r.k)) < 1e-10);
    expected += r.multiplicity;
  }
  // argument principle per order on a rectangle whose edges avoid the roots
  int counted = 0;
  for (int m = 0; m <= 20; ++m) {
    const int w = winding_count(m, n, 1.0, 3.5, -1.0, -1e-3);
    counted += (m == 0 ? 1 : 2) * w;
  }
  CHECK(counted == expected);

  const auto found = find_complex_resonances(BoundaryShape::circle(1.0), n, 1.0, 3.5, -1.0, 0.0, 1e-8);
  CHECK(int(found.size()) == expected);
  std::vector<char> used(found.size(), 0);
  for (const auto& r : oracle_roots) {
    for (int copy = 0; copy < r.multiplicity; ++copy) {
      int best = -1;
      for (std::size_t j = 0; j < found.size(); ++j) {
        if (!used[j] && (best < 0 || std::abs(found[j].k - r.k) < std::abs(found[best].k - r.k))) best = int(j);
      }
      REQUIRE(best >= 0);
      used[best] = 1;
      CHECK(std::abs(found[best].k.real() - r.k.real()) < 1e-5);
      CHECK(std::abs(found[best].k.imag() - r.k.imag()) < 1e-5);
    }
  }
  for (const auto& f : found) CHECK(f.k.imag() < 0.0);
}

TEST_CASE("TM oracle is stable under a finer start grid") {
  const auto a = circle_tm_resonance_oracle(2.0, 5, 1.0, 6.0, -1.0, 0.0, 0.1);
  const auto b = circle_tm_resonance_oracle(2.0, 5, 1.0, 6.0, -1.0, 0.0, 0.05);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].m == b[i].m);
    CHECK(std::abs(a[i].k - b[i].k) < 1e-8);
  }
}

TEST_CASE("interior field of the circle ground mode") {
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(BoundaryShape::circle(1.0), 2000));
  auto modes = find_real_eigen_k(BoundaryShape::circle(1.0), 2.0, 2.6, 1e-8, {}, grid);
  REQUIRE(modes.size() == 1);
  const auto& f = modes[0].field;
  double sum = 0.0, peak = 0.0;
  for (double r : f.rho) {
    CHECK(r >= 0.0);
    sum += r;
    peak = std::max(peak, r);
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
  // radial profile J0(j01 r)^2 up to normalization
  const double j01 = modes[0].k.real();
  std::vector<double> ref(f.size());
  double ref_sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    ref[i] = std::pow(specfun::bessel_j(0, j01 * norm(grid->points[i])), 2);
    ref_sum += ref[i];
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += std::abs(f.rho[i] - ref[i] / ref_sum);
    den += f.rho[i];
  }
  CHECK(num / den < 1e-6);
  // maximal at the centre
  std::size_t centre = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (norm(grid->points[i]) < norm(grid->points[centre])) centre = i;
  }
  CHECK(f.rho[centre] >= peak * (1.0 - 1e-12));
  // 1 % of points nearest the boundary
  std::vector<std::pair<double, double>> by_distance;
  for (std::size_t i = 0; i < f.size(); ++i) by_distance.push_back({grid->boundary_distance[i], f.rho[i]});
  std::sort(by_distance.begin(), by_distance.end());
  double edge = 0.0;
  const std::size_t n_edge = f.size() / 100;
  for (std::size_t i = 0; i < n_edge; ++i) edge += by_distance[i].second / n_edge;
  CHECK(edge < 0.05 * peak);
}

TEST_CASE("parity of ellipse modes") {
  const auto shape = ellipse_shape(0.3);
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(shape, 1500));
  // evaluate every point, without copying mirror images
  ModeSolver s(discretize(shape, 12.0, 5.5), ProblemKind::dirichlet_closed, 1.0);
  const auto modes = s.scan_real(4.0, 5.5, nullptr);
  REQUIRE(!modes.empty());
  for (const auto& m : modes) {
    const auto ev = evaluate_interior(s.discretization(), m.boundary_density, m.k, 1.0,
                                      ProblemKind::dirichlet_closed, grid);
    double rx = 0.0, ry = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const int jx = grid->find(-grid->ix[i], grid->iy[i]);
      const int jy = grid->find(grid->ix[i], -grid->iy[i]);
      if (jx >= 0) rx += std::abs(ev.field.rho[i] - ev.field.rho[jx]);
      if (jy >= 0) ry += std::abs(ev.field.rho[i] - ev.field.rho[jy]);
    }
    CHECK(rx < 1e-3);
    CHECK(ry < 1e-3);
  }
}

}
