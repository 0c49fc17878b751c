#include <algorithm>
#include <cmath>
#include <random>

#include "billiards/geometry.hpp"
#include "doctest.h"

using namespace billiards;

TEST_SUITE("geometry") {

TEST_CASE("ellipse family") {
  const auto c = ellipse_shape(0.0);
  CHECK(c.semi_major() == doctest::Approx(1.0));
  CHECK(c.semi_minor() == doctest::Approx(1.0));
  for (double chi : {0.0, 0.1, 0.25, 0.2985, 0.35, 0.5}) {
    const auto e = ellipse_shape(chi);
    CHECK(std::abs(e.semi_major() * e.semi_minor() - 1.0) < 1e-15);
    CHECK(std::abs(e.area() - M_PI) < 1e-14);
  }
  CHECK(eccentricity(0.0) == 0.0);
  CHECK(eccentricity(0.3) > eccentricity(0.2));
  // e = sqrt(1 - (1+chi)^-4) evaluated directly
  CHECK(std::abs(eccentricity(0.2985) - std::sqrt(1.0 - std::pow(1.2985, -4.0))) < 1e-15);
  CHECK(std::abs(eccentricity(0.2985) - 0.805) < 1e-3);
  for (double e : {0.1, 0.77, 0.805, 0.85}) {
    CHECK(std::abs(eccentricity(chi_from_eccentricity(e)) - e) < 1e-14);
  }
}

TEST_CASE("quadrupole family") {
  const auto q0 = quadrupole_shape(0.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    worst = std::max(worst, std::abs(norm(q0.position(2.0 * M_PI * i / 1000)) - 1.0));
  }
  CHECK(worst < 1e-15);
  const auto q = quadrupole_shape(0.141);
  CHECK(std::abs(q.position(0.0).x - 1.141) < 1e-15);
  CHECK(std::abs(q.position(M_PI / 2).y - 0.859) < 1e-15);
  // area = (1/2) int r^2 dphi = pi (1 + eps^2 / 2)
  CHECK(std::abs(q.area() - M_PI * (1.0 + 0.141 * 0.141 / 2.0)) < 1e-14);
  // and by the trapezoid rule on x y' - y x'
  double a = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    const Point p = q.position(t), d = q.tangent(t);
    a += 0.5 * (p.x * d.y - p.y * d.x) * 2.0 * M_PI / n;
  }
  CHECK(std::abs(a - q.area()) < 1e-12);
}

TEST_CASE("parametrization consistency") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (const auto& s : {BoundaryShape::circle(1.3), ellipse_shape(0.3), quadrupole_shape(0.14)}) {
    CHECK(norm(s.position(0.0) - s.position(2.0 * M_PI)) < 1e-14);
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng), h = 1e-5;
      const Point fd = (1.0 / (2.0 * h)) * (s.position(t + h) - s.position(t - h));
      const Point d = s.tangent(t);
      CHECK(norm(fd - d) <= 1e-6 * norm(d));
      const Point fd2 = (1.0 / (2.0 * h)) * (s.tangent(t + h) - s.tangent(t - h));
      CHECK(norm(fd2 - s.second_derivative(t)) <= 1e-6 * std::max(1.0, norm(fd2)));
      CHECK(std::abs(norm(s.normal(t)) - 1.0) < 1e-14);
      // outward: normal points away from the origin for these star shapes
      CHECK(dot(s.normal(t), s.position(t)) > 0.0);
      // mirror conventions
      const Point m = s.position(-t);
      CHECK(norm(m - Point{s.position(t).x, -s.position(t).y}) < 1e-14);
      const Point x = s.position(M_PI - t);
      CHECK(norm(x - Point{-s.position(t).x, s.position(t).y}) < 1e-14);
    }
  }
}

TEST_CASE("discretization") {
  const auto c = BoundaryShape::circle(1.0);
  const auto d = discretize(c, 10.0, 1.0);
  double sum = 0.0;
  for (double w : d.weights) sum += w;
  CHECK(std::abs(sum - 2.0 * M_PI) < 1e-4);
  CHECK(d.size() % 4 == 0);
  for (const auto& n : d.normals) CHECK(std::abs(norm(n) - 1.0) < 1e-12);

  for (const auto& s : {ellipse_shape(0.3), quadrupole_shape(0.14)}) {
    for (double k : {4.0, 10.0}) {
      const auto disc = discretize(s, 12.0, k);
      CHECK(double(disc.size()) >= 12.0 * s.perimeter() / (2.0 * M_PI / k));
      CHECK(disc.element_size <= 2.0 * M_PI / k / 12.0 + 1e-12);
    }
  }
}

TEST_CASE("perimeter quadrature converges") {
  // the periodic trapezoid rule converges faster than any power; require at
  // least the 4x per halving of a second-order rule until rounding
  const auto e = ellipse_shape(0.35);
  const double ref = e.perimeter(1 << 16);
  double prev = -1.0;
  for (int m : {8, 16, 32}) {
    const auto d = discretize_nodes(e, m);
    double sum = 0.0;
    for (double w : d.weights) sum += w;
    const double err = std::abs(sum - ref);
    if (prev > 1e-13) CHECK(err <= prev / 4.0);
    prev = err;
  }
}

TEST_CASE("interior grid with fixed count") {
  const auto c = BoundaryShape::circle(1.0);
  const auto g = interior_grid(c, 4166);
  CHECK(g.size() == 4166);
  for (const auto& p : g.points) CHECK(c.contains(p));

  for (double chi = 0.25; chi <= 0.35 + 1e-12; chi += 0.025) {
    const auto s = ellipse_shape(chi);
    const auto gs = interior_grid(s, 4166);
    CHECK(gs.size() == 4166);
    bool inside = true;
    for (const auto& p : gs.points) inside = inside && s.contains(p);
    CHECK(inside);
    // clear of the boundary so the layer potentials resolve every point
    CHECK(*std::min_element(gs.boundary_distance.begin(), gs.boundary_distance.end()) >=
          0.25 * gs.spacing);
  }
  const auto q = quadrupole_shape(0.141);
  const auto gq = interior_grid(q, 1000);
  CHECK(gq.size() == 1000);
  for (std::size_t i = 0; i < gq.size(); ++i) {
    CHECK(gq.find(gq.ix[i], gq.iy[i]) == int(i));
  }
}

TEST_CASE("common lattice is mirror closed") {
  const auto g = common_lattice({ellipse_shape(0.25), ellipse_shape(0.35)}, 0.05, 0.05);
  CHECK(g.size() > 100);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.find(-g.ix[i], g.iy[i]) >= 0);
    CHECK(g.find(g.ix[i], -g.iy[i]) >= 0);
  }
}

TEST_CASE("distance to boundary") {
  const auto c = BoundaryShape::circle(1.0);
  CHECK(std::abs(c.distance_to_boundary({0.3, 0.4}) - 0.5) < 1e-12);
  const auto e = ellipse_shape(0.3);
  const double a = e.semi_major();
  CHECK(std::abs(e.distance_to_boundary({a - 0.1, 0.0}) - 0.1) < 1e-12);
}

}
