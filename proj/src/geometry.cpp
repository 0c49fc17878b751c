#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coarse boundary sample used to seed nearest-point searches.
constexpr int kDistanceSeeds = 256;

}  // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::circle:
      return "circle";
    case ShapeKind::ellipse:
      return "ellipse";
    case ShapeKind::quadrupole:
      return "quadrupole";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "circle") return ShapeKind::circle;
  if (name == "ellipse") return ShapeKind::ellipse;
  if (name == "quadrupole") return ShapeKind::quadrupole;
  throw InvalidParameter("unknown shape kind '" + name + "'");
}

BoundaryShape BoundaryShape::circle(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidParameter("circle radius must be positive");
  }
  return BoundaryShape(ShapeKind::circle, radius);
}

BoundaryShape BoundaryShape::ellipse(double chi) {
  if (!(chi > -1.0) || !std::isfinite(chi)) {
    throw InvalidParameter("ellipse requires chi > -1, got " + std::to_string(chi));
  }
  return BoundaryShape(ShapeKind::ellipse, chi);
}

BoundaryShape BoundaryShape::quadrupole(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw InvalidParameter("quadrupole requires 0 <= eps < 0.5, got " + std::to_string(eps));
  }
  return BoundaryShape(ShapeKind::quadrupole, eps);
}

BoundaryShape ellipse_shape(double chi) { return BoundaryShape::ellipse(chi); }
BoundaryShape quadrupole_shape(double eps) { return BoundaryShape::quadrupole(eps); }

double eccentricity(double chi) {
  if (!(chi > -1.0)) throw InvalidParameter("eccentricity requires chi > -1");
  const double ratio = std::pow(1.0 + chi, -2.0);  // b / a
  // For chi < 0 the axes swap roles.
  const double r = ratio <= 1.0 ? ratio : 1.0 / ratio;
  return std::sqrt(1.0 - r * r);
}

double chi_from_eccentricity(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw InvalidParameter("eccentricity must lie in [0, 1)");
  return std::pow(1.0 - e * e, -0.25) - 1.0;
}

double BoundaryShape::shape_value() const {
  switch (kind_) {
    case ShapeKind::ellipse:
      return eccentricity(parameter_);
    case ShapeKind::quadrupole:
      return parameter_;
    case ShapeKind::circle:
      return 0.0;
  }
  return 0.0;
}

double BoundaryShape::semi_major() const {
  switch (kind_) {
    case ShapeKind::ellipse:
      return 1.0 + parameter_;
    case ShapeKind::circle:
      return parameter_;
    case ShapeKind::quadrupole:
      return 1.0 + parameter_;
  }
  return 0.0;
}

double BoundaryShape::semi_minor() const {
  switch (kind_) {
    case ShapeKind::ellipse:
      return 1.0 / (1.0 + parameter_);
    case ShapeKind::circle:
      return parameter_;
    case ShapeKind::quadrupole:
      return 1.0 - parameter_;
  }
  return 0.0;
}

Point BoundaryShape::position(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case ShapeKind::circle:
      return {parameter_ * c, parameter_ * s};
    case ShapeKind::ellipse:
      return {semi_major() * c, semi_minor() * s};
    case ShapeKind::quadrupole: {
      const double r = 1.0 + parameter_ * std::cos(2.0 * t);
      return {r * c, r * s};
    }
  }
  return {};
}

Point BoundaryShape::tangent(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case ShapeKind::circle:
      return {-parameter_ * s, parameter_ * c};
    case ShapeKind::ellipse:
      return {-semi_major() * s, semi_minor() * c};
    case ShapeKind::quadrupole: {
      const double r = 1.0 + parameter_ * std::cos(2.0 * t);
      const double dr = -2.0 * parameter_ * std::sin(2.0 * t);
      return {dr * c - r * s, dr * s + r * c};
    }
  }
  return {};
}

Point BoundaryShape::second_derivative(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case ShapeKind::circle:
      return {-parameter_ * c, -parameter_ * s};
    case ShapeKind::ellipse:
      return {-semi_major() * c, -semi_minor() * s};
    case ShapeKind::quadrupole: {
      const double r = 1.0 + parameter_ * std::cos(2.0 * t);
      const double dr = -2.0 * parameter_ * std::sin(2.0 * t);
      const double ddr = -4.0 * parameter_ * std::cos(2.0 * t);
      return {ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s};
    }
  }
  return {};
}

double BoundaryShape::speed(double t) const { return norm(tangent(t)); }

Point BoundaryShape::normal(double t) const {
  const Point d = tangent(t);
  const double len = norm(d);
  return {d.y / len, -d.x / len};
}

bool BoundaryShape::contains(Point p) const {
  switch (kind_) {
    case ShapeKind::circle:
      return p.x * p.x + p.y * p.y < parameter_ * parameter_;
    case ShapeKind::ellipse: {
      const double u = p.x / semi_major(), v = p.y / semi_minor();
      return u * u + v * v < 1.0;
    }
    case ShapeKind::quadrupole: {
      const double rho = norm(p);
      if (rho == 0.0) return true;
      const double phi = std::atan2(p.y, p.x);
      return rho < 1.0 + parameter_ * std::cos(2.0 * phi);
    }
  }
  return false;
}

double BoundaryShape::area() const {
  switch (kind_) {
    case ShapeKind::circle:
      return kPi * parameter_ * parameter_;
    case ShapeKind::ellipse:
      return kPi * semi_major() * semi_minor();
    case ShapeKind::quadrupole:
      // (1/2) int (1 + eps cos 2phi)^2 dphi
      return kPi * (1.0 + 0.5 * parameter_ * parameter_);
  }
  return 0.0;
}

double BoundaryShape::max_speed() const {
  switch (kind_) {
    case ShapeKind::circle:
      return parameter_;
    case ShapeKind::ellipse:
      return std::max(semi_major(), semi_minor());
    case ShapeKind::quadrupole: {
      // |x'|^2 = r^2 + r'^2 <= (1 + eps)^2 + 4 eps^2
      const double e = parameter_;
      return std::sqrt((1.0 + e) * (1.0 + e) + 4.0 * e * e);
    }
  }
  return 0.0;
}

double BoundaryShape::perimeter(int samples) const {
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) sum += speed(kTwoPi * j / samples);
  return sum * kTwoPi / samples;
}

double BoundaryShape::distance_to_boundary(Point p, double* foot_t) const {
  double best_t = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kDistanceSeeds; ++j) {
    const double t = kTwoPi * j / kDistanceSeeds;
    const Point d = position(t) - p;
    const double d2 = dot(d, d);
    if (d2 < best) {
      best = d2;
      best_t = t;
    }
  }
  // Newton on (x(t) - p) . x'(t) = 0, kept inside the seed bracket.
  const double h = kTwoPi / kDistanceSeeds;
  double t = best_t;
  for (int it = 0; it < 20; ++it) {
    const Point d = position(t) - p;
    const Point d1 = tangent(t);
    const Point d2 = second_derivative(t);
    const double f = dot(d, d1);
    const double fp = dot(d1, d1) + dot(d, d2);
    if (fp <= 0.0) break;
    double step = f / fp;
    step = std::clamp(step, -h, h);
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const double dist = norm(position(t) - p);
  if (dist <= std::sqrt(best)) {
    if (foot_t) *foot_t = t;
    return dist;
  }
  if (foot_t) *foot_t = best_t;
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------

int required_node_count(const BoundaryShape& shape, double elements_per_wavelength,
                        double k_hint) {
  if (!(elements_per_wavelength >= 6.0)) {
    throw InvalidParameter("elements_per_wavelength must be at least 6");
  }
  if (!(k_hint > 0.0)) throw InvalidParameter("k_hint must be positive");
  // element arc <= max_speed * 2 pi / M <= (2 pi / k) / ppw
  const double needed = elements_per_wavelength * k_hint * shape.max_speed();
  int m = int(std::ceil(needed - 1e-9));
  m = std::max(m, 16);
  return (m + 3) / 4 * 4;
}

BoundaryDiscretization discretize_nodes(const BoundaryShape& shape, int node_count) {
  if (node_count < 8 || node_count % 4 != 0) {
    throw InvalidParameter("node count must be a multiple of four, at least 8");
  }
  BoundaryDiscretization disc;
  disc.shape = std::make_shared<const BoundaryShape>(shape);
  const int m = node_count;
  disc.t.resize(m);
  disc.nodes.resize(m);
  disc.normals.resize(m);
  disc.speeds.resize(m);
  disc.normal_curvature.resize(m);
  disc.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    disc.t[j] = t;
    disc.nodes[j] = shape.position(t);
    const double sp = shape.speed(t);
    if (!(sp > 1e-12) || !std::isfinite(sp)) {
      throw GeometryError("boundary parametrization is not regular at t = " + std::to_string(t));
    }
    disc.speeds[j] = sp;
    disc.normals[j] = shape.normal(t);
    disc.normal_curvature[j] = dot(disc.normals[j], shape.second_derivative(t));
    disc.weights[j] = sp * kTwoPi / m;
  }
  // Largest element arc length, Simpson on each element.
  const double h = kTwoPi / m;
  double largest = 0.0;
  for (int j = 0; j < m; ++j) {
    const double a = disc.t[j];
    double s = shape.speed(a) + shape.speed(a + h);
    for (int q = 1; q < 8; ++q) s += (q % 2 ? 4.0 : 2.0) * shape.speed(a + h * q / 8.0);
    largest = std::max(largest, s * h / 24.0);
  }
  disc.element_size = largest;
  return disc;
}

BoundaryDiscretization discretize(const BoundaryShape& shape, double elements_per_wavelength,
                                  double k_hint) {
  return discretize_nodes(shape, required_node_count(shape, elements_per_wavelength, k_hint));
}

// ---------------------------------------------------------------------------

int InteriorGrid::find(int i, int j) const {
  if (i < ix_min || i > ix_max || j < iy_min || j > iy_max) return -1;
  const int nx = ix_max - ix_min + 1;
  return site_[std::size_t(j - iy_min) * nx + (i - ix_min)];
}

void InteriorGrid::reindex() {
  if (points.empty()) {
    site_.clear();
    return;
  }
  ix_min = *std::min_element(ix.begin(), ix.end());
  ix_max = *std::max_element(ix.begin(), ix.end());
  iy_min = *std::min_element(iy.begin(), iy.end());
  iy_max = *std::max_element(iy.begin(), iy.end());
  const int nx = ix_max - ix_min + 1;
  const int ny = iy_max - iy_min + 1;
  site_.assign(std::size_t(nx) * ny, -1);
  for (std::size_t p = 0; p < points.size(); ++p) {
    site_[std::size_t(iy[p] - iy_min) * nx + (ix[p] - ix_min)] = int(p);
  }
}

namespace {

template <class Inside>
InteriorGrid lattice_inside(double spacing, double half_x, double half_y, Inside inside) {
  InteriorGrid grid;
  grid.spacing = spacing;
  const int nx = int(std::ceil(half_x / spacing)) + 1;
  const int ny = int(std::ceil(half_y / spacing)) + 1;
  for (int j = -ny; j <= ny; ++j) {
    for (int i = -nx; i <= nx; ++i) {
      const Point p{i * spacing, j * spacing};
      if (inside(p)) {
        grid.points.push_back(p);
        grid.ix.push_back(i);
        grid.iy.push_back(j);
      }
    }
  }
  return grid;
}

long count_inside(const BoundaryShape& shape, double spacing) {
  const double hx = shape.semi_major() + shape.semi_minor();
  const int n = int(std::ceil(hx / spacing)) + 1;
  long count = 0;
  for (int j = -n; j <= n; ++j) {
    for (int i = -n; i <= n; ++i) {
      if (shape.contains({i * spacing, j * spacing})) ++count;
    }
  }
  return count;
}

}  // namespace

InteriorGrid interior_grid(const BoundaryShape& shape, int target_n) {
  if (target_n < 100) throw InvalidParameter("interior grid needs target_N >= 100");
  const double nominal = std::sqrt(shape.area() / target_n);
  if (!(nominal > 1e-9)) throw GeometryError("degenerate shape: no interior lattice");

  // Bracket: lo holds >= target points, hi holds fewer.
  double lo = nominal * 0.8;
  double hi = nominal * 1.25;
  int guard = 0;
  while (count_inside(shape, lo) < target_n) {
    lo *= 0.8;
    if (++guard > 40 || lo < 1e-9) throw GeometryError("target_N unreachable for this shape");
  }
  guard = 0;
  while (count_inside(shape, hi) >= target_n) {
    hi *= 1.25;
    if (++guard > 40) throw GeometryError("lattice spacing search failed");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_inside(shape, mid) >= target_n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // The bisection ends where a lattice point touches the boundary. Shrink the
  // spacing until the kept points clear the boundary by a quarter spacing, so
  // the layer potentials stay resolvable there.
  const double ext = shape.semi_major() + shape.semi_minor();
  double spacing = lo;
  InteriorGrid full;
  for (int attempt = 0;; ++attempt) {
    full = lattice_inside(spacing, ext, ext, [&](Point p) { return shape.contains(p); });
    full.boundary_distance.resize(full.points.size());
    for (std::size_t p = 0; p < full.points.size(); ++p) {
      full.boundary_distance[p] = shape.distance_to_boundary(full.points[p]);
    }
    std::vector<double> d = full.boundary_distance;
    const auto cut = d.begin() + (d.size() - std::size_t(target_n));
    std::nth_element(d.begin(), cut, d.end());
    if (*cut >= 0.25 * spacing) break;
    if (attempt == 400) throw GeometryError("no lattice clears the boundary");
    spacing *= 0.998;
  }
  const std::size_t count = full.points.size();

  // Trim the points nearest the boundary; among ties the lower lattice index goes first.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return full.boundary_distance[a] < full.boundary_distance[b];
  });
  std::vector<char> keep(count, 1);
  for (std::size_t r = 0; r < count - std::size_t(target_n); ++r) keep[order[r]] = 0;

  InteriorGrid grid;
  grid.spacing = spacing;
  for (std::size_t p = 0; p < count; ++p) {
    if (!keep[p]) continue;
    grid.points.push_back(full.points[p]);
    grid.ix.push_back(full.ix[p]);
    grid.iy.push_back(full.iy[p]);
    grid.boundary_distance.push_back(full.boundary_distance[p]);
  }
  grid.reindex();
  return grid;
}

InteriorGrid common_lattice(const std::vector<BoundaryShape>& shapes, double spacing,
                            double margin) {
  if (shapes.empty()) throw InvalidParameter("common_lattice needs at least one shape");
  if (!(spacing > 0.0)) throw InvalidParameter("lattice spacing must be positive");
  double ext = 0.0;
  for (const auto& s : shapes) ext = std::max(ext, s.semi_major() + s.semi_minor());
  InteriorGrid grid = lattice_inside(spacing, ext, ext, [&](Point p) {
    for (const auto& s : shapes) {
      if (!s.contains(p)) return false;
    }
    return true;
  });
  InteriorGrid kept;
  kept.spacing = spacing;
  for (std::size_t p = 0; p < grid.points.size(); ++p) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : shapes) d = std::min(d, s.distance_to_boundary(grid.points[p]));
    if (d < margin) continue;
    kept.points.push_back(grid.points[p]);
    kept.ix.push_back(grid.ix[p]);
    kept.iy.push_back(grid.iy[p]);
    kept.boundary_distance.push_back(d);
  }
  if (kept.points.empty()) throw GeometryError("no lattice point common to all shapes");
  kept.reindex();
  return kept;
}

}  // namespace billiards
