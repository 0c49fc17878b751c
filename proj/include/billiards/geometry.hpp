#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace billiards {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a);

enum class ShapeKind { circle, ellipse, quadrupole };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

/// Smooth closed billiard boundary t in [0, 2pi) -> (x, y), traversed
/// counter-clockwise. Ellipse and quadrupole are mirror symmetric about both
/// axes and the parametrization respects that: y-mirror maps t -> -t and
/// x-mirror maps t -> pi - t.
class BoundaryShape {
 public:
  static BoundaryShape circle(double radius);
  /// Constant-area ellipse with semi-axes a = 1 + chi, b = 1 / (1 + chi).
  static BoundaryShape ellipse(double chi);
  /// r(phi) = 1 + eps cos(2 phi), parametrized by the polar angle.
  static BoundaryShape quadrupole(double eps);

  ShapeKind kind() const { return kind_; }
  /// chi, eps or radius depending on kind.
  double parameter() const { return parameter_; }
  /// Eccentricity for an ellipse, eps for a quadrupole, 0 for a circle.
  double shape_value() const;

  double semi_major() const;
  double semi_minor() const;

  Point position(double t) const;
  Point tangent(double t) const;
  Point second_derivative(double t) const;
  double speed(double t) const;
  /// Unit outward normal.
  Point normal(double t) const;

  bool contains(Point p) const;
  /// Enclosed area, in closed form.
  double area() const;
  /// Upper bound of |x'(t)|.
  double max_speed() const;
  /// Arc length by a dense trapezoid rule (spectrally accurate).
  double perimeter(int samples = 4096) const;
  /// Euclidean distance from p to the boundary curve and the foot parameter.
  double distance_to_boundary(Point p, double* foot_t = nullptr) const;

 private:
  BoundaryShape(ShapeKind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  ShapeKind kind_;
  double parameter_;
};

BoundaryShape ellipse_shape(double chi);
BoundaryShape quadrupole_shape(double eps);
/// e = sqrt(1 - (b/a)^2) = sqrt(1 - (1 + chi)^-4).
double eccentricity(double chi);
/// Inverse of eccentricity() on chi >= 0.
double chi_from_eccentricity(double e);

/// Equispaced Nystrom nodes t_j = 2 pi j / M with trapezoid weights.
/// M is a multiple of four so the node set is invariant under both mirrors.
struct BoundaryDiscretization {
  std::shared_ptr<const BoundaryShape> shape;
  std::vector<double> t;
  std::vector<Point> nodes;
  std::vector<Point> normals;
  std::vector<double> speeds;
  /// nu . x'' at each node (curvature term of the double-layer diagonal).
  std::vector<double> normal_curvature;
  /// Arc-length quadrature weights, speed * 2 pi / M.
  std::vector<double> weights;
  double element_size = 0.0;

  std::size_t size() const { return nodes.size(); }
};

/// Nodes so that the largest element is at most (2 pi / k_hint) /
/// elements_per_wavelength.
BoundaryDiscretization discretize(const BoundaryShape& shape, double elements_per_wavelength,
                                  double k_hint);
/// Fixed node count (multiple of four).
BoundaryDiscretization discretize_nodes(const BoundaryShape& shape, int node_count);
/// Node count discretize() would choose.
int required_node_count(const BoundaryShape& shape, double elements_per_wavelength,
                        double k_hint);

/// Lattice points strictly inside a shape. The lattice is centred on the
/// origin, so mirror images of lattice sites are lattice sites. Points are
/// stored in row-major lattice order (iy, then ix).
struct InteriorGrid {
  std::vector<Point> points;
  std::vector<int> ix;
  std::vector<int> iy;
  /// Distance of each point to the boundary.
  std::vector<double> boundary_distance;
  double spacing = 0.0;
  int ix_min = 0, ix_max = -1, iy_min = 0, iy_max = -1;

  std::size_t size() const { return points.size(); }
  double xmin() const { return ix_min * spacing; }
  double xmax() const { return ix_max * spacing; }
  double ymin() const { return iy_min * spacing; }
  double ymax() const { return iy_max * spacing; }
  /// Index of the point at lattice site (i, j), or -1.
  int find(int i, int j) const;
  /// Rebuilds the site lookup table after points/ix/iy were edited.
  void reindex();

 private:
  std::vector<int> site_;
};

/// Exactly target_n quasi-uniform interior points: the lattice spacing is
/// about the largest one holding at least target_n inside points, reduced
/// until the kept points are at least a quarter spacing from the boundary;
/// the points nearest the boundary are trimmed (ties broken by lattice index).
InteriorGrid interior_grid(const BoundaryShape& shape, int target_n);

/// Lattice points of the given spacing lying inside every listed shape at
/// least `margin` away from each boundary.
InteriorGrid common_lattice(const std::vector<BoundaryShape>& shapes, double spacing,
                            double margin);

}  // namespace billiards
