#pragma once

// Boundary integral operators for the closed (Dirichlet) and open
// (dielectric, TM) Helmholtz problems on smooth billiard boundaries.
//
// Discretization is a Nystrom scheme on equispaced parameter nodes. The
// logarithmic singularity of the kernels is split off and integrated exactly
// against the trigonometric interpolant of the density (Kress quadrature),
// which converges spectrally on analytic boundaries.
//
// Closed problem: single-layer operator S(k) acting on phi = d_nu psi.
// Open problem:   unknowns [psi; phi] on the boundary, rows
//                   (1/2 + K_{nk}) psi - S_{nk} phi = 0   (interior side, standing kernel -Y0/4)
//                   (1/2 - K_k)    psi + S_k    phi = 0   (exterior side)
//                 so value and normal derivative are continuous by
//                 construction.

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "billiards/entropy.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

enum class ProblemKind { dirichlet_closed, dielectric_tm };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

/// Mirror parities, +1 even and -1 odd.
struct Parity {
  int x = 1;
  int y = 1;
  friend bool operator==(const Parity&, const Parity&) = default;
};

std::string parity_label(int sign);

struct BemMatrix {
  Eigen::MatrixXcd values;
  cplx k;
  ProblemKind kind = ProblemKind::dirichlet_closed;
  double n_index = 1.0;
};

BemMatrix assemble_dirichlet(const BoundaryDiscretization& disc, double k);
BemMatrix assemble_dielectric_tm(const BoundaryDiscretization& disc, cplx k, double n_index);
/// The same operators with a complex k, for resonance searches.
BemMatrix assemble(const BoundaryDiscretization& disc, ProblemKind kind, cplx k,
                   double n_index);

double min_singular_value(const Eigen::MatrixXcd& m);
double min_singular_value(const BemMatrix& m);

/// Right singular vector of the smallest singular value, unit norm, with the
/// largest-magnitude entry made real and positive. Throws NotSingularError
/// when sigma_min / sigma_max exceeds `relative_threshold`.
Eigen::VectorXcd boundary_null_vector(const Eigen::MatrixXcd& m, double relative_threshold);
Eigen::VectorXcd boundary_null_vector(const BemMatrix& m, double relative_threshold = 1e-6);

/// Orthonormal basis of the densities with given mirror parities. Every
/// basis vector is supported on one orbit of nodes under the two mirrors.
class SectorBasis {
 public:
  SectorBasis(int node_count, Parity parity);

  Parity parity() const { return parity_; }
  int node_count() const { return node_count_; }
  /// Reduced dimension per scalar unknown.
  int size() const { return int(orbits_.size()); }
  /// Representative node of each orbit.
  int representative(int orbit) const { return orbits_[orbit].members[0]; }

  /// Full node vector from reduced coordinates (one scalar unknown).
  Eigen::VectorXcd expand(const Eigen::Ref<const Eigen::VectorXcd>& reduced) const;
  /// Reduced coordinates of a full node vector (orthogonal projection).
  Eigen::VectorXcd reduce(const Eigen::Ref<const Eigen::VectorXcd>& full) const;

  struct Orbit {
    std::vector<int> members;
    std::vector<double> signs;
  };
  const std::vector<Orbit>& orbits() const { return orbits_; }

 private:
  int node_count_;
  Parity parity_;
  std::vector<Orbit> orbits_;
};

inline constexpr Parity kAllParities[4] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};

/// A(k) and dA/dk restricted to one parity sector.
struct SectorOperator {
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd da;
};

SectorOperator assemble_sector(const BoundaryDiscretization& disc, ProblemKind kind, cplx k,
                               double n_index, const SectorBasis& basis);

// ---------------------------------------------------------------------------

struct SolverOptions {
  double elements_per_wavelength = 12.0;
  /// Root tolerance in kR.
  double tol = 1e-8;
  /// sigma_min / sigma_max accepted as singular.
  double singular_threshold = 1e-6;
  int max_iterations = 40;
  /// Spacing of linearization centres in a discovery scan.
  double scan_step = 0.1;
};

/// One eigenmode or resonance. The interior field is filled only when a grid
/// was supplied.
struct ModeSolution {
  cplx k;
  ProblemKind kind = ProblemKind::dirichlet_closed;
  double n_index = 1.0;
  /// phi for closed problems, [psi; phi] for open ones, on the full node set.
  Eigen::VectorXcd boundary_density;
  Eigen::VectorXcd reduced_density;
  ProbabilityField field;
  Parity parity;
  double sigma_min = 0.0;
  bool converged = true;
  std::string diagnostic;
};

/// Root of the sector-reduced nonlinear eigenproblem A(k) v = 0.
struct SectorRoot {
  cplx k;
  Eigen::VectorXcd vector;
  double sigma_rel = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nonlinear eigenvalue search on a fixed discretization.
///
/// Roots are found by successive linear problems: at a centre k0 the pencil
/// A(k0) v = lambda A'(k0) v gives first-order estimates k0 - lambda of every
/// nearby root, including nearly degenerate pairs, and each estimate is then
/// iterated to convergence on the same linearization.
class ModeSolver {
 public:
  ModeSolver(BoundaryDiscretization disc, ProblemKind kind, double n_index,
             SolverOptions options = {});

  const BoundaryDiscretization& discretization() const { return disc_; }
  const SolverOptions& options() const { return options_; }
  ProblemKind kind() const { return kind_; }
  double n_index() const { return n_index_; }
  const SectorBasis& basis(Parity parity) const;

  /// Every root within `radius` of `center` in one sector.
  std::vector<SectorRoot> roots_near(Parity parity, cplx center, double radius) const;
  /// Converges one root starting from `start`.
  SectorRoot refine(Parity parity, cplx start) const;
  /// sigma_min / sigma_max and null vector of the reduced operator.
  std::pair<double, Eigen::VectorXcd> null_space(Parity parity, cplx k) const;

  /// Mode record (with interior field when `grid` is given) for a root.
  ModeSolution make_solution(Parity parity, const SectorRoot& root,
                             std::shared_ptr<const InteriorGrid> grid) const;

  /// Real roots in [k_lo, k_hi] over all four sectors.
  std::vector<ModeSolution> scan_real(double k_lo, double k_hi,
                                      std::shared_ptr<const InteriorGrid> grid,
                                      std::vector<std::string>* diagnostics = nullptr) const;
  /// Complex roots in the rectangle over all four sectors.
  std::vector<ModeSolution> scan_complex(double re_lo, double re_hi, double im_lo, double im_hi,
                                         std::shared_ptr<const InteriorGrid> grid,
                                         std::vector<std::string>* diagnostics = nullptr) const;

 private:
  std::vector<SectorRoot> scan_sector(Parity parity, const std::vector<cplx>& centers,
                                      double radius) const;
  BoundaryDiscretization disc_;
  ProblemKind kind_;
  double n_index_;
  SolverOptions options_;
  std::vector<SectorBasis> bases_;
};

std::vector<ModeSolution> find_real_eigen_k(const BoundaryShape& shape, double k_lo, double k_hi,
                                            double tol, const SolverOptions& options = {},
                                            std::shared_ptr<const InteriorGrid> grid = nullptr);

std::vector<ModeSolution> find_complex_resonances(
    const BoundaryShape& shape, double n_index, double re_lo, double re_hi, double im_lo,
    double im_hi, double tol, const SolverOptions& options = {},
    std::shared_ptr<const InteriorGrid> grid = nullptr,
    std::vector<std::string>* diagnostics = nullptr);

// ---------------------------------------------------------------------------

struct InteriorEvaluation {
  ProbabilityField field;
  /// Points closer to the boundary than one element, evaluated with a
  /// refined boundary quadrature.
  int near_boundary_points = 0;
  /// Points still under-resolved at the finest refinement.
  int unresolved_points = 0;
};

/// psi at the grid points from the layer-potential representation (interior
/// wavenumber n k for the open problem, k for the closed one), normalized to
/// sum rho = 1.
/// With `parity` given, values at mirror images of computed points are
/// copied with the parity signs instead of evaluated.
InteriorEvaluation evaluate_interior(const BoundaryDiscretization& disc,
                                     const Eigen::VectorXcd& density, cplx k, double n_index,
                                     ProblemKind kind, std::shared_ptr<const InteriorGrid> grid,
                                     const Parity* parity = nullptr);

/// Unnormalized psi at arbitrary interior points.
std::vector<cplx> evaluate_wave(const BoundaryDiscretization& disc,
                                const Eigen::VectorXcd& density, cplx k, double n_index,
                                ProblemKind kind, const std::vector<Point>& points);

// ---------------------------------------------------------------------------

struct CircleEigenvalue {
  double k;
  int m;
  int n;
  int multiplicity;
};

/// Dirichlet eigenvalues j_{m,n} of the unit disk in [k_lo, k_hi], m <= m_max.
std::vector<CircleEigenvalue> circle_dirichlet_oracle(int m_max, double k_lo, double k_hi);

struct CircleResonance {
  cplx k;
  int m;
  int multiplicity;
};

/// n J_m'(n k) H_m(k) - J_m(n k) H_m'(k) for the unit disk.
cplx circle_tm_characteristic(int m, double n_index, cplx k);

/// Roots of the TM characteristic function in the rectangle, found by
/// complex Newton from a grid of starts with spacing `start_step`.
std::vector<CircleResonance> circle_tm_resonance_oracle(double n_index, int m_max, double re_lo,
                                                        double re_hi, double im_lo,
                                                        double im_hi, double start_step = 0.1);

}  // namespace billiards
