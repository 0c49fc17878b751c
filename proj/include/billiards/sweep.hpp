#pragma once

// Continuation of eigenmodes along a deformation parameter.
//
// The parameter is chi for the ellipse and eps for the quadrupole. Every mode
// found in the k-window at the first parameter value becomes a branch and is
// followed to the last one. At each step the roots near every branch's linear
// prediction are located in the branch's symmetry sector, and branches are
// matched to roots by minimizing w |k - k_pred| + (1 - overlap).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "billiards/bem.hpp"
#include "billiards/entropy.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

struct SweepConfig {
  ShapeKind shape = ShapeKind::ellipse;
  /// chi (ellipse) or eps (quadrupole).
  double p_lo = 0.0;
  double p_hi = 0.0;
  double dp = 1e-3;
  bool adaptive = true;
  double dp_min = 1e-5;
  ProblemKind problem = ProblemKind::dirichlet_closed;
  double n_index = 2.0;
  /// Re k window at p_lo; the imaginary window applies to open problems.
  double k_lo = 4.0;
  double k_hi = 10.0;
  double im_lo = -1.0;
  double im_hi = 0.0;
  /// Mirror parities (+1, -1) of the tracked modes; 0 keeps both.
  int parity_x = 0;
  int parity_y = 0;
  int grid_n = 4166;
  SolverOptions solver;
  /// Weight of |k - k_pred| against overlap loss in the tracking cost.
  double tracking_weight = 1e6;
  /// Consecutive intensity overlap below which a branch is split.
  double continuity_threshold = 0.5;
  /// Spacing of the lattice shared by all shapes of the sweep, used for
  /// overlaps between different parameter values.
  double tracking_spacing = 0.05;
  bool keep_fields = false;
};

BoundaryShape sweep_shape(ShapeKind kind, double p);

/// Boundary node count used at every parameter of the sweep.
int sweep_node_count(const SweepConfig& cfg);

struct BranchSample {
  double param = 0.0;
  /// Eccentricity for the ellipse, eps for the quadrupole.
  double shape_value = 0.0;
  cplx k;
  double entropy = 0.0;
  Parity parity;
  double sigma_min = 0.0;
  std::string status = "ok";
  /// Normalized intensity on the common tracking lattice.
  std::vector<double> tracking_rho;
  /// Full solution; the interior field is kept only with keep_fields.
  std::shared_ptr<const ModeSolution> mode;
};

struct BranchTrajectory {
  int id = 0;
  Parity parity;
  std::vector<BranchSample> samples;
  bool truncated = false;
  std::string diagnostic;

  double p_min() const { return samples.front().param; }
  double p_max() const { return samples.back().param; }
};

struct SweepResult {
  std::vector<BranchTrajectory> branches;
  std::shared_ptr<const InteriorGrid> tracking_grid;
  int grid_n = 0;
  int node_count = 0;
  std::vector<std::string> diagnostics;
};

SweepResult run_sweep(const SweepConfig& cfg);

/// Bhattacharyya coefficient sum_i sqrt(rho1_i rho2_i).
double intensity_overlap(const ProbabilityField& f1, const ProbabilityField& f2);
double intensity_overlap(const std::vector<double>& rho1, const std::vector<double>& rho2);

/// Match of previous modes to new ones. assignment[i] is the index in `next`
/// given to prev[i], or -1 for a death; unmatched entries of next are births.
struct Assignment {
  std::vector<int> assignment;
  std::vector<int> births;
  double cost = 0.0;
};

/// Entries of `cost` that are not finite forbid the pairing.
Assignment solve_assignment(const std::vector<std::vector<double>>& cost);

/// Tracks modes carrying interior fields on one grid. Prediction defaults to
/// the previous wavenumbers; modes of different parity are never matched.
Assignment track_modes(const std::vector<ModeSolution>& prev, const std::vector<ModeSolution>& next,
                       double weight = 1e6, const std::vector<cplx>* predicted = nullptr);

struct ParityResult {
  /// +1 even, -1 odd, 0 mixed.
  int x = 0;
  int y = 0;
  /// sum |rho(x, y) - rho(mirror)| over mirror pairs present on the grid.
  double residual_x = 0.0;
  double residual_y = 0.0;
  bool mixed() const { return x == 0 || y == 0; }
};

std::string parity_label(const ParityResult& p, bool x_axis);

/// Parity from intensity alone: a mirror-symmetric intensity that vanishes on
/// the mirror axis is odd, one that does not is even; an intensity that is not
/// mirror symmetric is mixed.
ParityResult parity_classify(const ProbabilityField& f, const BoundaryShape& shape);

}  // namespace billiards
