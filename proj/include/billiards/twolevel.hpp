#pragma once

// Two-level effective Hamiltonian
//
//   H(p) = [[e1(p) - i g1, g      ],
//           [conj(g),      e2(p) - i g2]]
//
// with affine levels. It reproduces level repulsion and coherent mixing of
// two basis states in closed form, which makes it an exact reference for the
// tracker and the crossing detector.

#include <array>
#include <utility>

#include "billiards/entropy.hpp"
#include "billiards/sweep.hpp"

namespace billiards {

struct AffineLevel {
  double offset = 0.0;
  double slope = 0.0;
  double operator()(double p) const { return offset + slope * p; }
};

struct TwoLevelSystem {
  AffineLevel e1;
  AffineLevel e2;
  cplx g;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  /// Basis states with amplitudes on one grid, orthonormal as amplitude
  /// vectors. Only needed by surrogate_sweep.
  ProbabilityField basis1;
  ProbabilityField basis2;

  /// Parameter where Re of the diagonal entries coincide. Throws
  /// ContractError for parallel levels.
  double degeneracy_point() const;
  /// sqrt((e1 - e2)^2 + 4 |g|^2), the Hermitian gap.
  double hermitian_gap(double p) const;
};

struct EigenPair {
  cplx value;
  /// Unit norm; the larger component is real and positive.
  std::array<cplx, 2> vector;
};

/// Closed-form eigenpairs ordered by Re (then Im) of the eigenvalue. With
/// g = 0 the diagonal order is kept, so exactly crossing levels keep their
/// labels.
std::pair<EigenPair, EigenPair> eigenpairs(const TwoLevelSystem& sys, double p);

/// Two trajectories over `steps` equally spaced parameters in [p_lo, p_hi].
/// Hermitian systems keep the eigenvalue order (exact adiabatic labels);
/// with decay the branches are continued by linear extrapolation. Every
/// sample holds the mixed intensity of the basis states and its entropy.
std::pair<BranchTrajectory, BranchTrajectory> surrogate_sweep(const TwoLevelSystem& sys,
                                                              double p_lo, double p_hi,
                                                              int steps);

/// Orthonormal basis states on `grid` with disjoint supports (x < 0 and
/// x > 0) and different entropies.
std::pair<ProbabilityField, ProbabilityField> split_basis(std::shared_ptr<const InteriorGrid> grid);

}  // namespace billiards
