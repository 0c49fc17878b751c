#pragma once

// Crossing versus avoided-crossing analysis of branch pairs.

#include <string>
#include <vector>

#include "billiards/sweep.hpp"

namespace billiards {

struct GapPoint {
  double p = 0.0;
  /// |Re k1 - Re k2|.
  double gap = 0.0;
  /// Re k1 - Re k2.
  double diff = 0.0;
};

/// Gap on the union of both branches' sample parameters inside their common
/// range, with each branch linearly interpolated. Throws ContractError when
/// the ranges do not overlap.
std::vector<GapPoint> gap_profile(const BranchTrajectory& t1, const BranchTrajectory& t2);

enum class Verdict { yes, no, not_applicable };
std::string to_string(Verdict v);

enum class EncounterClass { crossing, avoided_crossing, inconclusive };
std::string to_string(EncounterClass c);

struct GapMinimum {
  double p_star = 0.0;
  double g_min = 0.0;
  /// The minimum is not at either end of the profile.
  bool interior = false;
  /// Re k1 - Re k2 changes sign, so the levels cross between samples.
  bool sign_change = false;
};

/// Smallest gap. When the signed difference changes sign the crossing point
/// is located by linear interpolation and g_min is 0.
GapMinimum find_gap_minimum(const std::vector<GapPoint>& profile);

/// Classification from the gap alone: crossing when g_min < crossing_tol,
/// avoided crossing otherwise, inconclusive for a minimum at the window edge.
EncounterClass classify_crossing(const std::vector<GapPoint>& profile, double crossing_tol);

struct ExchangeCheck {
  /// Overlaps between the window end points: same branch and across.
  double same_1 = 0.0, same_2 = 0.0;
  double cross_12 = 0.0, cross_21 = 0.0;
  bool exchanged() const { return cross_12 + cross_21 > same_1 + same_2; }
};

/// Tracking-lattice intensity overlaps between the first and last samples of
/// both branches inside [p_a, p_b].
ExchangeCheck intensity_exchange(const BranchTrajectory& t1, const BranchTrajectory& t2,
                                 double p_a, double p_b);

struct EntropySignature {
  Verdict max_at_center = Verdict::not_applicable;
  Verdict exchange = Verdict::not_applicable;
  /// Sub-interval where g <= 2 g_min around p*.
  double center_lo = 0.0, center_hi = 0.0;
  double p_max_1 = 0.0, p_max_2 = 0.0;
  double s_max_1 = 0.0, s_max_2 = 0.0;
};

/// Entropy verdicts inside the window [p_a, p_b].
EntropySignature entropy_signature(const BranchTrajectory& t1, const BranchTrajectory& t2,
                                   const std::vector<GapPoint>& profile, const GapMinimum& minimum,
                                   double p_a, double p_b);

struct AvoidedCrossingReport {
  int branch_1 = 0;
  int branch_2 = 0;
  Parity parity_1, parity_2;
  std::vector<GapPoint> profile;
  GapMinimum minimum;
  EncounterClass classification = EncounterClass::inconclusive;
  std::string reason;
  double window_lo = 0.0, window_hi = 0.0;
  ExchangeCheck intensity;
  EntropySignature entropy;
  double entropy_range_1 = 0.0, entropy_mean_1 = 0.0;
  double entropy_range_2 = 0.0, entropy_mean_2 = 0.0;

  bool same_parity() const { return parity_1 == parity_2; }
};

/// Full analysis of one pair over the common parameter range. An avoided
/// crossing additionally needs the intensity patterns to be exchanged across
/// the window; without exchange the verdict is inconclusive.
AvoidedCrossingReport analyze_pair(const BranchTrajectory& t1, const BranchTrajectory& t2,
                                   double crossing_tol);

/// Reports for every branch pair whose gap has an interior minimum below
/// `max_gap`, ordered by g_min.
std::vector<AvoidedCrossingReport> find_encounters(const std::vector<BranchTrajectory>& branches,
                                                   double crossing_tol, double max_gap);

}  // namespace billiards
