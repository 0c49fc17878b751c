#pragma once

// Subcommands of the command-line tool. Each one reads a RunConfig, writes
// its outputs under RunConfig::out and returns the process exit status.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "billiards/detect.hpp"
#include "billiards/sweep.hpp"
#include "billiards/twolevel.hpp"

namespace billiards {

struct RunConfig {
  std::string command = "sweep";

  // geometry and sweep; the range is in eccentricity (ellipse) or eps
  std::string shape = "ellipse";
  double range_lo = 0.77;
  double range_hi = 0.85;
  /// Step in the sweep parameter (chi for the ellipse, eps for the quadrupole).
  double dp = 1e-3;
  bool adaptive = true;
  double dp_min = 1e-5;
  std::string problem = "closed";
  double n_index = 2.0;
  double k_lo = 4.0;
  double k_hi = 10.0;
  double im_lo = -1.0;
  double im_hi = 0.0;
  /// 1 even, -1 odd, 0 both
  int parity_x = 0;
  int parity_y = 0;
  int grid_n = 4166;

  // solver
  double ppw = 12.0;
  double tol = 1e-8;
  double singular_threshold = 1e-6;
  double scan_step = 0.1;
  int max_iterations = 40;

  // tracking and detection
  double tracking_weight = 1e6;
  double continuity_threshold = 0.5;
  double tracking_spacing = 0.05;
  /// Defaults to 10 tol when <= 0.
  double crossing_tol = 0.0;
  double max_gap = 0.5;

  // outputs
  std::string out = "out";
  bool dump_fields = false;
  /// Recorded only; no step of the pipeline is randomized.
  std::uint64_t seed = 0;

  // field
  int branch = 0;
  double param = 0.0;

  // validate
  double dirichlet_tol = 1e-6;
  double tm_tol = 1e-5;
  bool validate_open = true;

  // entropy-compare, range in eccentricity
  double compare_lo = 0.770;
  double compare_hi = 0.785;
  double compare_dp = 1e-3;
  /// Closed Re k window; derived from n k_lo .. 1.25 n k_hi when both are 0.
  double compare_closed_lo = 0.0;
  double compare_closed_hi = 0.0;

  // twolevel
  double tl_slope1 = 1.0;
  double tl_slope2 = -1.0;
  double tl_offset1 = 0.0;
  double tl_offset2 = 0.0;
  double tl_g_re = 0.05;
  double tl_g_im = 0.0;
  double tl_gamma1 = 0.0;
  double tl_gamma2 = 0.0;
  double tl_p_lo = -0.5;
  double tl_p_hi = 0.5;
  int tl_steps = 201;

  /// Calls f(name, member) for every key in the fixed output order.
  template <class Self, class F>
  static void visit(Self& c, F&& f) {
    f("command", c.command);
    f("shape", c.shape);
    f("range_lo", c.range_lo);
    f("range_hi", c.range_hi);
    f("dp", c.dp);
    f("adaptive", c.adaptive);
    f("dp_min", c.dp_min);
    f("problem", c.problem);
    f("n_index", c.n_index);
    f("k_lo", c.k_lo);
    f("k_hi", c.k_hi);
    f("im_lo", c.im_lo);
    f("im_hi", c.im_hi);
    f("parity_x", c.parity_x);
    f("parity_y", c.parity_y);
    f("grid_n", c.grid_n);
    f("ppw", c.ppw);
    f("tol", c.tol);
    f("singular_threshold", c.singular_threshold);
    f("scan_step", c.scan_step);
    f("max_iterations", c.max_iterations);
    f("tracking_weight", c.tracking_weight);
    f("continuity_threshold", c.continuity_threshold);
    f("tracking_spacing", c.tracking_spacing);
    f("crossing_tol", c.crossing_tol);
    f("max_gap", c.max_gap);
    f("out", c.out);
    f("dump_fields", c.dump_fields);
    f("seed", c.seed);
    f("branch", c.branch);
    f("param", c.param);
    f("dirichlet_tol", c.dirichlet_tol);
    f("tm_tol", c.tm_tol);
    f("validate_open", c.validate_open);
    f("compare_lo", c.compare_lo);
    f("compare_hi", c.compare_hi);
    f("compare_dp", c.compare_dp);
    f("compare_closed_lo", c.compare_closed_lo);
    f("compare_closed_hi", c.compare_closed_hi);
    f("tl_slope1", c.tl_slope1);
    f("tl_slope2", c.tl_slope2);
    f("tl_offset1", c.tl_offset1);
    f("tl_offset2", c.tl_offset2);
    f("tl_g_re", c.tl_g_re);
    f("tl_g_im", c.tl_g_im);
    f("tl_gamma1", c.tl_gamma1);
    f("tl_gamma2", c.tl_gamma2);
    f("tl_p_lo", c.tl_p_lo);
    f("tl_p_hi", c.tl_p_hi);
    f("tl_steps", c.tl_steps);
  }

  double effective_crossing_tol() const { return crossing_tol > 0.0 ? crossing_tol : 10.0 * tol; }
  ShapeKind shape_kind() const;
  /// Sweep parameter for an eccentricity or eps value.
  double to_param(double shape_value) const;

  /// Every key as "key = value", one per line, in a fixed order.
  std::string resolved() const;
  /// Hash of resolved() without the output directory.
  std::uint64_t hash() const;

  SweepConfig sweep_config() const;
  SolverOptions solver_options() const;
};

int cmd_validate(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_field(const RunConfig& cfg, std::ostream& log);
int cmd_entropy_compare(const RunConfig& cfg, std::ostream& log);
int cmd_twolevel(const RunConfig& cfg, std::ostream& log);

/// Dispatches on cfg.command.
int run_command(const RunConfig& cfg, std::ostream& log);

/// Report lines for one analyzed encounter, keys prefixed with `prefix`.
std::string encounter_report(const AvoidedCrossingReport& r, const std::string& prefix,
                             ShapeKind shape);

// Results of the comparison of matched closed and open branches.
struct EntropyComparison {
  struct Pair {
    int closed_branch = 0;
    int open_branch = 0;
    /// Weight of the closed mode in the open one, |<closed|open>|^2 on the
    /// entropy grid, or the intensity overlap when no amplitudes were kept.
    double overlap = 0.0;
    std::vector<double> e, s_closed, s_open;
    bool open_larger_everywhere() const;
  };
  std::vector<Pair> pairs;
  double s_max = 0.0;
  /// Mean |S1 - S2| of the first two matched pairs sharing a parity sector,
  /// closed and open; negative when no such couple exists.
  double spread_closed = -1.0;
  double spread_open = -1.0;
  std::vector<std::string> diagnostics;
};

EntropyComparison compare_entropies(const SweepResult& closed, const SweepResult& open,
                                    int grid_n);

}  // namespace billiards
