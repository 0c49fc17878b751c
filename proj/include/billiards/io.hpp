#pragma once

// Text formats: trajectory CSV, field dumps and key = value reports. Every
// file starts with a comment line naming the tool version and the hash of the
// resolved configuration that produced it.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "billiards/entropy.hpp"
#include "billiards/sweep.hpp"

namespace billiards {

/// 17 significant digits, enough for an exact round trip.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

/// "# billiards <version> config_hash=<hex>"
std::string file_header(std::uint64_t config_hash);

struct CsvRow {
  int branch_id = 0;
  double param = 0.0;
  double shape_value = 0.0;
  double re_k = 0.0;
  double im_k = 0.0;
  double entropy = 0.0;
  std::string parity_x, parity_y;
  double sigma_min = 0.0;
  std::string status;
};

void write_trajectories_csv(std::ostream& os, const std::string& header,
                            const std::vector<BranchTrajectory>& branches);
/// Reads a file written by write_trajectories_csv; comment lines are skipped.
std::vector<CsvRow> read_trajectories_csv(const std::string& path);

/// Field on its lattice: nx * ny values row by row (y outer), exterior sites
/// written as "nan".
void write_field_dump(std::ostream& os, const std::string& header, const ProbabilityField& field);

struct FieldDump {
  int nx = 0, ny = 0;
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  long n_inside = 0;
  /// Row-major, NaN outside.
  std::vector<double> values;

  /// Inside values in file order.
  std::vector<double> inside() const;
};

FieldDump read_field_dump(const std::string& path);

/// Gnuplot-style blocks, one per branch: param shape_value re_k im_k entropy.
void write_trajectory_plot(std::ostream& os, const std::string& header,
                           const std::vector<BranchTrajectory>& branches);

}  // namespace billiards
