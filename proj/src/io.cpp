#include "billiards/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "billiards/errors.hpp"

#ifndef BILLIARDS_VERSION
#define BILLIARDS_VERSION "0.0.0"
#endif

namespace billiards {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_header(std::uint64_t config_hash) {
  return std::string("# billiards ") + BILLIARDS_VERSION + " config_hash=" + hex64(config_hash);
}

void write_trajectories_csv(std::ostream& os, const std::string& header,
                            const std::vector<BranchTrajectory>& branches) {
  os << header << '\n';
  os << "branch_id,param,eccentricity_or_eps,re_kR,im_kR,entropy_nats,parity_x,parity_y,"
        "sigma_min,status\n";
  for (const auto& b : branches) {
    for (const auto& s : b.samples) {
      os << b.id << ',' << format_double(s.param) << ',' << format_double(s.shape_value) << ','
         << format_double(s.k.real()) << ',' << format_double(s.k.imag()) << ','
         << format_double(s.entropy) << ',' << parity_label(s.parity.x) << ','
         << parity_label(s.parity.y) << ',' << format_double(s.sigma_min) << ',' << s.status
         << '\n';
    }
  }
}

std::vector<CsvRow> read_trajectories_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open " + path);
  std::vector<CsvRow> rows;
  std::string line;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_columns) {
      seen_columns = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw ContractError("malformed trajectory row: " + line);
    CsvRow r;
    r.branch_id = std::stoi(f[0]);
    r.param = std::stod(f[1]);
    r.shape_value = std::stod(f[2]);
    r.re_k = std::stod(f[3]);
    r.im_k = std::stod(f[4]);
    r.entropy = std::stod(f[5]);
    r.parity_x = f[6];
    r.parity_y = f[7];
    r.sigma_min = std::stod(f[8]);
    r.status = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_field_dump(std::ostream& os, const std::string& header, const ProbabilityField& field) {
  if (!field.grid || field.grid->size() != field.size()) {
    throw ContractError("field dump needs a field on its grid");
  }
  const InteriorGrid& g = *field.grid;
  const int nx = g.ix_max - g.ix_min + 1;
  const int ny = g.iy_max - g.iy_min + 1;
  os << header << '\n';
  os << nx << ' ' << ny << ' ' << format_double(g.xmin()) << ' ' << format_double(g.xmax()) << ' '
     << format_double(g.ymin()) << ' ' << format_double(g.ymax()) << ' ' << g.size() << '\n';
  for (int j = g.iy_min; j <= g.iy_max; ++j) {
    for (int i = g.ix_min; i <= g.ix_max; ++i) {
      const int idx = g.find(i, j);
      os << (idx < 0 ? std::string("nan") : format_double(field.rho[idx])) << '\n';
    }
  }
}

std::vector<double> FieldDump::inside() const {
  std::vector<double> out;
  out.reserve(n_inside);
  for (double v : values) {
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.empty() || line[0] != '#') throw ContractError("field dump without header: " + path);
  FieldDump d;
  if (!(in >> d.nx >> d.ny >> d.xmin >> d.xmax >> d.ymin >> d.ymax >> d.n_inside)) {
    throw ContractError("bad field dump dimensions: " + path);
  }
  const long total = long(d.nx) * d.ny;
  d.values.reserve(total);
  std::string tok;
  while (in >> tok) {
    d.values.push_back(tok == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(tok));
  }
  if (long(d.values.size()) != total) throw ContractError("truncated field dump: " + path);
  if (long(d.inside().size()) != d.n_inside) throw ContractError("inside count mismatch: " + path);
  return d;
}

void write_trajectory_plot(std::ostream& os, const std::string& header,
                           const std::vector<BranchTrajectory>& branches) {
  os << header << '\n';
  os << "# param shape_value re_kR im_kR entropy_nats\n";
  for (const auto& b : branches) {
    os << "\n\n# branch " << b.id << ' ' << parity_label(b.parity.x) << ' '
       << parity_label(b.parity.y) << '\n';
    for (const auto& s : b.samples) {
      os << format_double(s.param) << ' ' << format_double(s.shape_value) << ' '
         << format_double(s.k.real()) << ' ' << format_double(s.k.imag()) << ' '
         << format_double(s.entropy) << '\n';
    }
  }
}

}  // namespace billiards
