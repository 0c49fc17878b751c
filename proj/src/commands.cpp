#include "billiards/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "billiards/errors.hpp"
#include "billiards/io.hpp"

namespace billiards {

namespace fs = std::filesystem;

namespace {

std::string value_text(const std::string& v) { return v; }
std::string value_text(double v) { return format_double(v); }
std::string value_text(bool v) { return v ? "true" : "false"; }
std::string value_text(int v) { return std::to_string(v); }
std::string value_text(std::uint64_t v) { return std::to_string(v); }

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  std::ofstream os(fs::path(cfg.out) / name);
  if (!os) throw LookupError("cannot write " + (fs::path(cfg.out) / name).string());
  return os;
}

void write_resolved(const RunConfig& cfg) {
  auto os = open_output(cfg, "config.resolved");
  os << file_header(cfg.hash()) << '\n' << cfg.resolved();
}

std::string header(const RunConfig& cfg) { return file_header(cfg.hash()); }

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

}  // namespace

ShapeKind RunConfig::shape_kind() const {
  if (shape == "ellipse") return ShapeKind::ellipse;
  if (shape == "quadrupole") return ShapeKind::quadrupole;
  if (shape == "circle") return ShapeKind::circle;
  throw InvalidParameter("unknown shape '" + shape + "'");
}

double RunConfig::to_param(double shape_value) const {
  return shape_kind() == ShapeKind::ellipse ? chi_from_eccentricity(shape_value) : shape_value;
}

std::string RunConfig::resolved() const {
  std::ostringstream os;
  visit(*this, [&](const char* name, const auto& v) { os << name << " = " << value_text(v) << '\n'; });
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  RunConfig c = *this;
  c.out.clear();
  return fnv1a64(c.resolved());
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.elements_per_wavelength = ppw;
  o.tol = tol;
  o.singular_threshold = singular_threshold;
  o.scan_step = scan_step;
  o.max_iterations = max_iterations;
  return o;
}

SweepConfig RunConfig::sweep_config() const {
  for (int v : {parity_x, parity_y}) {
    if (v < -1 || v > 1) throw InvalidParameter("parity filter must be -1, 0 or 1");
  }
  SweepConfig s;
  s.shape = shape_kind();
  s.p_lo = to_param(range_lo);
  s.p_hi = to_param(range_hi);
  s.dp = dp;
  s.adaptive = adaptive;
  s.dp_min = std::min(dp_min, dp);
  s.problem = problem_kind_from_string(problem);
  s.n_index = n_index;
  s.k_lo = k_lo;
  s.k_hi = k_hi;
  s.im_lo = im_lo;
  s.im_hi = im_hi;
  s.parity_x = parity_x;
  s.parity_y = parity_y;
  s.grid_n = grid_n;
  s.solver = solver_options();
  s.tracking_weight = tracking_weight;
  s.continuity_threshold = continuity_threshold;
  s.tracking_spacing = tracking_spacing;
  s.keep_fields = dump_fields;
  return s;
}

// ---------------------------------------------------------------------------

std::string encounter_report(const AvoidedCrossingReport& r, const std::string& prefix,
                             ShapeKind shape) {
  auto shape_value = [&](double p) { return shape == ShapeKind::ellipse ? eccentricity(p) : p; };
  std::ostringstream os;
  auto line = [&](const std::string& key, const std::string& v) {
    os << prefix << key << " = " << v << '\n';
  };
  line("branches", std::to_string(r.branch_1) + " " + std::to_string(r.branch_2));
  line("parity_1", parity_label(r.parity_1.x) + " " + parity_label(r.parity_1.y));
  line("parity_2", parity_label(r.parity_2.x) + " " + parity_label(r.parity_2.y));
  line("same_parity", value_text(r.same_parity()));
  line("classification", to_string(r.classification));
  line("reason", r.reason);
  line("p_star", format_double(r.minimum.p_star));
  line("shape_value_star", format_double(shape_value(r.minimum.p_star)));
  line("g_min", format_double(r.minimum.g_min));
  line("sign_change", value_text(r.minimum.sign_change));
  line("window", format_double(r.window_lo) + " " + format_double(r.window_hi));
  line("intensity_exchange", value_text(r.intensity.exchanged()));
  line("overlap_same", format_double(r.intensity.same_1) + " " + format_double(r.intensity.same_2));
  line("overlap_cross",
       format_double(r.intensity.cross_12) + " " + format_double(r.intensity.cross_21));
  line("entropy_max_at_center", to_string(r.entropy.max_at_center));
  line("entropy_exchange", to_string(r.entropy.exchange));
  line("entropy_center_window",
       format_double(r.entropy.center_lo) + " " + format_double(r.entropy.center_hi));
  line("entropy_p_max", format_double(r.entropy.p_max_1) + " " + format_double(r.entropy.p_max_2));
  line("entropy_range", format_double(r.entropy_range_1) + " " + format_double(r.entropy_range_2));
  line("entropy_mean", format_double(r.entropy_mean_1) + " " + format_double(r.entropy_mean_2));
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  std::ostringstream rep;
  rep << header(cfg) << '\n';
  bool all_ok = true;
  const auto opts = cfg.solver_options();
  const auto circle = BoundaryShape::circle(1.0);

  {
    auto found = find_real_eigen_k(circle, 2.0, 6.0, cfg.tol, opts);
    std::vector<double> expect;
    for (const auto& e : circle_dirichlet_oracle(40, 2.0, 6.0)) {
      for (int i = 0; i < e.multiplicity; ++i) expect.push_back(e.k);
    }
    std::vector<double> got;
    for (const auto& m : found) got.push_back(m.k.real());
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    double worst = 0.0;
    const bool count_ok = got.size() == expect.size();
    if (count_ok) {
      for (std::size_t i = 0; i < got.size(); ++i) {
        worst = std::max(worst, std::abs(got[i] - expect[i]) / expect[i]);
      }
    }
    const bool ok = count_ok && worst < cfg.dirichlet_tol;
    all_ok = all_ok && ok;
    rep << "dirichlet.count = " << got.size() << " " << expect.size() << '\n';
    rep << "dirichlet.max_relative_error = " << format_double(worst) << '\n';
    rep << "dirichlet.tolerance = " << format_double(cfg.dirichlet_tol) << '\n';
    rep << "dirichlet.status = " << pass_fail(ok) << '\n';
    log << "circle dirichlet: " << got.size() << " roots, max rel error " << worst << " -> "
        << pass_fail(ok) << '\n';
  }

  if (cfg.validate_open) {
    const double n = cfg.n_index;
    auto found = find_complex_resonances(circle, n, 1.0, 6.0, -1.0, 0.0, cfg.tol, opts);
    std::vector<cplx> expect;
    for (const auto& r : circle_tm_resonance_oracle(n, 40, 1.0, 6.0, -1.0, 0.0)) {
      for (int i = 0; i < r.multiplicity; ++i) expect.push_back(r.k);
    }
    std::vector<cplx> got;
    for (const auto& m : found) got.push_back(m.k);
    bool im_ok = true;
    for (cplx k : got) im_ok = im_ok && k.imag() < 0.0;
    // nearest-neighbour pairing, each BEM root used once
    std::vector<char> used(got.size(), 0);
    double worst = 0.0;
    bool count_ok = got.size() == expect.size();
    for (cplx e : expect) {
      int best = -1;
      for (std::size_t j = 0; j < got.size(); ++j) {
        if (used[j]) continue;
        if (best < 0 || std::abs(got[j] - e) < std::abs(got[best] - e)) best = int(j);
      }
      if (best < 0) {
        count_ok = false;
        break;
      }
      used[best] = 1;
      worst = std::max({worst, std::abs(got[best].real() - e.real()),
                        std::abs(got[best].imag() - e.imag())});
    }
    const bool ok = count_ok && im_ok && worst < cfg.tm_tol;
    all_ok = all_ok && ok;
    rep << "tm.count = " << got.size() << " " << expect.size() << '\n';
    rep << "tm.max_component_error = " << format_double(worst) << '\n';
    rep << "tm.all_im_negative = " << value_text(im_ok) << '\n';
    rep << "tm.tolerance = " << format_double(cfg.tm_tol) << '\n';
    rep << "tm.status = " << pass_fail(ok) << '\n';
    log << "circle TM n=" << n << ": " << got.size() << " resonances, max error " << worst
        << " -> " << pass_fail(ok) << '\n';
  }
  rep << "status = " << pass_fail(all_ok) << '\n';
  write_resolved(cfg);
  auto os = open_output(cfg, "validate.txt");
  os << rep.str();
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const SweepConfig sc = cfg.sweep_config();
  log << "sweep " << cfg.shape << " " << cfg.problem << " over [" << sc.p_lo << ", " << sc.p_hi
      << "]\n";
  const SweepResult res = run_sweep(sc);
  log << res.branches.size() << " branches, " << res.node_count << " boundary nodes\n";

  write_resolved(cfg);
  {
    auto os = open_output(cfg, "trajectories.csv");
    write_trajectories_csv(os, header(cfg), res.branches);
  }
  {
    auto os = open_output(cfg, "trajectories.dat");
    write_trajectory_plot(os, header(cfg), res.branches);
  }
  if (cfg.dump_fields) {
    fs::create_directories(fs::path(cfg.out) / "fields");
    for (const auto& b : res.branches) {
      for (std::size_t i = 0; i < b.samples.size(); ++i) {
        const auto& s = b.samples[i];
        if (!s.mode || s.mode->field.size() == 0) continue;
        std::ofstream os(fs::path(cfg.out) / "fields" /
                         ("branch_" + std::to_string(b.id) + "_" + std::to_string(i) + ".dat"));
        write_field_dump(os, header(cfg) + " branch=" + std::to_string(b.id) +
                                 " param=" + format_double(s.param),
                         s.mode->field);
      }
    }
  }

  const auto encounters = find_encounters(res.branches, cfg.effective_crossing_tol(), cfg.max_gap);
  auto os = open_output(cfg, "report.txt");
  os << header(cfg) << '\n';
  os << "command = sweep\n";
  os << "branches = " << res.branches.size() << '\n';
  os << "node_count = " << res.node_count << '\n';
  os << "grid_n = " << res.grid_n << '\n';
  os << "max_entropy = " << format_double(max_entropy(res.grid_n)) << '\n';
  os << "crossing_tol = " << format_double(cfg.effective_crossing_tol()) << '\n';
  os << "diagnostics = " << res.diagnostics.size() << '\n';
  for (std::size_t i = 0; i < res.diagnostics.size(); ++i) {
    os << "diagnostic." << i + 1 << " = " << res.diagnostics[i] << '\n';
  }
  os << "encounters = " << encounters.size() << '\n';
  for (std::size_t i = 0; i < encounters.size(); ++i) {
    os << encounter_report(encounters[i], "encounter." + std::to_string(i + 1) + ".",
                           sc.shape);
    const auto& r = encounters[i];
    log << "encounter " << r.branch_1 << "/" << r.branch_2 << ": " << to_string(r.classification)
        << " g_min=" << r.minimum.g_min << " at p=" << r.minimum.p_star << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_field(const RunConfig& cfg, std::ostream& log) {
  const ShapeKind kind = cfg.shape_kind();
  const ProblemKind problem = problem_kind_from_string(cfg.problem);
  const bool open = problem == ProblemKind::dielectric_tm;
  const fs::path csv = fs::path(cfg.out) / "trajectories.csv";

  BoundaryShape shape = BoundaryShape::circle(1.0);
  int nodes = 0;
  SectorRoot root;
  Parity parity;
  const SolverOptions opts = cfg.solver_options();
  std::string label;

  if (kind != ShapeKind::circle && fs::exists(csv)) {
    // continue a stored branch point
    const auto rows = read_trajectories_csv(csv.string());
    const CsvRow* hit = nullptr;
    for (const auto& r : rows) {
      if (r.branch_id == cfg.branch &&
          std::abs(r.param - cfg.param) <= 1e-9 * std::max(1.0, std::abs(cfg.param))) {
        hit = &r;
      }
    }
    if (!hit) {
      throw LookupError("no sample of branch " + std::to_string(cfg.branch) + " at param " +
                        format_double(cfg.param) + " in " + csv.string());
    }
    shape = sweep_shape(kind, hit->param);
    nodes = sweep_node_count(cfg.sweep_config());
    parity = {hit->parity_x == "even" ? 1 : -1, hit->parity_y == "even" ? 1 : -1};
    ModeSolver solver(discretize_nodes(shape, nodes), problem, open ? cfg.n_index : 1.0, opts);
    root = solver.refine(parity, {hit->re_k, open ? hit->im_k : 0.0});
    label = "branch=" + std::to_string(cfg.branch) + " param=" + format_double(hit->param);
  } else {
    // single solve: mode number `branch` of the window, ordered by Re k
    shape = kind == ShapeKind::circle ? BoundaryShape::circle(1.0) : sweep_shape(kind, cfg.param);
    const double k_hint = (open ? cfg.n_index : 1.0) * cfg.k_hi * 1.1;
    nodes = required_node_count(shape, cfg.ppw, k_hint);
    ModeSolver solver(discretize_nodes(shape, nodes), problem, open ? cfg.n_index : 1.0, opts);
    auto modes = open ? solver.scan_complex(cfg.k_lo, cfg.k_hi, cfg.im_lo, cfg.im_hi, nullptr)
                      : solver.scan_real(cfg.k_lo, cfg.k_hi, nullptr);
    if (cfg.branch < 0 || cfg.branch >= int(modes.size())) {
      throw LookupError("mode " + std::to_string(cfg.branch) + " not in the k-window (" +
                        std::to_string(modes.size()) + " modes)");
    }
    const auto& m = modes[cfg.branch];
    parity = m.parity;
    root.k = m.k;
    root.vector = m.reduced_density;
    root.sigma_rel = m.sigma_min;
    root.converged = m.converged;
    label = "mode=" + std::to_string(cfg.branch) + " param=" + format_double(cfg.param);
  }

  ModeSolver solver(discretize_nodes(shape, nodes), problem, open ? cfg.n_index : 1.0, opts);
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(shape, cfg.grid_n));
  const ModeSolution sol = solver.make_solution(parity, root, grid);
  const double s = shannon_entropy(sol.field);
  const std::string name = "field_" + std::to_string(cfg.branch) + ".dat";
  write_resolved(cfg);
  auto os = open_output(cfg, name);
  write_field_dump(os, header(cfg) + " " + label + " re_kR=" + format_double(sol.k.real()) +
                           " im_kR=" + format_double(sol.k.imag()) +
                           " entropy=" + format_double(s),
                   sol.field);
  log << "kR = " << sol.k << ", entropy " << format_double(s) << " nats -> "
      << (fs::path(cfg.out) / name).string() << '\n';
  return sol.converged ? 0 : 1;
}

// ---------------------------------------------------------------------------

bool EntropyComparison::Pair::open_larger_everywhere() const {
  if (e.empty()) return false;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(s_open[i] > s_closed[i])) return false;
  }
  return true;
}

namespace {

// Closed eigenmodes are orthogonal, so the projection picks the dominant
// closed component of an open mode. Intensity overlaps of two extended
// patterns are all similar and separate partners poorly.
double match_score(const BranchSample& open, const BranchSample& closed, bool& projected) {
  const ModeSolution* a = open.mode.get();
  const ModeSolution* b = closed.mode.get();
  // the two sweeps build their own, identical grids
  auto same_grid = [](const InteriorGrid* g, const InteriorGrid* h) {
    return g && h && g->spacing == h->spacing && g->ix == h->ix && g->iy == h->iy;
  };
  if (a && b && a->field.has_amplitude() && b->field.has_amplitude() &&
      same_grid(a->field.grid.get(), b->field.grid.get())) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a->field.amplitude.size(); ++i) {
      acc += std::conj(b->field.amplitude[i]) * a->field.amplitude[i];
    }
    projected = true;
    return std::norm(acc);
  }
  projected = false;
  if (closed.tracking_rho.size() != open.tracking_rho.size()) return 0.0;
  return intensity_overlap(open.tracking_rho, closed.tracking_rho);
}

}  // namespace

EntropyComparison compare_entropies(const SweepResult& closed, const SweepResult& open,
                                    int grid_n) {
  EntropyComparison cmp;
  cmp.s_max = max_entropy(grid_n);
  std::vector<char> taken(closed.branches.size(), 0);
  for (const auto& ob : open.branches) {
    if (ob.samples.empty()) continue;
    const auto& o0 = ob.samples.front();
    int best = -1;
    double best_overlap = 0.0;
    bool projected = false;
    for (std::size_t j = 0; j < closed.branches.size(); ++j) {
      const auto& cb = closed.branches[j];
      if (taken[j] || cb.samples.empty() || !(cb.parity == ob.parity)) continue;
      const auto& c0 = cb.samples.front();
      if (std::abs(c0.param - o0.param) > 1e-12) continue;
      bool proj = false;
      const double ov = match_score(o0, c0, proj);
      if (ov > best_overlap) {
        best_overlap = ov;
        best = int(j);
        projected = proj;
      }
    }
    // a dominant component, or a clearly shared intensity pattern
    if (best < 0 || best_overlap < (projected ? 0.25 : 0.5)) {
      cmp.diagnostics.push_back("open branch " + std::to_string(ob.id) +
                                " has no closed partner (best overlap " +
                                format_double(best_overlap) + ")");
      continue;
    }
    taken[best] = 1;
    const auto& cb = closed.branches[best];
    EntropyComparison::Pair pr;
    pr.open_branch = ob.id;
    pr.closed_branch = cb.id;
    pr.overlap = best_overlap;
    // common parameters only
    for (const auto& os : ob.samples) {
      for (const auto& cs : cb.samples) {
        if (std::abs(cs.param - os.param) <= 1e-12) {
          pr.e.push_back(os.shape_value);
          pr.s_open.push_back(os.entropy);
          pr.s_closed.push_back(cs.entropy);
          break;
        }
      }
    }
    cmp.pairs.push_back(std::move(pr));
  }
  // spread between the first two matched pairs of one sector
  for (std::size_t a = 0; a < cmp.pairs.size() && cmp.spread_open < 0.0; ++a) {
    for (std::size_t b = a + 1; b < cmp.pairs.size(); ++b) {
      const auto& pa = cmp.pairs[a];
      const auto& pb = cmp.pairs[b];
      if (!(open.branches[pa.open_branch].parity == open.branches[pb.open_branch].parity)) continue;
      const std::size_t n = std::min(pa.e.size(), pb.e.size());
      if (n == 0) continue;
      double so = 0.0, sc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        so += std::abs(pa.s_open[i] - pb.s_open[i]);
        sc += std::abs(pa.s_closed[i] - pb.s_closed[i]);
      }
      cmp.spread_open = so / n;
      cmp.spread_closed = sc / n;
      break;
    }
  }
  return cmp;
}

int cmd_entropy_compare(const RunConfig& cfg, std::ostream& log) {
  RunConfig oc = cfg;
  oc.problem = "open";
  oc.range_lo = cfg.compare_lo;
  oc.range_hi = cfg.compare_hi;
  oc.dp = cfg.compare_dp;
  oc.adaptive = false;
  oc.dump_fields = true;
  RunConfig cc = oc;
  cc.problem = "closed";
  // Dirichlet partners sit above n Re k, by up to ~15% for low-Q modes
  const bool derived = cfg.compare_closed_lo == 0.0 && cfg.compare_closed_hi == 0.0;
  cc.k_lo = derived ? cfg.n_index * cfg.k_lo : cfg.compare_closed_lo;
  cc.k_hi = derived ? 1.25 * cfg.n_index * cfg.k_hi : cfg.compare_closed_hi;
  log << "open sweep\n";
  const SweepResult open = run_sweep(oc.sweep_config());
  log << "closed sweep\n";
  const SweepResult closed = run_sweep(cc.sweep_config());
  const auto cmp = compare_entropies(closed, open, cfg.grid_n);

  write_resolved(cfg);
  {
    auto os = open_output(cfg, "entropy_compare.dat");
    os << header(cfg) << '\n';
    os << "# pair e S_closed S_open S_max\n";
    for (std::size_t i = 0; i < cmp.pairs.size(); ++i) {
      const auto& p = cmp.pairs[i];
      for (std::size_t j = 0; j < p.e.size(); ++j) {
        os << i << ' ' << format_double(p.e[j]) << ' ' << format_double(p.s_closed[j]) << ' '
           << format_double(p.s_open[j]) << ' ' << format_double(cmp.s_max) << '\n';
      }
    }
  }
  auto os = open_output(cfg, "entropy_compare.txt");
  os << header(cfg) << '\n';
  os << "pairs = " << cmp.pairs.size() << '\n';
  os << "max_entropy = " << format_double(cmp.s_max) << '\n';
  bool all_larger = !cmp.pairs.empty();
  for (std::size_t i = 0; i < cmp.pairs.size(); ++i) {
    const auto& p = cmp.pairs[i];
    const std::string k = "pair." + std::to_string(i + 1) + ".";
    os << k << "branches = " << p.closed_branch << " " << p.open_branch << '\n';
    os << k << "overlap = " << format_double(p.overlap) << '\n';
    os << k << "open_larger_everywhere = " << value_text(p.open_larger_everywhere()) << '\n';
    all_larger = all_larger && p.open_larger_everywhere();
  }
  os << "spread_closed = " << format_double(cmp.spread_closed) << '\n';
  os << "spread_open = " << format_double(cmp.spread_open) << '\n';
  const bool spread_ok = cmp.spread_open >= 0.0 && cmp.spread_open < cmp.spread_closed;
  os << "open_larger_everywhere = " << value_text(all_larger) << '\n';
  os << "open_spread_smaller = " << value_text(spread_ok) << '\n';
  for (std::size_t i = 0; i < cmp.diagnostics.size(); ++i) {
    os << "diagnostic." << i + 1 << " = " << cmp.diagnostics[i] << '\n';
  }
  log << cmp.pairs.size() << " matched pairs; open larger everywhere: " << value_text(all_larger)
      << "; spread open " << cmp.spread_open << " vs closed " << cmp.spread_closed << '\n';
  return all_larger && spread_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_twolevel(const RunConfig& cfg, std::ostream& log) {
  TwoLevelSystem sys;
  sys.e1 = {cfg.tl_offset1, cfg.tl_slope1};
  sys.e2 = {cfg.tl_offset2, cfg.tl_slope2};
  sys.g = {cfg.tl_g_re, cfg.tl_g_im};
  sys.gamma1 = cfg.tl_gamma1;
  sys.gamma2 = cfg.tl_gamma2;
  auto grid = std::make_shared<const InteriorGrid>(
      interior_grid(BoundaryShape::circle(1.0), cfg.grid_n));
  std::tie(sys.basis1, sys.basis2) = split_basis(grid);
  auto [t1, t2] = surrogate_sweep(sys, cfg.tl_p_lo, cfg.tl_p_hi, cfg.tl_steps);
  const std::vector<BranchTrajectory> branches{t1, t2};

  write_resolved(cfg);
  {
    auto os = open_output(cfg, "trajectories.csv");
    write_trajectories_csv(os, header(cfg), branches);
  }
  {
    auto os = open_output(cfg, "trajectories.dat");
    write_trajectory_plot(os, header(cfg), branches);
  }
  const auto rep = analyze_pair(t1, t2, cfg.effective_crossing_tol());
  auto os = open_output(cfg, "report.txt");
  os << header(cfg) << '\n';
  os << "command = twolevel\n";
  os << "analytic_gap_min = " << format_double(2.0 * std::abs(sys.g)) << '\n';
  os << "analytic_p_star = " << format_double(sys.degeneracy_point()) << '\n';
  os << "max_entropy = " << format_double(max_entropy(cfg.grid_n)) << '\n';
  os << encounter_report(rep, "encounter.", ShapeKind::quadrupole);
  log << "two-level: " << to_string(rep.classification) << " g_min=" << rep.minimum.g_min
      << " (analytic " << 2.0 * std::abs(sys.g) << ")\n";
  return 0;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "validate") return cmd_validate(cfg, log);
  if (cfg.command == "sweep") return cmd_sweep(cfg, log);
  if (cfg.command == "field") return cmd_field(cfg, log);
  if (cfg.command == "entropy-compare") return cmd_entropy_compare(cfg, log);
  if (cfg.command == "twolevel") return cmd_twolevel(cfg, log);
  throw InvalidParameter("unknown command '" + cfg.command + "'");
}

}  // namespace billiards
