#include "billiards/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path Hungarian method on an n x m matrix, n <= m.
std::vector<int> hungarian(const std::vector<std::vector<double>>& a, int n, int m) {
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

std::vector<double> rho_of(const ProbabilityField& f) { return f.rho; }

}  // namespace

BoundaryShape sweep_shape(ShapeKind kind, double p) {
  switch (kind) {
    case ShapeKind::ellipse:
      return BoundaryShape::ellipse(p);
    case ShapeKind::quadrupole:
      return BoundaryShape::quadrupole(p);
    case ShapeKind::circle:
      break;
  }
  throw InvalidParameter("a sweep needs an ellipse or quadrupole family");
}

double intensity_overlap(const std::vector<double>& rho1, const std::vector<double>& rho2) {
  if (rho1.size() != rho2.size() || rho1.empty()) {
    throw ContractError("intensity_overlap: fields live on different grids");
  }
  std::vector<double> terms(rho1.size());
  for (std::size_t i = 0; i < rho1.size(); ++i) terms[i] = std::sqrt(rho1[i] * rho2[i]);
  return std::clamp(pairwise_sum(terms), 0.0, 1.0);
}

double intensity_overlap(const ProbabilityField& f1, const ProbabilityField& f2) {
  if (f1.grid != f2.grid) throw ContractError("intensity_overlap: fields live on different grids");
  return intensity_overlap(f1.rho, f2.rho);
}

Assignment solve_assignment(const std::vector<std::vector<double>>& cost) {
  Assignment out;
  const int n = int(cost.size());
  const int m = n ? int(cost[0].size()) : 0;
  out.assignment.assign(n, -1);
  if (n == 0 || m == 0) {
    for (int j = 0; j < m; ++j) out.births.push_back(j);
    return out;
  }
  // Forbidden pairs get a cost above any feasible total; padding columns let
  // every row stay unmatched at that same price.
  double big = 1.0;
  for (const auto& row : cost) {
    for (double c : row) {
      if (std::isfinite(c)) big = std::max(big, std::abs(c));
    }
  }
  big = 4.0 * big * (n + 1);
  const int mm = m + n;
  std::vector<std::vector<double>> a(n, std::vector<double>(mm, big));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (std::isfinite(cost[i][j])) a[i][j] = cost[i][j];
    }
  }
  const auto row_to_col = hungarian(a, n, mm);
  std::vector<char> taken(m, 0);
  for (int i = 0; i < n; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < m && std::isfinite(cost[i][j])) {
      out.assignment[i] = j;
      taken[j] = 1;
      out.cost += cost[i][j];
    }
  }
  for (int j = 0; j < m; ++j) {
    if (!taken[j]) out.births.push_back(j);
  }
  return out;
}

Assignment track_modes(const std::vector<ModeSolution>& prev, const std::vector<ModeSolution>& next,
                       double weight, const std::vector<cplx>* predicted) {
  std::vector<std::vector<double>> cost(prev.size(), std::vector<double>(next.size(), kInf));
  for (std::size_t i = 0; i < prev.size(); ++i) {
    const cplx kp = predicted ? (*predicted)[i] : prev[i].k;
    for (std::size_t j = 0; j < next.size(); ++j) {
      if (!(prev[i].parity == next[j].parity)) continue;
      double ov = 0.0;
      if (prev[i].field.size() && next[j].field.size()) {
        ov = intensity_overlap(prev[i].field, next[j].field);
      }
      cost[i][j] = weight * std::abs(next[j].k - kp) + (1.0 - ov);
    }
  }
  return solve_assignment(cost);
}

// ---------------------------------------------------------------------------

std::string parity_label(const ParityResult& p, bool x_axis) {
  const int s = x_axis ? p.x : p.y;
  if (s == 0) return "mixed";
  return parity_label(s);
}

ParityResult parity_classify(const ProbabilityField& f, const BoundaryShape& shape) {
  (void)shape;  // every supported family is symmetric about both axes
  if (!f.grid) throw ContractError("parity_classify needs a field on a lattice grid");
  const InteriorGrid& g = *f.grid;
  if (g.size() != f.size()) throw ContractError("field does not match its grid");
  ParityResult out;
  double axis_x = 0.0, axis_y = 0.0;
  int n_axis_x = 0, n_axis_y = 0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const int mx = g.find(-g.ix[p], g.iy[p]);
    const int my = g.find(g.ix[p], -g.iy[p]);
    if (mx >= 0 && std::size_t(mx) > p) out.residual_x += 2.0 * std::abs(f.rho[p] - f.rho[mx]);
    if (my >= 0 && std::size_t(my) > p) out.residual_y += 2.0 * std::abs(f.rho[p] - f.rho[my]);
    if (g.ix[p] == 0) {
      axis_x += f.rho[p];
      ++n_axis_x;
    }
    if (g.iy[p] == 0) {
      axis_y += f.rho[p];
      ++n_axis_y;
    }
  }
  const double mean = 1.0 / double(g.size());
  auto decide = [&](double residual, double axis_sum, int n_axis) {
    if (residual > 1e-3 || n_axis == 0) return 0;
    const double ratio = axis_sum / n_axis / mean;
    if (ratio < 1e-6) return -1;
    if (ratio > 1e-3) return 1;
    return 0;
  };
  // Mirror x -> -x tests the x parity; its axis is the line x = 0.
  out.x = decide(out.residual_x, axis_x, n_axis_x);
  out.y = decide(out.residual_y, axis_y, n_axis_y);
  return out;
}

// ---------------------------------------------------------------------------

int sweep_node_count(const SweepConfig& cfg) {
  // the boundary speed grows with the deformation for both families
  const bool open = cfg.problem == ProblemKind::dielectric_tm;
  const double k_hint = (open ? cfg.n_index : 1.0) * cfg.k_hi * 1.1;
  const double ppw = cfg.solver.elements_per_wavelength;
  return std::max(required_node_count(sweep_shape(cfg.shape, cfg.p_lo), ppw, k_hint),
                  required_node_count(sweep_shape(cfg.shape, cfg.p_hi), ppw, k_hint));
}

namespace {

struct Candidate {
  SectorRoot root;
  std::vector<double> tracking_rho;
};

class SweepRunner {
 public:
  explicit SweepRunner(const SweepConfig& cfg) : cfg_(cfg) {
    if (!(cfg.p_hi > cfg.p_lo)) throw InvalidParameter("sweep needs p_lo < p_hi");
    if (!(cfg.dp > 0.0)) throw InvalidParameter("sweep needs dp > 0");
    if (!(cfg.dp_min > 0.0) || cfg.dp_min > cfg.dp) {
      throw InvalidParameter("sweep needs 0 < dp_min <= dp");
    }
    if (!(cfg.k_hi > cfg.k_lo) || !(cfg.k_lo > 0.0)) throw InvalidParameter("bad k-window");
    open_ = cfg.problem == ProblemKind::dielectric_tm;
    if (open_ && !(cfg.n_index > 1.0)) throw InvalidParameter("open sweep needs n_index > 1");
    const BoundaryShape lo = sweep_shape(cfg.shape, cfg.p_lo);
    const BoundaryShape hi = sweep_shape(cfg.shape, cfg.p_hi);
    // Every shape between the end points contains their intersection.
    node_count_ = sweep_node_count(cfg);
    tracking_ = std::make_shared<const InteriorGrid>(
        common_lattice({lo, hi}, cfg.tracking_spacing, cfg.tracking_spacing));
  }

  SweepResult run() {
    SweepResult result;
    result.tracking_grid = tracking_;
    result.grid_n = cfg_.grid_n;
    result.node_count = node_count_;

    double p = cfg_.p_lo;
    {
      auto solver = make_solver(p);
      auto grid = make_grid(p);
      std::vector<ModeSolution> found =
          open_ ? solver.scan_complex(cfg_.k_lo, cfg_.k_hi, cfg_.im_lo, cfg_.im_hi, nullptr,
                                      &result.diagnostics)
                : solver.scan_real(cfg_.k_lo, cfg_.k_hi, nullptr, &result.diagnostics);
      for (const auto& m : found) {
        if ((cfg_.parity_x && m.parity.x != cfg_.parity_x) ||
            (cfg_.parity_y && m.parity.y != cfg_.parity_y)) {
          continue;
        }
        SectorRoot r;
        r.k = open_ ? m.k : cplx(m.k.real(), 0.0);
        r.converged = m.converged;
        r.sigma_rel = m.sigma_min;
        r.vector = m.reduced_density;
        BranchTrajectory b;
        b.id = int(result.branches.size());
        b.parity = m.parity;
        Candidate c{r, tracking_rho(solver, m.parity, r)};
        b.samples.push_back(make_sample(solver, grid, p, m.parity, c));
        result.branches.push_back(std::move(b));
        slope_.push_back(0.0);
      }
    }
    if (result.branches.size() < 2) {
      result.diagnostics.push_back("fewer than two modes in the k-window at p_lo");
    }

    double dp = cfg_.dp;
    while (p < cfg_.p_hi) {
      double step = std::min(dp, cfg_.p_hi - p);
      double p_new = p + step;
      if (cfg_.p_hi - p_new < 1e-12) p_new = cfg_.p_hi;
      step = p_new - p;
      const bool can_refine = cfg_.adaptive && step > cfg_.dp_min * (1.0 + 1e-9);
      auto outcome = try_step(result, p_new, step, can_refine);
      if (outcome.retry) {
        dp = std::max(cfg_.dp_min, 0.5 * step);
        continue;
      }
      commit(result, p_new, step, outcome);
      p = p_new;
      dp = outcome.relaxed ? std::min(cfg_.dp, 2.0 * step) : step;
    }
    for (auto& b : result.branches) {
      if (b.truncated && !b.diagnostic.empty()) {
        result.diagnostics.push_back("branch " + std::to_string(b.id) + ": " + b.diagnostic);
      }
    }
    return result;
  }

 private:
  struct StepOutcome {
    bool retry = false;
    bool relaxed = true;
    std::shared_ptr<ModeSolver> solver;
    // Per branch: matched candidate, or none (lost).
    std::vector<std::optional<Candidate>> match;
    std::vector<std::pair<std::size_t, std::string>> notes;
  };

  ModeSolver make_solver(double p) const {
    return ModeSolver(discretize_nodes(sweep_shape(cfg_.shape, p), node_count_), cfg_.problem,
                      open_ ? cfg_.n_index : 1.0, cfg_.solver);
  }

  std::shared_ptr<const InteriorGrid> make_grid(double p) const {
    return std::make_shared<const InteriorGrid>(interior_grid(sweep_shape(cfg_.shape, p), cfg_.grid_n));
  }

  std::vector<double> tracking_rho(const ModeSolver& solver, Parity parity,
                                   const SectorRoot& root) const {
    const ModeSolution m = solver.make_solution(parity, root, nullptr);
    auto ev = evaluate_interior(solver.discretization(), m.boundary_density, m.k, m.n_index, m.kind,
                                tracking_, &parity);
    return rho_of(ev.field);
  }

  BranchSample make_sample(const ModeSolver& solver, const std::shared_ptr<const InteriorGrid>& grid,
                           double p, Parity parity, const Candidate& c) const {
    auto mode = std::make_shared<ModeSolution>(solver.make_solution(parity, c.root, grid));
    BranchSample s;
    s.param = p;
    s.shape_value = solver.discretization().shape->shape_value();
    s.k = mode->k;
    s.entropy = shannon_entropy(mode->field);
    s.parity = parity;
    s.sigma_min = mode->sigma_min;
    s.status = c.root.converged ? "ok" : "not_converged";
    s.tracking_rho = c.tracking_rho;
    if (!cfg_.keep_fields) {
      mode->field = ProbabilityField{};
    }
    s.mode = std::move(mode);
    return s;
  }

  bool admissible(cplx k) const {
    return open_ ? k.imag() < -1e-7 : std::abs(k.imag()) < 1e-6;
  }

  StepOutcome try_step(const SweepResult& result, double p_new, double step,
                       bool can_refine) {
    StepOutcome out;
    out.solver = std::make_shared<ModeSolver>(make_solver(p_new));
    const auto& branches = result.branches;
    const std::size_t nb = branches.size();
    out.match.assign(nb, std::nullopt);

    std::vector<cplx> pred(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      if (branches[b].truncated) continue;
      pred[b] = branches[b].samples.back().k + slope_[b] * step;
      if (!open_) pred[b] = pred[b].real();
    }

    for (const auto& parity : kAllParities) {
      std::vector<std::size_t> members;
      for (std::size_t b = 0; b < nb; ++b) {
        if (!branches[b].truncated && branches[b].parity == parity) members.push_back(b);
      }
      if (members.empty()) continue;
      std::vector<Candidate> cands;
      for (std::size_t b : members) {
        const double motion = std::abs(slope_[b] * step);
        const double radius = std::max(0.02, 4.0 * motion);
        for (auto& r : out.solver->roots_near(parity, pred[b], radius)) {
          if (!admissible(r.k)) continue;
          bool dup = false;
          for (const auto& c : cands) dup = dup || std::abs(c.root.k - r.k) < 1e-7;
          if (dup) continue;
          Candidate c;
          c.root = r;
          if (!open_) c.root.k = r.k.real();
          c.tracking_rho = tracking_rho(*out.solver, parity, c.root);
          cands.push_back(std::move(c));
        }
      }
      std::vector<std::vector<double>> cost(members.size(), std::vector<double>(cands.size(), kInf));
      for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& last = branches[members[i]].samples.back();
        for (std::size_t j = 0; j < cands.size(); ++j) {
          const double ov = intensity_overlap(last.tracking_rho, cands[j].tracking_rho);
          cost[i][j] = cfg_.tracking_weight * std::abs(cands[j].root.k - pred[members[i]]) + (1.0 - ov);
        }
      }
      const auto asg = solve_assignment(cost);
      for (std::size_t i = 0; i < members.size(); ++i) {
        const std::size_t b = members[i];
        const int j = asg.assignment[i];
        if (j < 0) {
          if (can_refine) {
            out.retry = true;
            return out;
          }
          out.notes.emplace_back(b, "lost at p = " + fmt(p_new));
          continue;
        }
        const double ov = intensity_overlap(branches[b].samples.back().tracking_rho,
                                            cands[j].tracking_rho);
        if (ov < cfg_.continuity_threshold) {
          if (can_refine) {
            out.retry = true;
            return out;
          }
          out.notes.emplace_back(b, "split at p = " + fmt(p_new) + " (overlap " + fmt(ov) + ")");
          continue;
        }
        out.match[b] = cands[j];
      }
      // Refine where two branches of one sector come closer than five times
      // the distance they moved.
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t q = i + 1; q < members.size(); ++q) {
          const std::size_t a = members[i], b = members[q];
          if (!out.match[a] || !out.match[b]) continue;
          const cplx ka = out.match[a]->root.k, kb = out.match[b]->root.k;
          const double gap = std::abs(ka.real() - kb.real());
          const double motion = std::max(std::abs(ka - branches[a].samples.back().k),
                                         std::abs(kb - branches[b].samples.back().k));
          if (gap < 5.0 * motion) {
            if (can_refine) {
              out.retry = true;
              return out;
            }
          }
          if (gap < 20.0 * motion) out.relaxed = false;
        }
      }
    }
    return out;
  }

  void commit(SweepResult& result, double p_new, double step, const StepOutcome& outcome) {
    auto grid = make_grid(p_new);
    for (std::size_t b = 0; b < result.branches.size(); ++b) {
      auto& br = result.branches[b];
      if (br.truncated) continue;
      if (!outcome.match[b]) {
        br.truncated = true;
        continue;
      }
      const cplx k_old = br.samples.back().k;
      br.samples.push_back(make_sample(*outcome.solver, grid, p_new, br.parity, *outcome.match[b]));
      slope_[b] = (br.samples.back().k - k_old) / step;
    }
    for (const auto& [b, note] : outcome.notes) {
      if (result.branches[b].diagnostic.empty()) result.branches[b].diagnostic = note;
    }
  }

  static std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
  }

  SweepConfig cfg_;
  bool open_ = false;
  int node_count_ = 0;
  std::shared_ptr<const InteriorGrid> tracking_;
  std::vector<cplx> slope_;
};

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) { return SweepRunner(cfg).run(); }

}  // namespace billiards
