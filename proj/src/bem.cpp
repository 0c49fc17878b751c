#include "billiards/bem.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "billiards/errors.hpp"
#include "billiards/specfun.hpp"

extern "C" void zggev_(const char* jobvl, const char* jobvr, const int* n,
                       std::complex<double>* a, const int* lda, std::complex<double>* b,
                       const int* ldb, std::complex<double>* alpha, std::complex<double>* beta,
                       std::complex<double>* vl, const int* ldvl, std::complex<double>* vr,
                       const int* ldvr, std::complex<double>* work, const int* lwork,
                       double* rwork, int* info, std::size_t, std::size_t);

namespace billiards {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286061;
const cplx kI{0.0, 1.0};

// Weights of the exact quadrature of log(4 sin^2((t - s)/2)) f(s) against the
// trigonometric interpolant of f, indexed by node lag.
struct KressTables {
  std::vector<double> r;
  std::vector<double> log_term;
};

KressTables kress_tables(int m_nodes) {
  KressTables tab;
  const int n = m_nodes / 2;
  tab.r.resize(m_nodes);
  tab.log_term.resize(m_nodes, 0.0);
  for (int d = 0; d < m_nodes; ++d) {
    double s = 0.0;
    for (int m = 1; m < n; ++m) s += std::cos(m * d * kPi / n) / m;
    tab.r[d] = -2.0 * kPi / n * s - kPi / (double(n) * n) * ((d % 2) ? -1.0 : 1.0);
    if (d > 0) {
      const double sn = std::sin(kPi * d / m_nodes);
      tab.log_term[d] = std::log(4.0 * sn * sn);
    }
  }
  return tab;
}

// One row of the single- and double-layer operators (and their derivatives in
// the wavenumber) at wavenumber kappa. The standing kernel -Y0/4 replaces the
// outgoing (i/4) H0 where no radiation condition applies: on the interior side
// of the open problem the outgoing kernel would make the row degenerate at the
// complex scattering poles of wavenumber n k, which look like resonances.
struct KernelRow {
  std::vector<cplx> s, k, ds, dk;
};

void kernel_row(const BoundaryDiscretization& disc, const KressTables& tab, int i, cplx kappa,
                bool standing, bool need_double, bool need_derivative, KernelRow& out) {
  const int m_nodes = int(disc.size());
  const double h = 2.0 * kPi / m_nodes;
  out.s.assign(m_nodes, 0.0);
  if (need_double) out.k.assign(m_nodes, 0.0);
  if (need_derivative) {
    out.ds.assign(m_nodes, 0.0);
    if (need_double) out.dk.assign(m_nodes, 0.0);
  }
  const Point xi = disc.nodes[i];
  for (int j = 0; j < m_nodes; ++j) {
    const int lag = (i - j + m_nodes) % m_nodes;
    const double sj = disc.speeds[j];
    if (j == i) {
      const cplx m2 =
          ((standing ? 0.0 : 1.0) * kI / 4.0 - kEulerGamma / (2.0 * kPi) - std::log(kappa * sj / 2.0) / (2.0 * kPi)) * sj;
      const double m1 = -sj / (4.0 * kPi);
      out.s[j] = tab.r[0] * m1 + h * m2;
      if (need_double) out.k[j] = h * disc.normal_curvature[i] / (4.0 * kPi * sj);
      if (need_derivative) {
        // d/dkappa of M1 vanishes at r = 0.
        out.ds[j] = h * (-sj / (2.0 * kPi * kappa));
      }
      continue;
    }
    const Point diff = xi - disc.nodes[j];
    const double r = norm(diff);
    auto c = specfun::cylinder01(kappa * r);
    if (standing) {
      c.h0 -= c.j0;
      c.h1 -= c.j1;
    }
    const double lg = tab.log_term[lag];
    const cplx m_full = kI / 4.0 * c.h0 * sj;
    const cplx m1 = -c.j0 * sj / (4.0 * kPi);
    out.s[j] = tab.r[lag] * m1 + h * (m_full - m1 * lg);
    if (need_derivative) {
      const cplx dm = -kI / 4.0 * r * c.h1 * sj;
      const cplx dm1 = r * c.j1 * sj / (4.0 * kPi);
      out.ds[j] = tab.r[lag] * dm1 + h * (dm - dm1 * lg);
    }
    if (need_double) {
      const double nd = dot(disc.normals[j], diff);
      const cplx l_full = kI * kappa / 4.0 * c.h1 * nd / r * sj;
      const cplx l1 = -kappa / (4.0 * kPi) * c.j1 * nd / r * sj;
      out.k[j] = tab.r[lag] * l1 + h * (l_full - l1 * lg);
      if (need_derivative) {
        const cplx dl = kI / 4.0 * kappa * c.h0 * nd * sj;
        const cplx dl1 = -kappa / (4.0 * kPi) * c.j0 * nd * sj;
        out.dk[j] = tab.r[lag] * dl1 + h * (dl - dl1 * lg);
      }
    }
  }
}

void check_open_args(cplx k, double n_index) {
  if (!(n_index > 1.0)) throw InvalidParameter("dielectric problem needs n_index > 1");
  if (!(k.real() > 0.0)) throw DomainError("dielectric problem needs Re k > 0");
}

void check_disc(const BoundaryDiscretization& disc) {
  if (disc.size() < 8 || disc.size() % 4 != 0) {
    throw ContractError("discretization must have a multiple of four nodes");
  }
}

// Rows of the full operator for node i: closed -> S row; open -> two rows.
void full_rows(const BoundaryDiscretization& disc, const KressTables& tab, ProblemKind kind,
               cplx k, double n_index, int i, bool derivative, Eigen::MatrixXcd& a,
               Eigen::MatrixXcd* da, int row_top, int row_bottom) {
  const int m_nodes = int(disc.size());
  KernelRow row;
  if (kind == ProblemKind::dirichlet_closed) {
    kernel_row(disc, tab, i, k, false, false, derivative, row);
    for (int j = 0; j < m_nodes; ++j) {
      a(row_top, j) = row.s[j];
      if (da) (*da)(row_top, j) = row.ds[j];
    }
    return;
  }
  kernel_row(disc, tab, i, n_index * k, true, true, derivative, row);
  for (int j = 0; j < m_nodes; ++j) {
    a(row_top, j) = row.k[j] + (j == i ? 0.5 : 0.0);
    a(row_top, m_nodes + j) = -row.s[j];
    if (da) {
      (*da)(row_top, j) = n_index * row.dk[j];
      (*da)(row_top, m_nodes + j) = -n_index * row.ds[j];
    }
  }
  kernel_row(disc, tab, i, k, false, true, derivative, row);
  for (int j = 0; j < m_nodes; ++j) {
    a(row_bottom, j) = (j == i ? 0.5 : 0.0) - row.k[j];
    a(row_bottom, m_nodes + j) = row.s[j];
    if (da) {
      (*da)(row_bottom, j) = -row.dk[j];
      (*da)(row_bottom, m_nodes + j) = row.ds[j];
    }
  }
}

struct PencilResult {
  std::vector<cplx> lambda;
  Eigen::MatrixXcd vectors;
};

// Generalized eigenvalues lambda of A v = lambda B v (finite ones only).
PencilResult pencil(Eigen::MatrixXcd a, Eigen::MatrixXcd b, bool want_vectors) {
  const int n = int(a.rows());
  std::vector<cplx> alpha(n), beta(n);
  Eigen::MatrixXcd vr(want_vectors ? n : 1, want_vectors ? n : 1);
  int lwork = -1, info = 0;
  cplx wq;
  std::vector<double> rwork(8 * std::size_t(n));
  const char jobvl = 'N', jobvr = want_vectors ? 'V' : 'N';
  const int ldv = want_vectors ? n : 1;
  cplx dummy;
  zggev_(&jobvl, &jobvr, &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(), &dummy, &ldv,
         vr.data(), &ldv, &wq, &lwork, rwork.data(), &info, 1, 1);
  lwork = std::max(1, int(wq.real()));
  std::vector<cplx> work(lwork);
  zggev_(&jobvl, &jobvr, &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(), &dummy, &ldv,
         vr.data(), &ldv, work.data(), &lwork, rwork.data(), &info, 1, 1);
  if (info != 0) throw Error("zggev failed with info = " + std::to_string(info));
  PencilResult out;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta[i]) > 1e-14 * std::abs(alpha[i]) && std::abs(beta[i]) > 0.0) {
      out.lambda.push_back(alpha[i] / beta[i]);
      keep.push_back(i);
    }
  }
  if (want_vectors) {
    out.vectors.resize(n, Eigen::Index(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) out.vectors.col(c) = vr.col(keep[c]);
  }
  return out;
}

void fix_phase(Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx p = v(imax);
  if (std::abs(p) > 0.0) v *= std::conj(p) / std::abs(p);
  v(imax) = std::abs(v(imax));
}

bool same_root(cplx a, cplx b) { return std::abs(a - b) < 1e-7 * std::max(1.0, std::abs(a)); }

}  // namespace

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::dirichlet_closed ? "dirichlet_closed" : "dielectric_tm";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "dirichlet_closed" || name == "closed") return ProblemKind::dirichlet_closed;
  if (name == "dielectric_tm" || name == "open") return ProblemKind::dielectric_tm;
  throw InvalidParameter("unknown problem kind '" + name + "'");
}

std::string parity_label(int sign) { return sign > 0 ? "even" : "odd"; }

BemMatrix assemble(const BoundaryDiscretization& disc, ProblemKind kind, cplx k, double n_index) {
  check_disc(disc);
  if (kind == ProblemKind::dielectric_tm) check_open_args(k, n_index);
  if (kind == ProblemKind::dirichlet_closed && !(k.real() > 0.0)) {
    throw DomainError("wavenumber must be positive");
  }
  const int m_nodes = int(disc.size());
  const auto tab = kress_tables(m_nodes);
  const int dim = kind == ProblemKind::dirichlet_closed ? m_nodes : 2 * m_nodes;
  BemMatrix out;
  out.values.resize(dim, dim);
  out.k = k;
  out.kind = kind;
  out.n_index = kind == ProblemKind::dirichlet_closed ? 1.0 : n_index;
  for (int i = 0; i < m_nodes; ++i) {
    full_rows(disc, tab, kind, k, n_index, i, false, out.values, nullptr, i, m_nodes + i);
  }
  return out;
}

BemMatrix assemble_dirichlet(const BoundaryDiscretization& disc, double k) {
  if (!(k > 0.0)) throw DomainError("assemble_dirichlet needs k > 0");
  return assemble(disc, ProblemKind::dirichlet_closed, k, 1.0);
}

BemMatrix assemble_dielectric_tm(const BoundaryDiscretization& disc, cplx k, double n_index) {
  return assemble(disc, ProblemKind::dielectric_tm, k, n_index);
}

double min_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double min_singular_value(const BemMatrix& m) { return min_singular_value(m.values); }

Eigen::VectorXcd boundary_null_vector(const Eigen::MatrixXcd& m, double relative_threshold) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin <= relative_threshold * smax)) {
    std::ostringstream msg;
    msg << "matrix is not singular: sigma_min / sigma_max = " << smin / smax;
    throw NotSingularError(msg.str());
  }
  Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
  v.normalize();
  fix_phase(v);
  return v;
}

Eigen::VectorXcd boundary_null_vector(const BemMatrix& m, double relative_threshold) {
  return boundary_null_vector(m.values, relative_threshold);
}

// ---------------------------------------------------------------------------

SectorBasis::SectorBasis(int node_count, Parity parity) : node_count_(node_count), parity_(parity) {
  if (node_count < 8 || node_count % 4 != 0) {
    throw ContractError("sector basis needs a multiple of four nodes");
  }
  const int m = node_count;
  const double px = parity.x, py = parity.y;
  for (int r = 0; r <= m / 4; ++r) {
    const int images[4] = {r, (m - r) % m, (m / 2 - r + m) % m, (r + m / 2) % m};
    const double signs[4] = {1.0, py, px, px * py};
    Orbit orbit;
    bool vanishes = false;
    for (int g = 0; g < 4; ++g) {
      auto it = std::find(orbit.members.begin(), orbit.members.end(), images[g]);
      if (it == orbit.members.end()) {
        orbit.members.push_back(images[g]);
        orbit.signs.push_back(signs[g]);
      } else if (orbit.signs[it - orbit.members.begin()] != signs[g]) {
        vanishes = true;
      }
    }
    if (vanishes) continue;
    const double scale = 1.0 / std::sqrt(double(orbit.members.size()));
    for (double& s : orbit.signs) s *= scale;
    orbits_.push_back(std::move(orbit));
  }
}

Eigen::VectorXcd SectorBasis::expand(const Eigen::Ref<const Eigen::VectorXcd>& reduced) const {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(node_count_);
  for (std::size_t o = 0; o < orbits_.size(); ++o) {
    const auto& orb = orbits_[o];
    for (std::size_t q = 0; q < orb.members.size(); ++q) {
      full(orb.members[q]) += orb.signs[q] * reduced(o);
    }
  }
  return full;
}

Eigen::VectorXcd SectorBasis::reduce(const Eigen::Ref<const Eigen::VectorXcd>& full) const {
  Eigen::VectorXcd red(orbits_.size());
  for (std::size_t o = 0; o < orbits_.size(); ++o) {
    const auto& orb = orbits_[o];
    cplx acc = 0.0;
    for (std::size_t q = 0; q < orb.members.size(); ++q) acc += orb.signs[q] * full(orb.members[q]);
    red(o) = acc;
  }
  return red;
}

SectorOperator assemble_sector(const BoundaryDiscretization& disc, ProblemKind kind, cplx k,
                               double n_index, const SectorBasis& basis) {
  check_disc(disc);
  if (kind == ProblemKind::dielectric_tm) check_open_args(k, n_index);
  const int m_nodes = int(disc.size());
  if (basis.node_count() != m_nodes) throw ContractError("sector basis does not match nodes");
  const auto tab = kress_tables(m_nodes);
  const int nb = basis.size();
  const int blocks = kind == ProblemKind::dirichlet_closed ? 1 : 2;
  SectorOperator out;
  out.a.resize(blocks * nb, blocks * nb);
  out.da.resize(blocks * nb, blocks * nb);
  Eigen::MatrixXcd rows(2, blocks * m_nodes), drows(2, blocks * m_nodes);
  for (int o2 = 0; o2 < nb; ++o2) {
    const auto& row_orbit = basis.orbits()[o2];
    const int i = row_orbit.members[0];
    full_rows(disc, tab, kind, k, n_index, i, true, rows, &drows, 0, 1);
    // (B^H A B)[o2, o] = sqrt(|o2|) * sum_m b_o[m] A[rep(o2), m], since A maps
    // the sector into itself.
    const double row_scale = std::sqrt(double(row_orbit.members.size()));
    for (int rb = 0; rb < blocks; ++rb) {
      for (int cb = 0; cb < blocks; ++cb) {
        for (int o = 0; o < nb; ++o) {
          const auto& orb = basis.orbits()[o];
          cplx acc = 0.0, dacc = 0.0;
          for (std::size_t q = 0; q < orb.members.size(); ++q) {
            const int col = cb * m_nodes + orb.members[q];
            acc += orb.signs[q] * rows(rb, col);
            dacc += orb.signs[q] * drows(rb, col);
          }
          out.a(rb * nb + o2, cb * nb + o) = row_scale * acc;
          out.da(rb * nb + o2, cb * nb + o) = row_scale * dacc;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ModeSolver::ModeSolver(BoundaryDiscretization disc, ProblemKind kind, double n_index,
                       SolverOptions options)
    : disc_(std::move(disc)), kind_(kind), n_index_(n_index), options_(options) {
  check_disc(disc_);
  if (kind_ == ProblemKind::dielectric_tm && !(n_index_ > 1.0)) {
    throw InvalidParameter("dielectric problem needs n_index > 1");
  }
  if (kind_ == ProblemKind::dirichlet_closed) n_index_ = 1.0;
  for (const auto& p : kAllParities) bases_.emplace_back(int(disc_.size()), p);
}

const SectorBasis& ModeSolver::basis(Parity parity) const {
  for (const auto& b : bases_) {
    if (b.parity() == parity) return b;
  }
  throw ContractError("parity must be +1 or -1 in each direction");
}

std::pair<double, Eigen::VectorXcd> ModeSolver::null_space(Parity parity, cplx k) const {
  const auto op = assemble_sector(disc_, kind_, k, n_index_, basis(parity));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(op.a, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
  return {sv(sv.size() - 1) / sv(0), v};
}

SectorRoot ModeSolver::refine(Parity parity, cplx start) const {
  SectorRoot root;
  cplx k = start;
  const double step_limit = std::max(1.0, 10.0 * options_.scan_step);
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options_.max_iterations; ++it) {
    root.iterations = it + 1;
    if (!(k.real() > 0.0)) break;
    const auto op = assemble_sector(disc_, kind_, k, n_index_, basis(parity));
    const auto pr = pencil(op.a, op.da, false);
    if (pr.lambda.empty()) break;
    cplx best = pr.lambda[0];
    for (cplx l : pr.lambda) {
      if (std::abs(l) < std::abs(best)) best = l;
    }
    k -= best;
    last = std::abs(best);
    if (std::abs(k - start) > step_limit) break;
    if (last < 1e-3 * options_.tol) break;
  }
  root.k = k;
  root.converged = last < options_.tol && k.real() > 0.0;
  return root;
}

std::vector<SectorRoot> ModeSolver::roots_near(Parity parity, cplx center, double radius) const {
  const auto op = assemble_sector(disc_, kind_, center, n_index_, basis(parity));
  const auto pr = pencil(op.a, op.da, false);
  std::vector<SectorRoot> roots;
  std::vector<cplx> tried;
  auto polish = [&](cplx estimate) {
    for (cplx t : tried) {
      if (std::abs(t - estimate) < 1e-9) return;
    }
    tried.push_back(estimate);
    SectorRoot r = refine(parity, estimate);
    if (!r.converged || std::abs(r.k - center) > radius * 1.5) return;
    for (const auto& q : roots) {
      if (same_root(q.k, r.k)) return;
    }
    roots.push_back(r);
  };
  for (cplx l : pr.lambda) {
    if (std::abs(l) <= radius) polish(center - l);
  }
  // A near-degenerate partner can be absorbed by the same iteration; the
  // linearization at each converged root exposes it again.
  for (std::size_t idx = 0; idx < roots.size(); ++idx) {
    const cplx kr = roots[idx].k;
    const auto op2 = assemble_sector(disc_, kind_, kr, n_index_, basis(parity));
    const auto pr2 = pencil(op2.a, op2.da, false);
    for (cplx l : pr2.lambda) {
      const cplx est = kr - l;
      if (std::abs(l) > 1e-6 && std::abs(est - center) <= radius) polish(est);
    }
  }
  for (auto& r : roots) {
    auto [srel, v] = null_space(parity, r.k);
    r.sigma_rel = srel;
    r.vector = std::move(v);
  }
  std::sort(roots.begin(), roots.end(), [](const SectorRoot& a, const SectorRoot& b) {
    return a.k.real() < b.k.real();
  });
  return roots;
}

ModeSolution ModeSolver::make_solution(Parity parity, const SectorRoot& root,
                                       std::shared_ptr<const InteriorGrid> grid) const {
  ModeSolution sol;
  sol.kind = kind_;
  sol.n_index = n_index_;
  sol.parity = parity;
  sol.converged = root.converged;
  sol.k = kind_ == ProblemKind::dirichlet_closed ? cplx(root.k.real(), 0.0) : root.k;
  sol.sigma_min = root.sigma_rel;
  Eigen::VectorXcd v = root.vector;
  if (v.size() == 0) {
    auto ns = null_space(parity, root.k);
    sol.sigma_min = ns.first;
    v = ns.second;
  }
  const auto& b = basis(parity);
  const int nb = b.size();
  const int m_nodes = int(disc_.size());
  if (kind_ == ProblemKind::dirichlet_closed) {
    sol.boundary_density = b.expand(v);
  } else {
    sol.boundary_density.resize(2 * m_nodes);
    sol.boundary_density.head(m_nodes) = b.expand(v.head(nb));
    sol.boundary_density.tail(m_nodes) = b.expand(v.tail(nb));
  }
  sol.boundary_density.normalize();
  fix_phase(sol.boundary_density);
  if (kind_ == ProblemKind::dirichlet_closed) {
    sol.reduced_density = b.reduce(sol.boundary_density);
  } else {
    sol.reduced_density.resize(2 * nb);
    sol.reduced_density.head(nb) = b.reduce(sol.boundary_density.head(m_nodes));
    sol.reduced_density.tail(nb) = b.reduce(sol.boundary_density.tail(m_nodes));
  }
  if (!root.converged) sol.diagnostic = "refinement did not reach tolerance";
  if (grid) {
    auto ev = evaluate_interior(disc_, sol.boundary_density, sol.k, n_index_, kind_, grid, &parity);
    sol.field = std::move(ev.field);
    if (ev.unresolved_points > 0) {
      if (!sol.diagnostic.empty()) sol.diagnostic += "; ";
      sol.diagnostic += std::to_string(ev.unresolved_points) + " near-boundary points unresolved";
    }
  }
  return sol;
}

std::vector<SectorRoot> ModeSolver::scan_sector(Parity parity, const std::vector<cplx>& centers,
                                                double radius) const {
  std::vector<SectorRoot> all;
  for (cplx c : centers) {
    for (auto& r : roots_near(parity, c, radius)) {
      bool dup = false;
      for (const auto& q : all) dup = dup || same_root(q.k, r.k);
      if (!dup) all.push_back(std::move(r));
    }
  }
  return all;
}

std::vector<ModeSolution> ModeSolver::scan_real(double k_lo, double k_hi,
                                                std::shared_ptr<const InteriorGrid> grid,
                                                std::vector<std::string>* diagnostics) const {
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) throw DomainError("need 0 < k_lo < k_hi");
  const int cells = std::max(1, int(std::ceil((k_hi - k_lo) / options_.scan_step)));
  const double width = (k_hi - k_lo) / cells;
  std::vector<cplx> centers;
  for (int c = 0; c < cells; ++c) centers.emplace_back(k_lo + (c + 0.5) * width, 0.0);
  std::vector<ModeSolution> out;
  for (const auto& p : kAllParities) {
    for (const auto& r : scan_sector(p, centers, 0.75 * width)) {
      const double kr = r.k.real();
      if (kr < k_lo || kr > k_hi) continue;
      if (std::abs(r.k.imag()) > 1e-6) {
        if (diagnostics) {
          std::ostringstream msg;
          msg << "discarded complex root " << r.k << " of the closed problem";
          diagnostics->push_back(msg.str());
        }
        continue;
      }
      out.push_back(make_solution(p, r, grid));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ModeSolution& a, const ModeSolution& b) {
    return a.k.real() < b.k.real();
  });
  return out;
}

std::vector<ModeSolution> ModeSolver::scan_complex(double re_lo, double re_hi, double im_lo,
                                                   double im_hi,
                                                   std::shared_ptr<const InteriorGrid> grid,
                                                   std::vector<std::string>* diagnostics) const {
  if (!(re_lo > 0.0) || !(re_hi > re_lo) || !(im_hi > im_lo) || im_hi > 0.0) {
    throw DomainError("window must satisfy 0 < re_lo < re_hi and im_lo < im_hi <= 0");
  }
  const int nre = std::max(1, int(std::ceil((re_hi - re_lo) / options_.scan_step)));
  const int nim = std::max(1, int(std::ceil((im_hi - im_lo) / options_.scan_step)));
  const double wre = (re_hi - re_lo) / nre, wim = (im_hi - im_lo) / nim;
  std::vector<cplx> centers;
  for (int a = 0; a < nre; ++a) {
    for (int b = 0; b < nim; ++b) {
      centers.emplace_back(re_lo + (a + 0.5) * wre, im_lo + (b + 0.5) * wim);
    }
  }
  const double radius = 0.6 * std::hypot(wre, wim);
  std::vector<ModeSolution> out;
  for (const auto& p : kAllParities) {
    for (const auto& r : scan_sector(p, centers, radius)) {
      const cplx k = r.k;
      const bool inside =
          k.real() >= re_lo && k.real() <= re_hi && k.imag() >= im_lo && k.imag() <= im_hi;
      std::ostringstream msg;
      if (std::abs(k.imag()) < 1e-7) {
        // Interior eigenvalues at either wavenumber make one row degenerate;
        // these real roots carry no resonance.
        msg << "discarded real root " << k << " (row degeneracy)";
      } else if (!inside) {
        msg << "discarded root " << k << " outside the window";
      }
      if (!msg.str().empty()) {
        if (diagnostics) diagnostics->push_back(msg.str());
        continue;
      }
      out.push_back(make_solution(p, r, grid));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ModeSolution& a, const ModeSolution& b) {
    return a.k.real() < b.k.real();
  });
  return out;
}

std::vector<ModeSolution> find_real_eigen_k(const BoundaryShape& shape, double k_lo, double k_hi,
                                            double tol, const SolverOptions& options,
                                            std::shared_ptr<const InteriorGrid> grid) {
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) throw DomainError("need 0 < k_lo < k_hi");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  SolverOptions opt = options;
  opt.tol = tol;
  ModeSolver solver(discretize(shape, opt.elements_per_wavelength, k_hi),
                    ProblemKind::dirichlet_closed, 1.0, opt);
  return solver.scan_real(k_lo, k_hi, std::move(grid));
}

std::vector<ModeSolution> find_complex_resonances(const BoundaryShape& shape, double n_index,
                                                  double re_lo, double re_hi, double im_lo,
                                                  double im_hi, double tol,
                                                  const SolverOptions& options,
                                                  std::shared_ptr<const InteriorGrid> grid,
                                                  std::vector<std::string>* diagnostics) {
  if (!(n_index > 1.0)) throw InvalidParameter("dielectric problem needs n_index > 1");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  SolverOptions opt = options;
  opt.tol = tol;
  ModeSolver solver(discretize(shape, opt.elements_per_wavelength, n_index * re_hi),
                    ProblemKind::dielectric_tm, n_index, opt);
  return solver.scan_complex(re_lo, re_hi, im_lo, im_hi, std::move(grid), diagnostics);
}

// ---------------------------------------------------------------------------

namespace {

// Density resampled on a finer equispaced node set by trigonometric
// interpolation (zero padding in frequency space).
Eigen::VectorXcd trig_upsample(const Eigen::VectorXcd& f, int factor) {
  const int m = int(f.size());
  const int mf = m * factor;
  Eigen::FFT<double> fft;
  std::vector<cplx> in(f.data(), f.data() + m), coef;
  fft.fwd(coef, in);
  std::vector<cplx> padded(mf, 0.0);
  for (int q = 0; q < m; ++q) {
    if (m % 2 == 0 && q == m / 2) {
      // Nyquist mode split symmetrically between +-m/2.
      padded[q] += 0.5 * coef[q];
      padded[mf - q] += 0.5 * coef[q];
    } else {
      padded[q <= m / 2 ? q : mf - (m - q)] = coef[q];
    }
  }
  std::vector<cplx> out;
  fft.inv(out, padded);
  Eigen::VectorXcd v(mf);
  for (int p = 0; p < mf; ++p) v(p) = out[p] * double(factor);
  return v;
}

struct Level {
  BoundaryDiscretization disc;
  Eigen::VectorXcd psi;  // boundary value (open problem only)
  Eigen::VectorXcd phi;  // normal derivative
};

cplx wave_at(const Level& lv, Point x, cplx kappa, bool open, bool real_k) {
  const int m = int(lv.disc.size());
  const double h = 2.0 * kPi / m;
  cplx acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const Point diff = x - lv.disc.nodes[j];
    const double r = norm(diff);
    const double w = h * lv.disc.speeds[j];
    if (real_k) {
      const auto c = specfun::cylinder01(kappa.real() * r);
      acc += w * kI / 4.0 * cplx(c.j0, c.y0) * lv.phi(j);
      continue;
    }
    const auto c = specfun::cylinder01(kappa * r);
    if (!open) {
      acc += w * kI / 4.0 * c.h0 * lv.phi(j);
      continue;
    }
    // Standing kernel, as in the interior row of the operator.
    const double nd = dot(lv.disc.normals[j], diff);
    acc += w * kI / 4.0 * (c.h0 - c.j0) * lv.phi(j);
    acc -= w * kI * kappa / 4.0 * (c.h1 - c.j1) * nd / r * lv.psi(j);
  }
  return acc;
}

class WaveEvaluator {
 public:
  WaveEvaluator(const BoundaryDiscretization& disc, const Eigen::VectorXcd& density, cplx k,
                double n_index, ProblemKind kind)
      : open_(kind == ProblemKind::dielectric_tm) {
    const int m = int(disc.size());
    const int expected = open_ ? 2 * m : m;
    if (density.size() != expected) throw ContractError("density size does not match nodes");
    kappa_ = open_ ? n_index * k : k;
    real_k_ = !open_ && k.imag() == 0.0;
    Level base;
    base.disc = disc;
    if (open_) {
      base.psi = density.head(m);
      base.phi = density.tail(m);
    } else {
      base.phi = density;
    }
    levels_.push_back(std::move(base));
  }

  static constexpr int kMaxFactor = 64;

  // Returns false when even the finest level under-resolves the point.
  bool evaluate(Point x, double distance, cplx& value) {
    const double h0 = levels_[0].disc.element_size;
    int factor = 1, level = 0;
    while (factor < kMaxFactor && h0 / factor > distance / 4.0) {
      factor *= 2;
      ++level;
    }
    value = wave_at(level_for(level), x, kappa_, open_, real_k_);
    return h0 / factor <= distance / 4.0;
  }

 private:
  const Level& level_for(int level) {
    while (int(levels_.size()) <= level) {
      const Level& base = levels_[0];
      const int factor = 1 << levels_.size();
      Level lv;
      lv.disc = discretize_nodes(*base.disc.shape, int(base.disc.size()) * factor);
      lv.phi = trig_upsample(base.phi, factor);
      if (open_) lv.psi = trig_upsample(base.psi, factor);
      levels_.push_back(std::move(lv));
    }
    return levels_[level];
  }

  bool open_;
  bool real_k_ = false;
  cplx kappa_;
  std::vector<Level> levels_;
};

}  // namespace

std::vector<cplx> evaluate_wave(const BoundaryDiscretization& disc, const Eigen::VectorXcd& density,
                                cplx k, double n_index, ProblemKind kind,
                                const std::vector<Point>& points) {
  WaveEvaluator ev(disc, density, k, n_index, kind);
  std::vector<cplx> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ev.evaluate(points[i], disc.shape->distance_to_boundary(points[i]), out[i]);
  }
  return out;
}

InteriorEvaluation evaluate_interior(const BoundaryDiscretization& disc,
                                     const Eigen::VectorXcd& density, cplx k, double n_index,
                                     ProblemKind kind, std::shared_ptr<const InteriorGrid> grid,
                                     const Parity* parity) {
  if (!grid || grid->size() == 0) throw ContractError("evaluate_interior needs a grid");
  WaveEvaluator ev(disc, density, k, n_index, kind);
  InteriorEvaluation out;
  const InteriorGrid& g = *grid;
  std::vector<cplx> psi(g.size());
  std::vector<char> done(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.boundary_distance[i];
    if (d < disc.element_size) ++out.near_boundary_points;
    if (done[i]) continue;
    const bool resolved = ev.evaluate(g.points[i], d, psi[i]);
    if (!resolved) ++out.unresolved_points;
    done[i] = 1;
    if (!parity) continue;
    const int images[3] = {g.find(-g.ix[i], g.iy[i]), g.find(g.ix[i], -g.iy[i]),
                           g.find(-g.ix[i], -g.iy[i])};
    const double signs[3] = {double(parity->x), double(parity->y), double(parity->x * parity->y)};
    for (int q = 0; q < 3; ++q) {
      const int j = images[q];
      if (j < 0 || done[j]) continue;
      psi[j] = signs[q] * psi[i];
      done[j] = 1;
      if (!resolved) ++out.unresolved_points;
    }
  }
  out.field = field_from_amplitudes(std::move(grid), std::move(psi));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CircleEigenvalue> circle_dirichlet_oracle(int m_max, double k_lo, double k_hi) {
  if (m_max < 0 || m_max > 40) throw DomainError("circle oracle supports 0 <= m_max <= 40");
  if (!(k_hi > k_lo)) throw DomainError("empty window");
  std::vector<CircleEigenvalue> out;
  const double step = 0.05;
  for (int m = 0; m <= m_max; ++m) {
    int count = 0;
    double a = 1e-3;
    double fa = specfun::bessel_j(m, a);
    while (a < k_hi) {
      const double b = std::min(a + step, k_hi);
      const double fb = specfun::bessel_j(m, b);
      if (fa == 0.0 || fa * fb < 0.0) {
        double lo = a, hi = b, flo = fa;
        if (fa != 0.0) {
          for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = specfun::bessel_j(m, mid);
            if (fm == 0.0) {
              lo = hi = mid;
              break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
        }
        const double root = 0.5 * (lo + hi);
        ++count;
        if (root >= k_lo && root <= k_hi) out.push_back({root, m, count, m == 0 ? 1 : 2});
      }
      a = b;
      fa = fb;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CircleEigenvalue& x, const CircleEigenvalue& y) { return x.k < y.k; });
  return out;
}

cplx circle_tm_characteristic(int m, double n_index, cplx k) {
  const cplx z = n_index * k;
  return n_index * specfun::bessel_j_prime(m, z) * specfun::hankel1(m, k) -
         specfun::bessel_j(m, z) * specfun::hankel1_prime(m, k);
}

namespace {

// f, f' and a scale |n J' H| + |J H'| for relative residuals.
struct TmEval {
  cplx f, df;
  double scale;
};

TmEval tm_eval(int m, double n, cplx k) {
  const cplx z = n * k;
  const cplx j = specfun::bessel_j(m, z), jp = specfun::bessel_j_prime(m, z);
  const cplx h = specfun::hankel1(m, k), hp = specfun::hankel1_prime(m, k);
  const double mm = double(m) * m;
  const cplx jpp = -jp / z - (1.0 - mm / (z * z)) * j;
  const cplx hpp = -hp / k - (1.0 - mm / (k * k)) * h;
  TmEval e;
  e.f = n * jp * h - j * hp;
  e.df = n * n * jpp * h - j * hpp;
  e.scale = std::abs(n * jp * h) + std::abs(j * hp);
  return e;
}

}  // namespace

std::vector<CircleResonance> circle_tm_resonance_oracle(double n_index, int m_max, double re_lo,
                                                        double re_hi, double im_lo, double im_hi,
                                                        double start_step) {
  if (!(n_index > 1.0)) throw InvalidParameter("circle TM oracle needs n_index > 1");
  if (m_max < 0 || m_max > 40) throw DomainError("circle oracle supports 0 <= m_max <= 40");
  if (!(start_step > 0.0)) throw DomainError("start_step must be positive");
  std::vector<CircleResonance> out;
  const int nre = int(std::ceil((re_hi - re_lo) / start_step));
  const int nim = int(std::ceil((im_hi - im_lo) / start_step));
  for (int m = 0; m <= m_max; ++m) {
    std::vector<cplx> found;
    for (int a = 0; a <= nre; ++a) {
      for (int b = 0; b <= nim; ++b) {
        cplx k(std::min(re_lo + a * start_step, re_hi), std::min(im_lo + b * start_step, im_hi));
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
          const auto e = tm_eval(m, n_index, k);
          if (!std::isfinite(std::abs(e.f)) || std::abs(e.df) == 0.0) break;
          cplx step = e.f / e.df;
          if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
          k -= step;
          if (!(k.real() > 0.05)) break;
          if (std::abs(step) < 1e-14 * std::abs(k)) {
            ok = true;
            break;
          }
        }
        if (!ok) continue;
        const auto e = tm_eval(m, n_index, k);
        if (!(std::abs(e.f) < 1e-10 * std::max(1.0, e.scale))) continue;
        if (k.real() < re_lo || k.real() > re_hi || k.imag() < im_lo || k.imag() > im_hi) {
          continue;
        }
        bool dup = false;
        for (cplx q : found) dup = dup || std::abs(q - k) < 1e-8;
        if (!dup) found.push_back(k);
      }
    }
    for (cplx k : found) out.push_back({k, m, m == 0 ? 1 : 2});
  }
  std::sort(out.begin(), out.end(), [](const CircleResonance& x, const CircleResonance& y) {
    return x.k.real() < y.k.real() || (x.k.real() == y.k.real() && x.m < y.m);
  });
  return out;
}

}  // namespace billiards
