#include "billiards/twolevel.hpp"

#include <cmath>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

std::array<cplx, 2> normalized(cplx a, cplx b) {
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  a /= n;
  b /= n;
  // larger component real and positive; the first one wins a tie
  const cplx lead = std::abs(b) > std::abs(a) ? b : a;
  const cplx phase = std::conj(lead) / std::abs(lead);
  return {a * phase, b * phase};
}

bool before(cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); }

}  // namespace

double TwoLevelSystem::degeneracy_point() const {
  const double ds = e1.slope - e2.slope;
  if (ds == 0.0) throw ContractError("two-level system: parallel levels never meet");
  return (e2.offset - e1.offset) / ds;
}

double TwoLevelSystem::hermitian_gap(double p) const {
  const double de = e1(p) - e2(p);
  return std::sqrt(de * de + 4.0 * std::norm(g));
}

std::pair<EigenPair, EigenPair> eigenpairs(const TwoLevelSystem& sys, double p) {
  const cplx d1(sys.e1(p), -sys.gamma1);
  const cplx d2(sys.e2(p), -sys.gamma2);
  if (sys.g == 0.0) {
    return {EigenPair{d1, {1.0, 0.0}}, EigenPair{d2, {0.0, 1.0}}};
  }
  const cplx mean = 0.5 * (d1 + d2);
  const cplx half = 0.5 * (d1 - d2);
  cplx root = std::sqrt(half * half + std::norm(sys.g));
  if (root.real() < 0.0 || (root.real() == 0.0 && root.imag() < 0.0)) root = -root;
  auto pair_for = [&](cplx lambda) {
    // two candidate null vectors of H - lambda; the longer one is better conditioned
    const cplx a1 = sys.g, b1 = lambda - d1;
    const cplx a2 = lambda - d2, b2 = std::conj(sys.g);
    const bool first = std::norm(a1) + std::norm(b1) >= std::norm(a2) + std::norm(b2);
    return EigenPair{lambda, first ? normalized(a1, b1) : normalized(a2, b2)};
  };
  EigenPair lo = pair_for(mean - root), hi = pair_for(mean + root);
  if (before(hi.value, lo.value)) std::swap(lo, hi);
  return {lo, hi};
}

std::pair<BranchTrajectory, BranchTrajectory> surrogate_sweep(const TwoLevelSystem& sys,
                                                              double p_lo, double p_hi,
                                                              int steps) {
  if (steps < 16) throw InvalidParameter("surrogate_sweep: at least 16 steps");
  if (!(p_lo < p_hi)) throw InvalidParameter("surrogate_sweep: need p_lo < p_hi");
  if (sys.basis1.grid != sys.basis2.grid || !sys.basis1.has_amplitude() ||
      !sys.basis2.has_amplitude()) {
    throw ContractError("surrogate_sweep: basis states need amplitudes on one grid");
  }
  const bool hermitian = sys.gamma1 == 0.0 && sys.gamma2 == 0.0;
  BranchTrajectory t[2];
  t[0].id = 0;
  t[1].id = 1;
  for (int s = 0; s < steps; ++s) {
    const double p = p_lo + (p_hi - p_lo) * s / (steps - 1);
    auto [a, b] = eigenpairs(sys, p);
    // Hermitian levels never cross for g != 0 and eigenpairs() keeps the
    // diagonal labels for g = 0, so only open systems need extrapolation.
    if (s >= 1 && !hermitian) {
      // keep the assignment closest to the extrapolated eigenvalues
      cplx pred[2];
      for (int i = 0; i < 2; ++i) {
        const auto& smp = t[i].samples;
        pred[i] = s >= 2 ? 2.0 * smp[s - 1].k - smp[s - 2].k : smp[s - 1].k;
      }
      const double keep = std::abs(a.value - pred[0]) + std::abs(b.value - pred[1]);
      const double swap = std::abs(b.value - pred[0]) + std::abs(a.value - pred[1]);
      if (swap < keep) std::swap(a, b);
    }
    const EigenPair* pairs[2] = {&a, &b};
    for (int i = 0; i < 2; ++i) {
      auto mode = std::make_shared<ModeSolution>();
      mode->k = pairs[i]->value;
      mode->field = mix_fields(sys.basis1, sys.basis2, pairs[i]->vector[0], pairs[i]->vector[1]);
      BranchSample smp;
      smp.param = p;
      smp.shape_value = p;
      smp.k = mode->k;
      smp.entropy = shannon_entropy(mode->field);
      smp.tracking_rho = mode->field.rho;
      smp.mode = std::move(mode);
      t[i].samples.push_back(std::move(smp));
    }
  }
  return {std::move(t[0]), std::move(t[1])};
}

std::pair<ProbabilityField, ProbabilityField> split_basis(std::shared_ptr<const InteriorGrid> grid) {
  if (!grid || grid->size() == 0) throw ContractError("split_basis: empty grid");
  std::vector<cplx> left(grid->size(), 0.0), right(grid->size(), 0.0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double x = grid->points[i].x;
    if (x < 0.0) left[i] = 1.0;
    if (x > 0.0) right[i] = x;
  }
  auto f1 = field_from_amplitudes(grid, std::move(left));
  auto f2 = field_from_amplitudes(grid, std::move(right));
  if (f1.rho.empty() || f2.rho.empty()) throw ContractError("split_basis: grid lies on one side");
  return {std::move(f1), std::move(f2)};
}

}  // namespace billiards
