#include "billiards/detect.hpp"

#include <algorithm>
#include <cmath>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

bool usable(const BranchSample& s) { return s.status == "ok" || s.status == "not_converged"; }

std::vector<const BranchSample*> usable_samples(const BranchTrajectory& t) {
  std::vector<const BranchSample*> out;
  for (const auto& s : t.samples) {
    if (usable(s)) out.push_back(&s);
  }
  return out;
}

// Linear interpolation of a sample quantity at p (p inside the sample range).
template <class Get>
double interpolate(const std::vector<const BranchSample*>& s, double p, Get get) {
  auto it = std::lower_bound(s.begin(), s.end(), p,
                             [](const BranchSample* a, double v) { return a->param < v; });
  if (it == s.end()) return get(*s.back());
  if ((*it)->param == p || it == s.begin()) return get(**it);
  const BranchSample& b = **it;
  const BranchSample& a = **(it - 1);
  const double w = (p - a.param) / (b.param - a.param);
  return (1.0 - w) * get(a) + w * get(b);
}

const BranchSample* first_at_or_after(const std::vector<const BranchSample*>& s, double p) {
  for (const auto* x : s) {
    if (x->param >= p - 1e-13) return x;
  }
  return nullptr;
}

const BranchSample* last_at_or_before(const std::vector<const BranchSample*>& s, double p) {
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if ((*it)->param <= p + 1e-13) return *it;
  }
  return nullptr;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "true";
    case Verdict::no:
      return "false";
    case Verdict::not_applicable:
      return "not_applicable";
  }
  return "not_applicable";
}

std::string to_string(EncounterClass c) {
  switch (c) {
    case EncounterClass::crossing:
      return "crossing";
    case EncounterClass::avoided_crossing:
      return "avoided_crossing";
    case EncounterClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<GapPoint> gap_profile(const BranchTrajectory& t1, const BranchTrajectory& t2) {
  const auto s1 = usable_samples(t1);
  const auto s2 = usable_samples(t2);
  if (s1.empty() || s2.empty()) throw ContractError("gap_profile: empty trajectory");
  const double lo = std::max(s1.front()->param, s2.front()->param);
  const double hi = std::min(s1.back()->param, s2.back()->param);
  if (!(hi >= lo)) throw ContractError("gap_profile: parameter ranges do not overlap");
  std::vector<double> ps;
  for (const auto* s : s1) {
    if (s->param >= lo && s->param <= hi) ps.push_back(s->param);
  }
  for (const auto* s : s2) {
    if (s->param >= lo && s->param <= hi) ps.push_back(s->param);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end(), [](double a, double b) { return b - a < 1e-13; }),
           ps.end());
  auto re = [](const BranchSample& s) { return s.k.real(); };
  std::vector<GapPoint> out;
  out.reserve(ps.size());
  for (double p : ps) {
    const double d = interpolate(s1, p, re) - interpolate(s2, p, re);
    out.push_back({p, std::abs(d), d});
  }
  return out;
}

GapMinimum find_gap_minimum(const std::vector<GapPoint>& profile) {
  if (profile.empty()) throw ContractError("empty gap profile");
  GapMinimum m;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double a = profile[i].diff, b = profile[i + 1].diff;
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) || (a == 0.0 && i > 0)) {
      m.sign_change = true;
      m.g_min = 0.0;
      m.p_star = a == 0.0 ? profile[i].p
                          : profile[i].p + (profile[i + 1].p - profile[i].p) * a / (a - b);
      m.interior = true;
      return m;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i].gap < profile[best].gap) best = i;
  }
  m.p_star = profile[best].p;
  m.g_min = profile[best].gap;
  m.interior = best > 0 && best + 1 < profile.size();
  return m;
}

EncounterClass classify_crossing(const std::vector<GapPoint>& profile, double crossing_tol) {
  const auto m = find_gap_minimum(profile);
  if (!m.interior) return EncounterClass::inconclusive;
  return m.g_min < crossing_tol ? EncounterClass::crossing : EncounterClass::avoided_crossing;
}

ExchangeCheck intensity_exchange(const BranchTrajectory& t1, const BranchTrajectory& t2,
                                 double p_a, double p_b) {
  const auto s1 = usable_samples(t1);
  const auto s2 = usable_samples(t2);
  const auto* a1 = first_at_or_after(s1, p_a);
  const auto* a2 = first_at_or_after(s2, p_a);
  const auto* b1 = last_at_or_before(s1, p_b);
  const auto* b2 = last_at_or_before(s2, p_b);
  if (!a1 || !a2 || !b1 || !b2) throw ContractError("intensity_exchange: window has no samples");
  ExchangeCheck e;
  e.same_1 = intensity_overlap(a1->tracking_rho, b1->tracking_rho);
  e.same_2 = intensity_overlap(a2->tracking_rho, b2->tracking_rho);
  e.cross_12 = intensity_overlap(a1->tracking_rho, b2->tracking_rho);
  e.cross_21 = intensity_overlap(a2->tracking_rho, b1->tracking_rho);
  return e;
}

EntropySignature entropy_signature(const BranchTrajectory& t1, const BranchTrajectory& t2,
                                   const std::vector<GapPoint>& profile, const GapMinimum& minimum,
                                   double p_a, double p_b) {
  EntropySignature sig;
  const auto s1 = usable_samples(t1);
  const auto s2 = usable_samples(t2);
  auto window_stats = [&](const std::vector<const BranchSample*>& s, double& p_max, double& s_max,
                          double& range) {
    double lo = INFINITY, hi = -INFINITY;
    p_max = 0.0;
    for (const auto* x : s) {
      if (x->param < p_a - 1e-13 || x->param > p_b + 1e-13) continue;
      if (x->entropy > hi) {
        hi = x->entropy;
        p_max = x->param;
      }
      lo = std::min(lo, x->entropy);
    }
    s_max = hi;
    range = hi - lo;
  };
  double range1 = 0.0, range2 = 0.0;
  window_stats(s1, sig.p_max_1, sig.s_max_1, range1);
  window_stats(s2, sig.p_max_2, sig.s_max_2, range2);

  // Region around p* where the gap stays within twice its minimum.
  sig.center_lo = sig.center_hi = minimum.p_star;
  if (!minimum.sign_change && !profile.empty()) {
    std::size_t c = 0;
    for (std::size_t i = 1; i < profile.size(); ++i) {
      if (std::abs(profile[i].p - minimum.p_star) < std::abs(profile[c].p - minimum.p_star)) c = i;
    }
    const double limit = 2.0 * minimum.g_min;
    std::size_t l = c, r = c;
    while (l > 0 && profile[l - 1].gap <= limit) --l;
    while (r + 1 < profile.size() && profile[r + 1].gap <= limit) ++r;
    sig.center_lo = profile[l].p;
    sig.center_hi = profile[r].p;
  }

  if (!(range1 >= 1e-6) || !(range2 >= 1e-6)) return sig;
  const double eps = 1e-13;
  const bool in1 = sig.p_max_1 >= sig.center_lo - eps && sig.p_max_1 <= sig.center_hi + eps;
  const bool in2 = sig.p_max_2 >= sig.center_lo - eps && sig.p_max_2 <= sig.center_hi + eps;
  sig.max_at_center = in1 && in2 ? Verdict::yes : Verdict::no;

  auto ent = [](const BranchSample& s) { return s.entropy; };
  const double d_start = interpolate(s1, p_a, ent) - interpolate(s2, p_a, ent);
  const double d_end = interpolate(s1, p_b, ent) - interpolate(s2, p_b, ent);
  sig.exchange = (d_start > 0.0 && d_end < 0.0) || (d_start < 0.0 && d_end > 0.0) ? Verdict::yes
                                                                                  : Verdict::no;
  return sig;
}

AvoidedCrossingReport analyze_pair(const BranchTrajectory& t1, const BranchTrajectory& t2,
                                   double crossing_tol) {
  AvoidedCrossingReport rep;
  rep.branch_1 = t1.id;
  rep.branch_2 = t2.id;
  rep.parity_1 = t1.parity;
  rep.parity_2 = t2.parity;
  rep.profile = gap_profile(t1, t2);
  rep.minimum = find_gap_minimum(rep.profile);
  rep.window_lo = rep.profile.front().p;
  rep.window_hi = rep.profile.back().p;
  rep.classification = classify_crossing(rep.profile, crossing_tol);
  rep.intensity = intensity_exchange(t1, t2, rep.window_lo, rep.window_hi);
  switch (rep.classification) {
    case EncounterClass::crossing:
      rep.reason = rep.minimum.sign_change ? "levels cross between samples"
                                           : "minimum gap below crossing tolerance";
      break;
    case EncounterClass::inconclusive:
      rep.reason = "gap minimum at the edge of the window";
      break;
    case EncounterClass::avoided_crossing:
      if (rep.intensity.exchanged()) {
        rep.reason = "levels repel and exchange intensity patterns";
      } else {
        rep.classification = EncounterClass::inconclusive;
        rep.reason = "levels repel without exchanging intensity patterns";
      }
      break;
  }
  rep.entropy =
      entropy_signature(t1, t2, rep.profile, rep.minimum, rep.window_lo, rep.window_hi);
  auto stats = [&](const BranchTrajectory& t, double& range, double& mean) {
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    int n = 0;
    for (const auto* s : usable_samples(t)) {
      if (s->param < rep.window_lo - 1e-13 || s->param > rep.window_hi + 1e-13) continue;
      lo = std::min(lo, s->entropy);
      hi = std::max(hi, s->entropy);
      sum += s->entropy;
      ++n;
    }
    range = n ? hi - lo : 0.0;
    mean = n ? sum / n : 0.0;
  };
  stats(t1, rep.entropy_range_1, rep.entropy_mean_1);
  stats(t2, rep.entropy_range_2, rep.entropy_mean_2);
  return rep;
}

std::vector<AvoidedCrossingReport> find_encounters(const std::vector<BranchTrajectory>& branches,
                                                   double crossing_tol, double max_gap) {
  std::vector<AvoidedCrossingReport> out;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    for (std::size_t j = i + 1; j < branches.size(); ++j) {
      if (usable_samples(branches[i]).size() < 3 || usable_samples(branches[j]).size() < 3) continue;
      std::vector<GapPoint> prof;
      try {
        prof = gap_profile(branches[i], branches[j]);
      } catch (const ContractError&) {
        continue;
      }
      if (prof.size() < 3) continue;
      const auto m = find_gap_minimum(prof);
      if (!m.interior || m.g_min >= max_gap) continue;
      out.push_back(analyze_pair(branches[i], branches[j], crossing_tol));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AvoidedCrossingReport& a, const AvoidedCrossingReport& b) {
                     return a.minimum.g_min < b.minimum.g_min;
                   });
  return out;
}

}  // namespace billiards
