#include "billiards/entropy.hpp"

#include <cmath>
#include <string>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise(values.data(), values.size());
}

ProbabilityField field_from_amplitudes(std::shared_ptr<const InteriorGrid> grid,
                                       std::vector<cplx> psi) {
  if (grid && grid->size() != psi.size()) {
    throw ContractError("amplitude count does not match the grid");
  }
  std::vector<double> intensity(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) intensity[i] = std::norm(psi[i]);
  const double total = pairwise_sum(intensity);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ContractError("field has zero or non-finite total intensity");
  }
  const double scale = 1.0 / std::sqrt(total);
  ProbabilityField f;
  f.grid = std::move(grid);
  f.rho.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] *= scale;
    f.rho[i] = intensity[i] / total;
  }
  f.amplitude = std::move(psi);
  return f;
}

ProbabilityField field_from_weights(std::shared_ptr<const InteriorGrid> grid,
                                    std::vector<double> weights) {
  if (grid && grid->size() != weights.size()) {
    throw ContractError("weight count does not match the grid");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw ContractError("negative or NaN probability weight");
  }
  const double total = pairwise_sum(weights);
  if (!(total > 0.0)) throw ContractError("weights sum to zero");
  for (double& w : weights) w /= total;
  ProbabilityField f;
  f.grid = std::move(grid);
  f.rho = std::move(weights);
  return f;
}

ProbabilityField uniform_field(std::shared_ptr<const InteriorGrid> grid) {
  const std::size_t n = grid->size();
  return field_from_weights(std::move(grid), std::vector<double>(n, 1.0));
}

double shannon_entropy(std::span<const double> rho) {
  if (rho.empty()) throw ContractError("entropy of an empty distribution");
  const double total = pairwise_sum(rho);
  if (!(std::abs(total - 1.0) <= 1e-9)) {
    throw ContractError("distribution is not normalized (sum = " + std::to_string(total) + ")");
  }
  std::vector<double> terms(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double p = rho[i];
    if (p < 0.0) throw ContractError("negative probability");
    terms[i] = p > 0.0 ? -p * std::log(p) : 0.0;
  }
  return pairwise_sum(terms);
}

double shannon_entropy(const ProbabilityField& field) { return shannon_entropy(field.rho); }

double max_entropy(long n) {
  if (n < 1) throw DomainError("max_entropy needs N >= 1");
  return std::log(double(n));
}

ProbabilityField mix_fields(const ProbabilityField& f1, const ProbabilityField& f2, cplx c1,
                            cplx c2) {
  if (f1.grid != f2.grid || f1.size() != f2.size()) {
    throw ContractError("mix_fields: fields live on different grids");
  }
  if (!f1.has_amplitude() || !f2.has_amplitude()) {
    throw ContractError("mix_fields: coherent mixing needs the underlying amplitudes");
  }
  if (std::abs(std::norm(c1) + std::norm(c2) - 1.0) > 1e-9) {
    throw ContractError("mix_fields: |c1|^2 + |c2|^2 must equal 1");
  }
  std::vector<cplx> psi(f1.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = c1 * f1.amplitude[i] + c2 * f2.amplitude[i];
  return field_from_amplitudes(f1.grid, std::move(psi));
}

}  // namespace billiards
