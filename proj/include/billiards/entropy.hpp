#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

using cplx = std::complex<double>;

/// Normalized intensity rho(x_i) on the points of an interior grid. When the
/// field comes from a wavefunction the complex amplitudes are kept as well
/// (scaled so that |amplitude_i|^2 = rho_i), which coherent mixing needs.
struct ProbabilityField {
  std::shared_ptr<const InteriorGrid> grid;
  std::vector<double> rho;
  std::vector<cplx> amplitude;

  std::size_t size() const { return rho.size(); }
  bool has_amplitude() const { return !amplitude.empty(); }
};

/// Fixed-order pairwise sum, bit-reproducible for a given input order.
double pairwise_sum(std::span<const double> values);

/// Field from unnormalized amplitudes psi_i; rho_i = |psi_i|^2 / sum |psi|^2.
ProbabilityField field_from_amplitudes(std::shared_ptr<const InteriorGrid> grid,
                                       std::vector<cplx> psi);
/// Field from non-negative weights, normalized to unit sum.
ProbabilityField field_from_weights(std::shared_ptr<const InteriorGrid> grid,
                                    std::vector<double> weights);
ProbabilityField uniform_field(std::shared_ptr<const InteriorGrid> grid);

/// S = -sum rho log rho in nats, with 0 log 0 = 0. Throws ContractError when
/// |sum rho - 1| > 1e-9 or some rho is negative.
double shannon_entropy(const ProbabilityField& field);
/// Same on a bare probability vector.
double shannon_entropy(std::span<const double> rho);

/// log N, the entropy of the uniform distribution on N points.
double max_entropy(long n);

/// Intensity of c1 psi1 + c2 psi2 renormalized to unit sum. Requires both
/// fields on the same grid with amplitudes and |c1|^2 + |c2|^2 = 1.
ProbabilityField mix_fields(const ProbabilityField& f1, const ProbabilityField& f2, cplx c1,
                            cplx c2);

}  // namespace billiards
