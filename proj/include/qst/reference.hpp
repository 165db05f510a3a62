#ifndef QST_REFERENCE_HPP
#define QST_REFERENCE_HPP

#include <optional>
#include <vector>

#include "qst/gradients.hpp"
#include "qst/observables.hpp"
#include "qst/rbm.hpp"
#include "qst/rng.hpp"
#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

// Serial reference implementations of the parallel kernels: straight loops,
// no OpenMP, no incremental shortcuts. The unit tests and the benchmark run
// these against the production kernels; keep them boring.

namespace qst::ref {

double effective_energy(const Rbm& rbm, const Eigen::Ref<const Vector>& v);
Vector effective_energies(const Rbm& rbm, const SpinBatch& batch);

double log_partition(const Rbm& rbm, int enumeration_limit = kDefaultEnumerationLimit);

// Same chain/substream discipline as qst::sample, one chain after another.
SpinBatch sample(const Rbm& rbm, int num_samples, int k, const RngStream& stream,
                 const std::optional<SpinBatch>& initial = std::nullopt);

RbmGradient mean_energy_gradient(const Rbm& rbm, const SpinBatch& batch);

// sigma^x local estimators via full amplitude evaluations (no flip updates).
std::vector<double> sigma_x_values(const PositiveWavefunction& model, const SpinBatch& samples);
std::vector<double> sigma_x_values(const ComplexWavefunction& model, const SpinBatch& samples);

std::vector<double> swap_local_estimator(const PositiveWavefunction& model,
                                         const SpinBatch& samples, const Region& region);
std::vector<double> swap_local_estimator(const ComplexWavefunction& model,
                                         const SpinBatch& samples, const Region& region);

}  // namespace qst::ref

#endif
