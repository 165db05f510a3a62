#ifndef QST_EXACT_HPP
#define QST_EXACT_HPP

#include <utility>
#include <vector>

#include "qst/gates.hpp"
#include "qst/metrics.hpp"
#include "qst/observables.hpp"
#include "qst/rng.hpp"
#include "qst/types.hpp"

namespace qst {

// Open-boundary transverse-field Ising chain
//   H = -J sum_i sz_i sz_{i+1} - h sum_j sx_j
// with +-1 spin convention (the 0/1 encoding is only storage).
struct TfimSpec {
    int num_sites = 2;
    double coupling = 1.0;  // J
    double field = 1.0;     // h

    void validate() const;
};

inline constexpr int kDenseDiagonalizationLimit = 14;

// Dense 2^N x 2^N Hamiltonian in canonical configuration order.
Matrix tfim_hamiltonian(const TfimSpec& spec);

// H |psi> without building the dense matrix.
ComplexVector apply_tfim(const TfimSpec& spec, const ComplexVector& psi);

// Lowest eigenpair by dense symmetric diagonalization; the eigenvector sign
// is fixed so its largest-magnitude amplitude is positive.
std::pair<double, TargetState> tfim_ground_state(const TfimSpec& spec);

// i.i.d. draws from |psi|^2 by inverse-CDF over the cumulative weights.
SpinBatch born_sample(const TargetState& state, int num_samples, const RngStream& stream);

// Normalized state with uniform random magnitudes and phases in [0, 2pi).
TargetState random_complex_state(int num_qubits, const RngStream& stream);

// For each basis: rotate the state, draw samples_per_basis Born samples, and
// record each with its basis. Dataset order follows the bases list.
TrainingDataset rotated_measurement_dataset(const TargetState& state,
                                            const GateRegistry& registry,
                                            const std::vector<Basis>& bases,
                                            int samples_per_basis, const RngStream& stream);

enum class ExactObservable { SigmaZ, AbsSigmaZ, SigmaX };

double exact_observable(const TargetState& state, ExactObservable kind);
double exact_tfim_energy(const TargetState& state, const TfimSpec& spec);

// -ln Tr(rho_A^2) from the reduced density matrix of the region.
double exact_renyi_s2(const TargetState& state, const Region& region);

}  // namespace qst

#endif
