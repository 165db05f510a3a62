#ifndef QST_METRICS_HPP
#define QST_METRICS_HPP

#include <vector>

#include "qst/gates.hpp"
#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

namespace qst {

// A normalized reference state, indexed in canonical configuration order
// (site 0 most significant).
struct TargetState {
    ComplexVector amplitudes;

    TargetState() = default;
    explicit TargetState(ComplexVector amps);

    int num_sites() const;
    double norm_sq() const { return amplitudes.squaredNorm(); }
};

// Normalized snapshot of a model's state over an enumerated space.
TargetState target_state_from(const PositiveWavefunction& model, const SpinBatch& space);
TargetState target_state_from(const ComplexWavefunction& model, const SpinBatch& space);

// Squared overlap |<target|psi>|^2 / Z between the (unnormalized) model
// state and a normalized target.
double fidelity(const PositiveWavefunction& model, const TargetState& target,
                const SpinBatch& space);
double fidelity(const ComplexWavefunction& model, const TargetState& target,
                const SpinBatch& space);

// KL(P || q) with P = |target|^2 and q the normalized model distribution.
// Terms with P = 0 contribute nothing; q = 0 under P > 0 yields +infinity.
double kl_divergence(const PositiveWavefunction& model, const TargetState& target,
                     const SpinBatch& space);
double kl_divergence(const ComplexWavefunction& model, const TargetState& target,
                     const SpinBatch& space);

// Sum of KL divergences between the rotated target distribution and the
// normalized rotated model distribution, one term per basis.
double kl_multibasis(const PositiveWavefunction& model, const GateRegistry& registry,
                     const TargetState& target, const std::vector<Basis>& bases,
                     const SpinBatch& space);
double kl_multibasis(const ComplexWavefunction& model, const GateRegistry& registry,
                     const TargetState& target, const std::vector<Basis>& bases,
                     const SpinBatch& space);

}  // namespace qst

#endif
