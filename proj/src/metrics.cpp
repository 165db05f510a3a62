#include "qst/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qst {

TargetState::TargetState(ComplexVector amps) : amplitudes(std::move(amps)) {
    if (amplitudes.size() < 2 || (amplitudes.size() & (amplitudes.size() - 1)) != 0) {
        throw std::invalid_argument("TargetState: amplitude count must be 2^N, N >= 1");
    }
    const double n2 = amplitudes.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-10) {
        throw std::invalid_argument("TargetState: state is not normalized (|psi|^2 = " +
                                    std::to_string(n2) + ")");
    }
}

int TargetState::num_sites() const {
    int n = 0;
    for (Eigen::Index size = amplitudes.size(); size > 1; size >>= 1) ++n;
    return n;
}

namespace {

template <typename ModelT>
TargetState target_state_from_impl(const ModelT& model, const SpinBatch& space) {
    ComplexVector psi = amplitude_vector(model, space);
    psi /= psi.norm();
    return TargetState(std::move(psi));
}

}  // namespace

TargetState target_state_from(const PositiveWavefunction& model, const SpinBatch& space) {
    return target_state_from_impl(model, space);
}

TargetState target_state_from(const ComplexWavefunction& model, const SpinBatch& space) {
    return target_state_from_impl(model, space);
}

namespace {

void check_space(const TargetState& target, const SpinBatch& space, int model_sites) {
    if (space.cols() != model_sites) {
        throw std::invalid_argument("metrics: space width does not match model sites");
    }
    if (target.amplitudes.size() != space.rows()) {
        throw std::invalid_argument("metrics: target length does not match space size");
    }
}

template <typename ModelT>
double fidelity_impl(const ModelT& model, const TargetState& target, const SpinBatch& space) {
    check_space(target, space, model.num_sites());
    const ComplexVector psi = amplitude_vector(model, space);
    const double z = psi.squaredNorm();
    const Complex overlap = target.amplitudes.dot(psi);  // conjugates the target
    return std::norm(overlap) / z;
}

template <typename ModelT>
double kl_impl(const ModelT& model, const TargetState& target, const SpinBatch& space) {
    check_space(target, space, model.num_sites());
    const ComplexVector psi = amplitude_vector(model, space);
    const double log_z = std::log(psi.squaredNorm());
    double kl = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double p = std::norm(target.amplitudes(i));
        if (p <= 0.0) continue;
        const double q_unnorm = std::norm(psi(i));
        if (q_unnorm <= 0.0) return std::numeric_limits<double>::infinity();
        kl += p * (std::log(p) - std::log(q_unnorm) + log_z);
    }
    return kl;
}

// KL between two explicit distributions on the same index set; q given
// unnormalized together with its log normalization.
double kl_against_rotated(const Vector& p, const ComplexVector& rotated_model, double log_z) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) <= 0.0) continue;
        const double q_unnorm = std::norm(rotated_model(i));
        if (q_unnorm <= 0.0) return std::numeric_limits<double>::infinity();
        kl += p(i) * (std::log(p(i)) - std::log(q_unnorm) + log_z);
    }
    return kl;
}

template <typename ModelT>
double kl_multibasis_impl(const ModelT& model, const GateRegistry& registry,
                          const TargetState& target, const std::vector<Basis>& bases,
                          const SpinBatch& space) {
    check_space(target, space, model.num_sites());
    if (bases.empty()) throw std::invalid_argument("kl_multibasis: no bases given");
    const ComplexVector psi = amplitude_vector(model, space);
    const double log_z = std::log(psi.squaredNorm());
    double total = 0.0;
    for (const Basis& basis : bases) {
        const ComplexVector rotated_target =
            apply_product_unitary(registry, basis, target.amplitudes);
        const ComplexVector rotated_model = apply_product_unitary(registry, basis, psi);
        const Vector p = rotated_target.cwiseAbs2();
        total += kl_against_rotated(p, rotated_model, log_z);
    }
    return total;
}

}  // namespace

double fidelity(const PositiveWavefunction& model, const TargetState& target,
                const SpinBatch& space) {
    return fidelity_impl(model, target, space);
}

double fidelity(const ComplexWavefunction& model, const TargetState& target,
                const SpinBatch& space) {
    return fidelity_impl(model, target, space);
}

double kl_divergence(const PositiveWavefunction& model, const TargetState& target,
                     const SpinBatch& space) {
    return kl_impl(model, target, space);
}

double kl_divergence(const ComplexWavefunction& model, const TargetState& target,
                     const SpinBatch& space) {
    return kl_impl(model, target, space);
}

double kl_multibasis(const PositiveWavefunction& model, const GateRegistry& registry,
                     const TargetState& target, const std::vector<Basis>& bases,
                     const SpinBatch& space) {
    return kl_multibasis_impl(model, registry, target, bases, space);
}

double kl_multibasis(const ComplexWavefunction& model, const GateRegistry& registry,
                     const TargetState& target, const std::vector<Basis>& bases,
                     const SpinBatch& space) {
    return kl_multibasis_impl(model, registry, target, bases, space);
}

}  // namespace qst
