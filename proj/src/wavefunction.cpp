#include "qst/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "qst/detail/rotation.hpp"
#include "qst/parallel.hpp"

namespace qst {

ComplexWavefunction::ComplexWavefunction(Rbm lambda, Rbm mu)
    : amplitude(std::move(lambda)), phase_rbm(std::move(mu)) {
    if (amplitude.num_visible() != phase_rbm.num_visible()) {
        throw std::invalid_argument(
            "ComplexWavefunction: amplitude and phase RBMs must share n_visible");
    }
}

ComplexWavefunction::ComplexWavefunction(int n_visible, int n_hidden, const RngStream& stream)
    : amplitude(Rbm::random_init(n_visible, n_hidden, stream.child(0))),
      phase_rbm(Rbm::random_init(n_visible, n_hidden, stream.child(1))) {}

ComplexVector amplitude_vector(const PositiveWavefunction& model, const SpinBatch& space) {
    const Vector energies = model.amplitude.effective_energies(space);
    ComplexVector psi(space.rows());
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        psi(i) = std::exp(-0.5 * energies(i));
    }
    return psi;
}

ComplexVector amplitude_vector(const ComplexWavefunction& model, const SpinBatch& space) {
    const Vector amp_energies = model.amplitude.effective_energies(space);
    const Vector phase_energies = model.phase_rbm.effective_energies(space);
    ComplexVector psi(space.rows());
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        psi(i) = std::polar(std::exp(-0.5 * amp_energies(i)), -0.5 * phase_energies(i));
    }
    return psi;
}

namespace {

template <typename ModelT>
Complex rotated_psi_impl(const ModelT& model, const GateRegistry& registry, const Basis& basis,
                         const Eigen::Ref<const Vector>& sigma_b, int rotated_limit) {
    const auto plan =
        detail::make_rotation_plan(registry, basis, model.num_sites(), rotated_limit);
    if (plan.rotated_count() == 0) return model.psi_complex(sigma_b);
    Complex total(0.0, 0.0);
    Vector sigma(sigma_b.size());
    detail::for_each_rotated_term(plan, sigma_b, sigma,
                                  [&](const Vector& s, Complex u) {
                                      total += u * model.psi_complex(s);
                                  });
    return total;
}

}  // namespace

Complex rotated_psi(const PositiveWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit) {
    return rotated_psi_impl(model, registry, basis, sigma_b, rotated_limit);
}

Complex rotated_psi(const ComplexWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit) {
    return rotated_psi_impl(model, registry, basis, sigma_b, rotated_limit);
}

double rotated_prob(const PositiveWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit) {
    return std::norm(rotated_psi(model, registry, basis, sigma_b, rotated_limit));
}

double rotated_prob(const ComplexWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit) {
    return std::norm(rotated_psi(model, registry, basis, sigma_b, rotated_limit));
}

}  // namespace qst
