#ifndef QST_WAVEFUNCTION_HPP
#define QST_WAVEFUNCTION_HPP

#include "qst/gates.hpp"
#include "qst/rbm.hpp"
#include "qst/types.hpp"

namespace qst {

// Positive-amplitude quantum state: psi(v) = sqrt(p(v)) = exp(-E_eff(v)/2),
// unnormalized. Consumers that need the norm divide by exp(log_partition).
struct PositiveWavefunction {
    Rbm amplitude;

    PositiveWavefunction() = default;
    explicit PositiveWavefunction(Rbm rbm) : amplitude(std::move(rbm)) {}
    PositiveWavefunction(int n_visible, int n_hidden, const RngStream& stream)
        : amplitude(Rbm::random_init(n_visible, n_hidden, stream)) {}

    int num_sites() const { return amplitude.num_visible(); }

    double log_psi(const Eigen::Ref<const Vector>& v) const {
        return -0.5 * amplitude.effective_energy(v);
    }
    double psi(const Eigen::Ref<const Vector>& v) const { return std::exp(log_psi(v)); }
    double phase(const Eigen::Ref<const Vector>&) const { return 0.0; }
    Complex psi_complex(const Eigen::Ref<const Vector>& v) const { return psi(v); }
};

// Complex state built from an amplitude RBM (lambda) and a phase RBM (mu):
// psi(v) = sqrt(p_lambda(v)) * exp(i*phi_mu(v)/2) with phi_mu = log p_mu up
// to its additive normalization constant (a global phase, dropped).
struct ComplexWavefunction {
    Rbm amplitude;
    Rbm phase_rbm;

    ComplexWavefunction() = default;
    ComplexWavefunction(Rbm lambda, Rbm mu);
    ComplexWavefunction(int n_visible, int n_hidden, const RngStream& stream);

    int num_sites() const { return amplitude.num_visible(); }

    double log_amplitude(const Eigen::Ref<const Vector>& v) const {
        return -0.5 * amplitude.effective_energy(v);
    }
    double phase(const Eigen::Ref<const Vector>& v) const {
        return -phase_rbm.effective_energy(v);
    }
    Complex psi(const Eigen::Ref<const Vector>& v) const {
        return std::polar(std::exp(log_amplitude(v)), 0.5 * phase(v));
    }
    Complex psi_complex(const Eigen::Ref<const Vector>& v) const { return psi(v); }
};

// Unnormalized amplitudes for every row of `space`, in row order.
ComplexVector amplitude_vector(const PositiveWavefunction& model, const SpinBatch& space);
ComplexVector amplitude_vector(const ComplexWavefunction& model, const SpinBatch& space);

// Amplitude of the rotated state <sigma_b| U |psi>, where U is the tensor
// product of the per-site gates named by `basis`. Only the 2^r assignments
// of the non-"Z" sites are enumerated; identity sites stay pinned to
// sigma_b. Throws when r exceeds the rotated-sites limit.
Complex rotated_psi(const PositiveWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit = kDefaultRotatedSitesLimit);
Complex rotated_psi(const ComplexWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit = kDefaultRotatedSitesLimit);

// |rotated_psi|^2; unnormalized. The amplitude partition function is
// rotation invariant, so consumers normalize by exp(log_partition) of the
// amplitude RBM.
double rotated_prob(const PositiveWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit = kDefaultRotatedSitesLimit);
double rotated_prob(const ComplexWavefunction& model, const GateRegistry& registry,
                    const Basis& basis, const Eigen::Ref<const Vector>& sigma_b,
                    int rotated_limit = kDefaultRotatedSitesLimit);

}  // namespace qst

#endif
