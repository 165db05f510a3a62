#ifndef QST_GRADIENTS_HPP
#define QST_GRADIENTS_HPP

#include <optional>
#include <vector>

#include "qst/gates.hpp"
#include "qst/metrics.hpp"
#include "qst/rbm.hpp"
#include "qst/rng.hpp"
#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

namespace qst {

// Gradient with respect to one RBM's parameters, same shapes as the RBM.
struct RbmGradient {
    Matrix weights;
    Vector visible_bias;
    Vector hidden_bias;

    static RbmGradient zeros_like(const Rbm& rbm);

    RbmGradient& operator+=(const RbmGradient& other);
    RbmGradient& operator-=(const RbmGradient& other);
    RbmGradient& operator*=(double s);

    double squared_norm() const;
    bool finite() const;
};

// Gradient for a whole model: amplitude part always, phase part for
// complex models.
struct GradientSet {
    RbmGradient amplitude;
    std::optional<RbmGradient> phase;
};

// d E_eff / d{b, c, W} at a single visible configuration:
//   d/db_j = -v_j, d/dc_i = -logistic(theta_i), d/dW_ij = -logistic(theta_i) v_j.
RbmGradient effective_energy_gradient(const Rbm& rbm, const Eigen::Ref<const Vector>& v);

// Mean of effective_energy_gradient over the rows of a batch. The logistic
// activations are computed in parallel chunks; accumulation is a fixed-order
// matrix product.
RbmGradient mean_energy_gradient(const Rbm& rbm, const SpinBatch& batch);

// <d E_eff>_p computed exactly over an enumerated space.
RbmGradient model_expectation_gradient(const Rbm& rbm, const SpinBatch& space);

// Exact gradient of KL(P_data || p_lambda) where P_data is the empirical
// distribution of `dataset`: <dE>_data - <dE>_model, the model term by
// enumeration. For testing and small systems.
GradientSet exact_kl_gradient_positive(const PositiveWavefunction& model,
                                       const SpinBatch& dataset, const SpinBatch& space);

// CD-k gradient for a positive model. The negative chains start from the
// positive batch when neg_batch_size matches its size (or is omitted);
// otherwise neg_batch_size fresh uniform-start chains are run.
GradientSet cd_gradient_positive(const PositiveWavefunction& model, const SpinBatch& pos_batch,
                                 int k, const RngStream& stream, int neg_batch_size = -1);

// Sum over bases of KL(P_b || q_b), where P_b is the target's rotated
// distribution and q_b the normalized rotated model distribution.
double multibasis_objective(const ComplexWavefunction& model, const GateRegistry& registry,
                            const TargetState& target, const std::vector<Basis>& bases,
                            const SpinBatch& space);

// Empirical variant: P_b estimated from the dataset's per-basis counts.
// Every distinct basis in the dataset contributes one KL term.
double multibasis_objective(const ComplexWavefunction& model, const GateRegistry& registry,
                            const TrainingDataset& dataset, const SpinBatch& space);

// Exact gradient of multibasis_objective(target form) in every lambda and mu
// coordinate; enumeration-tractable sizes only.
GradientSet exact_multibasis_gradient(const ComplexWavefunction& model,
                                      const GateRegistry& registry, const TargetState& target,
                                      const std::vector<Basis>& bases, const SpinBatch& space);

// Stochastic multi-basis gradient over a batch of (sample, basis) records:
// per-sample rotated data term for lambda and mu, CD-k negative phase on the
// amplitude RBM. Samples in the reference basis contribute no mu gradient.
GradientSet multibasis_gradient_complex(const ComplexWavefunction& model,
                                        const GateRegistry& registry, const SpinBatch& samples,
                                        const std::vector<Basis>& sample_bases, int k,
                                        const RngStream& stream, int neg_batch_size = -1);

// params <- params - lr * grad
void sgd_step(Rbm& params, const RbmGradient& grad, double learning_rate);
void sgd_step(PositiveWavefunction& model, const GradientSet& grads, double learning_rate);
void sgd_step(ComplexWavefunction& model, const GradientSet& grads, double learning_rate);

}  // namespace qst

#endif
