#ifndef QST_RBM_HPP
#define QST_RBM_HPP

#include <cstdint>
#include <optional>

#include "qst/rng.hpp"
#include "qst/types.hpp"

namespace qst {

// Numerically stable helpers; safe for arguments of any magnitude.
double softplus(double x);
double logistic(double x);

// Binary-binary restricted Boltzmann machine. Weights are n_h x n_v, so
// row i of `weights` couples hidden unit i to every visible unit.
struct Rbm {
    Matrix weights;
    Vector visible_bias;
    Vector hidden_bias;

    Rbm() = default;
    Rbm(Matrix w, Vector vb, Vector hb);

    int num_visible() const { return static_cast<int>(visible_bias.size()); }
    int num_hidden() const { return static_cast<int>(hidden_bias.size()); }
    int num_parameters() const {
        return num_visible() * num_hidden() + num_visible() + num_hidden();
    }

    static Rbm zeros(int n_visible, int n_hidden);
    // Gaussian weights with standard deviation 1/sqrt(n_v*n_h), zero biases.
    static Rbm random_init(int n_visible, int n_hidden, const RngStream& stream);

    bool finite() const;

    // Joint energy E(v,h) = -b.v - c.h - h.W.v
    double energy(const Eigen::Ref<const Vector>& v,
                  const Eigen::Ref<const Vector>& h) const;

    // Effective (visible) energy after tracing out the hidden layer:
    // E_eff(v) = -b.v - sum_i softplus(c_i + W_i.v)
    double effective_energy(const Eigen::Ref<const Vector>& v) const;

    // E_eff for every row of a batch; parallel over fixed-size row chunks.
    Vector effective_energies(const SpinBatch& batch) const;

    // p(h_i = 1 | v) = logistic(c_i + W_i.v)
    Vector conditional_hidden_probs(const Eigen::Ref<const Vector>& v) const;
    // p(v_j = 1 | h) = logistic(b_j + (W^T h)_j)
    Vector conditional_visible_probs(const Eigen::Ref<const Vector>& h) const;
};

// log Z by exact enumeration of all 2^n_v visible configurations
// (log-sum-exp stabilized). Throws when n_v exceeds the limit.
double log_partition(const Rbm& rbm, int enumeration_limit = kDefaultEnumerationLimit);

// All 2^n configurations in canonical order: site 0 is the most significant
// bit, so row r of the result encodes the integer r.
SpinBatch enumerate_configurations(int n, int enumeration_limit = kDefaultEnumerationLimit);

// Canonical index <-> configuration, matching enumerate_configurations.
void config_from_index(std::uint64_t index, int n,
                       Eigen::Ref<Vector, 0, Eigen::InnerStride<>> out);
std::uint64_t index_from_config(const Eigen::Ref<const Vector>& v);

// One block-Gibbs sweep: h ~ p(h|v), then v' ~ p(v|h). Units are drawn in
// index order, so the trajectory is a pure function of (rbm, v, generator).
Vector block_gibbs_step(const Rbm& rbm, const Eigen::Ref<const Vector>& v, Xoshiro256& gen);

// num_samples independent chains, k sweeps each; chain i draws from
// stream.child(i), so the batch is identical for any thread count.
// Chains start from `initial` rows when given, else uniform random states.
SpinBatch sample(const Rbm& rbm, int num_samples, int k, const RngStream& stream,
                 const std::optional<SpinBatch>& initial = std::nullopt);

// In-place variant used by the training loops: each row of `chains` is
// advanced k sweeps with its own substream.
void gibbs_update_chains(const Rbm& rbm, SpinBatch& chains, int k, const RngStream& stream);

}  // namespace qst

#endif
