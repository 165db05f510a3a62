#include "qst/gradients.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "qst/detail/rotation.hpp"
#include "qst/parallel.hpp"

namespace qst {

RbmGradient RbmGradient::zeros_like(const Rbm& rbm) {
    return RbmGradient{Matrix::Zero(rbm.num_hidden(), rbm.num_visible()),
                       Vector::Zero(rbm.num_visible()), Vector::Zero(rbm.num_hidden())};
}

RbmGradient& RbmGradient::operator+=(const RbmGradient& other) {
    weights += other.weights;
    visible_bias += other.visible_bias;
    hidden_bias += other.hidden_bias;
    return *this;
}

RbmGradient& RbmGradient::operator-=(const RbmGradient& other) {
    weights -= other.weights;
    visible_bias -= other.visible_bias;
    hidden_bias -= other.hidden_bias;
    return *this;
}

RbmGradient& RbmGradient::operator*=(double s) {
    weights *= s;
    visible_bias *= s;
    hidden_bias *= s;
    return *this;
}

double RbmGradient::squared_norm() const {
    return weights.squaredNorm() + visible_bias.squaredNorm() + hidden_bias.squaredNorm();
}

bool RbmGradient::finite() const {
    return weights.allFinite() && visible_bias.allFinite() && hidden_bias.allFinite();
}

RbmGradient effective_energy_gradient(const Rbm& rbm, const Eigen::Ref<const Vector>& v) {
    if (v.size() != rbm.num_visible()) {
        throw std::invalid_argument("effective_energy_gradient: visible size mismatch");
    }
    RbmGradient g = RbmGradient::zeros_like(rbm);
    Vector p = rbm.weights * v + rbm.hidden_bias;
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = logistic(p(i));
    g.visible_bias = -v;
    g.hidden_bias = -p;
    g.weights = -p * v.transpose();
    return g;
}

namespace {

// logistic(batch W^T + c), rows computed in fixed-size parallel chunks.
Matrix hidden_prob_rows(const Rbm& rbm, const SpinBatch& batch) {
    Matrix probs(batch.rows(), rbm.num_hidden());
    parallel_for_chunks(batch.rows(), [&](std::int64_t begin, std::int64_t end) {
        const auto rows = end - begin;
        Matrix theta = batch.middleRows(begin, rows) * rbm.weights.transpose();
        theta.rowwise() += rbm.hidden_bias.transpose();
        for (std::int64_t r = 0; r < rows; ++r) {
            for (Eigen::Index i = 0; i < theta.cols(); ++i) {
                probs(begin + r, i) = logistic(theta(r, i));
            }
        }
    });
    return probs;
}

}  // namespace

RbmGradient mean_energy_gradient(const Rbm& rbm, const SpinBatch& batch) {
    if (batch.rows() == 0) throw std::invalid_argument("mean_energy_gradient: empty batch");
    if (batch.cols() != rbm.num_visible()) {
        throw std::invalid_argument("mean_energy_gradient: batch width mismatch");
    }
    const Matrix probs = hidden_prob_rows(rbm, batch);
    const double inv_n = 1.0 / double(batch.rows());
    RbmGradient g;
    g.visible_bias = -batch.colwise().sum().transpose() * inv_n;
    g.hidden_bias = -probs.colwise().sum().transpose() * inv_n;
    g.weights = -(probs.transpose() * batch) * inv_n;
    return g;
}

RbmGradient model_expectation_gradient(const Rbm& rbm, const SpinBatch& space) {
    if (space.cols() != rbm.num_visible()) {
        throw std::invalid_argument("model_expectation_gradient: space width mismatch");
    }
    const Vector energies = rbm.effective_energies(space);
    // Boltzmann weights, max-shifted for stability.
    Vector w = -energies;
    const double m = w.maxCoeff();
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(w(i) - m);
    w /= w.sum();

    const Matrix probs = hidden_prob_rows(rbm, space);
    RbmGradient g;
    g.visible_bias = -space.transpose() * w;
    g.hidden_bias = -probs.transpose() * w;
    g.weights = -probs.transpose() * w.asDiagonal() * space;
    return g;
}

GradientSet exact_kl_gradient_positive(const PositiveWavefunction& model,
                                       const SpinBatch& dataset, const SpinBatch& space) {
    RbmGradient g = mean_energy_gradient(model.amplitude, dataset);
    g -= model_expectation_gradient(model.amplitude, space);
    return GradientSet{std::move(g), std::nullopt};
}

namespace {

// Negative-phase chains for CD-k, seeded from the positive batch (truncated
// to neg_batch_size rows when that is smaller). A negative batch larger than
// the positive one cannot be seeded from it; those run as fresh
// uniform-start chains.
SpinBatch negative_chains(const Rbm& rbm, const SpinBatch& pos_batch, int k,
                          const RngStream& stream, int neg_batch_size) {
    const Eigen::Index requested =
        neg_batch_size < 0 ? pos_batch.rows() : Eigen::Index(neg_batch_size);
    if (requested < 1) throw std::invalid_argument("cd gradient: neg_batch_size must be >= 1");
    if (requested <= pos_batch.rows()) {
        SpinBatch chains = pos_batch.topRows(requested);
        gibbs_update_chains(rbm, chains, k, stream);
        return chains;
    }
    return sample(rbm, int(requested), k, stream);
}

}  // namespace

GradientSet cd_gradient_positive(const PositiveWavefunction& model, const SpinBatch& pos_batch,
                                 int k, const RngStream& stream, int neg_batch_size) {
    if (pos_batch.rows() == 0) {
        throw std::invalid_argument("cd_gradient_positive: empty positive batch");
    }
    if (k < 1) throw std::invalid_argument("cd_gradient_positive: k must be >= 1");
    RbmGradient g = mean_energy_gradient(model.amplitude, pos_batch);
    const SpinBatch neg = negative_chains(model.amplitude, pos_batch, k, stream, neg_batch_size);
    g -= mean_energy_gradient(model.amplitude, neg);
    return GradientSet{std::move(g), std::nullopt};
}

double multibasis_objective(const ComplexWavefunction& model, const GateRegistry& registry,
                            const TargetState& target, const std::vector<Basis>& bases,
                            const SpinBatch& space) {
    return kl_multibasis(model, registry, target, bases, space);
}

double multibasis_objective(const ComplexWavefunction& model, const GateRegistry& registry,
                            const TrainingDataset& dataset, const SpinBatch& space) {
    dataset.validate();
    if (!dataset.has_bases()) {
        throw std::invalid_argument("multibasis_objective: dataset carries no bases");
    }
    if (space.cols() != dataset.samples.cols()) {
        throw std::invalid_argument("multibasis_objective: space width mismatch");
    }

    // Empirical distribution per distinct basis.
    struct Counts {
        Basis basis;
        std::map<std::uint64_t, double> freq;
        double total = 0.0;
    };
    std::map<std::string, Counts> per_basis;
    for (Eigen::Index i = 0; i < dataset.samples.rows(); ++i) {
        std::string key;
        for (const auto& l : dataset.bases[i]) {
            key += l;
            key += ' ';
        }
        auto& c = per_basis[key];
        if (c.basis.empty()) c.basis = dataset.bases[i];
        c.freq[index_from_config(dataset.samples.row(i).transpose())] += 1.0;
        c.total += 1.0;
    }

    const ComplexVector psi = amplitude_vector(model, space);
    const double log_z = std::log(psi.squaredNorm());
    const int n = model.num_sites();
    double total = 0.0;
    for (auto& [key, counts] : per_basis) {
        if (counts.total <= 0.0) {
            throw std::invalid_argument("multibasis_objective: basis \"" + key + "\" has no data");
        }
        const ComplexVector rotated = apply_product_unitary(registry, counts.basis, psi);
        for (const auto& [index, count] : counts.freq) {
            const double p = count / counts.total;
            const double q_unnorm = std::norm(rotated(Eigen::Index(index)));
            total += p * (std::log(p) - std::log(q_unnorm) + log_z);
        }
        (void)n;
    }
    return total;
}

namespace {

// Data-term gradient of -log |<sigma_b|U|psi>|^2 for one measurement.
//
// With psi = exp(-E_lambda/2) exp(-i E_mu/2) and the rotated amplitude
// A = sum_sigma U(sigma_b,sigma) psi(sigma), the chain rule gives
//   d_lambda(-log|A|^2) =  Re< dE_lambda >_U
//   d_mu    (-log|A|^2) = -Im< dE_mu >_U
// where <f>_U = sum U psi f / sum U psi. Terms are rescaled by the amplitude
// at sigma_b so the sums stay in range.
struct RotatedSampleGradient {
    RbmGradient lambda;
    RbmGradient mu;
};

RotatedSampleGradient rotated_data_gradient(const ComplexWavefunction& model,
                                            const detail::RotationPlan& plan,
                                            const Eigen::Ref<const Vector>& sigma_b) {
    RotatedSampleGradient out{RbmGradient::zeros_like(model.amplitude),
                              RbmGradient::zeros_like(model.phase_rbm)};
    if (plan.rotated_count() == 0) {
        // Reference-basis sample: the data term is the plain effective-energy
        // gradient and carries no phase information at all.
        out.lambda = effective_energy_gradient(model.amplitude, sigma_b);
        return out;
    }

    const int n_v = model.num_sites();
    const int nh_l = model.amplitude.num_hidden();
    const int nh_m = model.phase_rbm.num_hidden();

    const double ref_log_amp = -0.5 * model.amplitude.effective_energy(sigma_b);
    const double ref_phase = -0.5 * model.phase_rbm.effective_energy(sigma_b);

    Complex den(0.0, 0.0);
    // dE/db = -s is the same expression for both RBMs, so one accumulator
    // serves the lambda (real part) and mu (imaginary part) visible biases.
    ComplexVector num_b = ComplexVector::Zero(n_v);
    ComplexVector num_cl = ComplexVector::Zero(nh_l);
    ComplexVector num_cm = ComplexVector::Zero(nh_m);
    ComplexMatrix num_wl = ComplexMatrix::Zero(nh_l, n_v);
    ComplexMatrix num_wm = ComplexMatrix::Zero(nh_m, n_v);

    Vector sigma(sigma_b.size());
    Vector p_l(nh_l), p_m(nh_m);
    detail::for_each_rotated_term(plan, sigma_b, sigma, [&](const Vector& s, Complex u) {
        const double log_amp = -0.5 * model.amplitude.effective_energy(s);
        const double phase = -0.5 * model.phase_rbm.effective_energy(s);
        const Complex w =
            u * std::polar(std::exp(log_amp - ref_log_amp), phase - ref_phase);
        den += w;

        p_l = model.amplitude.weights * s + model.amplitude.hidden_bias;
        for (int i = 0; i < nh_l; ++i) p_l(i) = logistic(p_l(i));
        p_m = model.phase_rbm.weights * s + model.phase_rbm.hidden_bias;
        for (int i = 0; i < nh_m; ++i) p_m(i) = logistic(p_m(i));

        // dE/db = -s, dE/dc = -p, dE/dW = -p s^T, accumulated with weight w.
        num_b -= w * s;
        num_cl -= w * p_l;
        num_cm -= w * p_m;
        num_wl -= w * (p_l * s.transpose());
        num_wm -= w * (p_m * s.transpose());
    });

    const Complex inv_den = 1.0 / den;
    out.lambda.visible_bias = (num_b * inv_den).real();
    out.lambda.hidden_bias = (num_cl * inv_den).real();
    out.lambda.weights = (num_wl * inv_den).real();
    out.mu.visible_bias = -(num_b * inv_den).imag();
    out.mu.hidden_bias = -(num_cm * inv_den).imag();
    out.mu.weights = -(num_wm * inv_den).imag();
    return out;
}

std::string basis_key(const Basis& basis) {
    std::string key;
    for (const auto& l : basis) {
        key += l;
        key += ' ';
    }
    return key;
}

}  // namespace

GradientSet exact_multibasis_gradient(const ComplexWavefunction& model,
                                      const GateRegistry& registry, const TargetState& target,
                                      const std::vector<Basis>& bases, const SpinBatch& space) {
    if (bases.empty()) throw std::invalid_argument("exact_multibasis_gradient: no bases");
    if (space.cols() != model.num_sites()) {
        throw std::invalid_argument("exact_multibasis_gradient: space width mismatch");
    }

    RbmGradient lambda = RbmGradient::zeros_like(model.amplitude);
    RbmGradient mu = RbmGradient::zeros_like(model.phase_rbm);

    // Normalization term: each basis contributes +d log Z_lambda.
    RbmGradient z_term = model_expectation_gradient(model.amplitude, space);
    z_term *= -double(bases.size());
    lambda += z_term;

    Vector sigma_b(space.cols());
    for (const Basis& basis : bases) {
        const auto plan = detail::make_rotation_plan(registry, basis, model.num_sites(),
                                                     kDefaultRotatedSitesLimit);
        const ComplexVector rotated_target =
            apply_product_unitary(registry, basis, target.amplitudes);
        for (Eigen::Index idx = 0; idx < space.rows(); ++idx) {
            const double p = std::norm(rotated_target(idx));
            if (p <= 0.0) continue;
            sigma_b = space.row(idx).transpose();
            const auto sg = rotated_data_gradient(model, plan, sigma_b);
            RbmGradient dl = sg.lambda;
            dl *= p;
            lambda += dl;
            RbmGradient dm = sg.mu;
            dm *= p;
            mu += dm;
        }
    }
    return GradientSet{std::move(lambda), std::move(mu)};
}

GradientSet multibasis_gradient_complex(const ComplexWavefunction& model,
                                        const GateRegistry& registry, const SpinBatch& samples,
                                        const std::vector<Basis>& sample_bases, int k,
                                        const RngStream& stream, int neg_batch_size) {
    const Eigen::Index n = samples.rows();
    if (n == 0) throw std::invalid_argument("multibasis_gradient_complex: empty batch");
    if (Eigen::Index(sample_bases.size()) != n) {
        throw std::invalid_argument("multibasis_gradient_complex: every sample needs a basis");
    }

    // Rotation plans are shared across samples with the same basis.
    std::map<std::string, detail::RotationPlan> plans;
    std::vector<const detail::RotationPlan*> plan_of(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::string key = basis_key(sample_bases[i]);
        auto it = plans.find(key);
        if (it == plans.end()) {
            it = plans.emplace(key, detail::make_rotation_plan(registry, sample_bases[i],
                                                               model.num_sites(),
                                                               kDefaultRotatedSitesLimit))
                     .first;
        }
        plan_of[i] = &it->second;
    }

    // Per-sample data terms in parallel, reduced in sample order.
    std::vector<RotatedSampleGradient> terms(n);
    parallel_for(n, [&](std::int64_t i) {
        terms[i] = rotated_data_gradient(model, *plan_of[i], samples.row(i).transpose());
    });

    RbmGradient lambda = RbmGradient::zeros_like(model.amplitude);
    RbmGradient mu = RbmGradient::zeros_like(model.phase_rbm);
    for (auto& t : terms) {
        lambda += t.lambda;
        mu += t.mu;
    }
    const double inv_n = 1.0 / double(n);
    lambda *= inv_n;
    mu *= inv_n;

    // Normalization term: CD-k negative phase on the amplitude RBM only.
    // Rotated-basis outcomes do not follow p_lambda even for a perfect
    // model, so seeding chains at the batch would bias the phase away from
    // the optimum; the chains run from uniform starts instead.
    const int requested = neg_batch_size < 0 ? int(n) : neg_batch_size;
    const SpinBatch neg = sample(model.amplitude, requested, k, stream);
    lambda -= mean_energy_gradient(model.amplitude, neg);

    return GradientSet{std::move(lambda), std::move(mu)};
}

void sgd_step(Rbm& params, const RbmGradient& grad, double learning_rate) {
    if (grad.weights.rows() != params.weights.rows() ||
        grad.weights.cols() != params.weights.cols() ||
        grad.visible_bias.size() != params.visible_bias.size() ||
        grad.hidden_bias.size() != params.hidden_bias.size()) {
        throw std::invalid_argument("sgd_step: gradient shape mismatch");
    }
    params.weights -= learning_rate * grad.weights;
    params.visible_bias -= learning_rate * grad.visible_bias;
    params.hidden_bias -= learning_rate * grad.hidden_bias;
}

void sgd_step(PositiveWavefunction& model, const GradientSet& grads, double learning_rate) {
    sgd_step(model.amplitude, grads.amplitude, learning_rate);
}

void sgd_step(ComplexWavefunction& model, const GradientSet& grads, double learning_rate) {
    sgd_step(model.amplitude, grads.amplitude, learning_rate);
    if (grads.phase) sgd_step(model.phase_rbm, *grads.phase, learning_rate);
}

}  // namespace qst
