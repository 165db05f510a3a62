#include "qst/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qst::ref {

double effective_energy(const Rbm& rbm, const Eigen::Ref<const Vector>& v) {
    double bias_term = 0.0;
    for (int j = 0; j < rbm.num_visible(); ++j) bias_term += rbm.visible_bias(j) * v(j);
    double hidden_term = 0.0;
    for (int i = 0; i < rbm.num_hidden(); ++i) {
        double theta = rbm.hidden_bias(i);
        for (int j = 0; j < rbm.num_visible(); ++j) theta += rbm.weights(i, j) * v(j);
        hidden_term += softplus(theta);
    }
    return -bias_term - hidden_term;
}

Vector effective_energies(const Rbm& rbm, const SpinBatch& batch) {
    Vector out(batch.rows());
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
        out(r) = effective_energy(rbm, batch.row(r).transpose());
    }
    return out;
}

double log_partition(const Rbm& rbm, int enumeration_limit) {
    const int n = rbm.num_visible();
    if (n > enumeration_limit) {
        throw std::runtime_error("ref::log_partition: enumeration limit exceeded");
    }
    const std::int64_t total = std::int64_t{1} << n;
    Vector v(n);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::int64_t idx = 0; idx < total; ++idx) {
        config_from_index(std::uint64_t(idx), n, v);
        max_log = std::max(max_log, -effective_energy(rbm, v));
    }
    double sum = 0.0;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        config_from_index(std::uint64_t(idx), n, v);
        sum += std::exp(-effective_energy(rbm, v) - max_log);
    }
    return max_log + std::log(sum);
}

SpinBatch sample(const Rbm& rbm, int num_samples, int k, const RngStream& stream,
                 const std::optional<SpinBatch>& initial) {
    if (num_samples < 1 || k < 1) {
        throw std::invalid_argument("ref::sample: num_samples and k must be >= 1");
    }
    const int n = rbm.num_visible();
    SpinBatch out(num_samples, n);
    for (int i = 0; i < num_samples; ++i) {
        auto gen = stream.child(std::uint64_t(i)).generator();
        Vector v(n);
        if (initial) {
            v = initial->row(i).transpose();
        } else {
            for (int j = 0; j < n; ++j) v(j) = gen.bernoulli(0.5) ? 1.0 : 0.0;
        }
        Vector h(rbm.num_hidden());
        for (int step = 0; step < k; ++step) {
            h.noalias() = rbm.weights * v + rbm.hidden_bias;
            for (Eigen::Index a = 0; a < h.size(); ++a) {
                h(a) = gen.bernoulli(logistic(h(a))) ? 1.0 : 0.0;
            }
            v.noalias() = rbm.weights.transpose() * h + rbm.visible_bias;
            for (Eigen::Index b = 0; b < v.size(); ++b) {
                v(b) = gen.bernoulli(logistic(v(b))) ? 1.0 : 0.0;
            }
        }
        out.row(i) = v.transpose();
    }
    return out;
}

RbmGradient mean_energy_gradient(const Rbm& rbm, const SpinBatch& batch) {
    RbmGradient acc = RbmGradient::zeros_like(rbm);
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
        const RbmGradient g = effective_energy_gradient(rbm, batch.row(r).transpose());
        acc += g;
    }
    acc *= 1.0 / double(batch.rows());
    return acc;
}

namespace {

template <typename ModelT>
std::vector<double> sigma_x_values_impl(const ModelT& model, const SpinBatch& samples) {
    std::vector<double> out(samples.rows());
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        Vector sigma = samples.row(r).transpose();
        const Complex denom = model.psi_complex(sigma);
        Complex sum(0.0, 0.0);
        for (int j = 0; j < model.num_sites(); ++j) {
            Vector flipped = sigma;
            flipped(j) = 1.0 - flipped(j);
            sum += model.psi_complex(flipped) / denom;
        }
        out[std::size_t(r)] = sum.real() / double(model.num_sites());
    }
    return out;
}

template <typename ModelT>
std::vector<double> swap_values_impl(const ModelT& model, const SpinBatch& samples,
                                     const Region& region) {
    const Eigen::Index pairs = samples.rows() / 2;
    std::vector<double> out(pairs);
    for (Eigen::Index p = 0; p < pairs; ++p) {
        const Vector s1 = samples.row(p).transpose();
        const Vector s2 = samples.row(pairs + p).transpose();
        auto [s1s, s2s] = swap_regions(s1, s2, region);
        const Complex ket = model.psi_complex(s1) * model.psi_complex(s2);
        const Complex bra = model.psi_complex(s1s) * model.psi_complex(s2s);
        out[std::size_t(p)] = (bra / ket).real();
    }
    return out;
}

}  // namespace

std::vector<double> sigma_x_values(const PositiveWavefunction& model, const SpinBatch& samples) {
    return sigma_x_values_impl(model, samples);
}

std::vector<double> sigma_x_values(const ComplexWavefunction& model, const SpinBatch& samples) {
    return sigma_x_values_impl(model, samples);
}

std::vector<double> swap_local_estimator(const PositiveWavefunction& model,
                                         const SpinBatch& samples, const Region& region) {
    return swap_values_impl(model, samples, region);
}

std::vector<double> swap_local_estimator(const ComplexWavefunction& model,
                                         const SpinBatch& samples, const Region& region) {
    return swap_values_impl(model, samples, region);
}

}  // namespace qst::ref
