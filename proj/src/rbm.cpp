#include "qst/rbm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qst/parallel.hpp"

namespace qst {

double softplus(double x) {
    // log(1 + e^x) without overflow: for large x the result is x itself.
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Rbm::Rbm(Matrix w, Vector vb, Vector hb)
    : weights(std::move(w)), visible_bias(std::move(vb)), hidden_bias(std::move(hb)) {
    if (visible_bias.size() < 1 || hidden_bias.size() < 1) {
        throw std::invalid_argument("Rbm: need at least one visible and one hidden unit");
    }
    if (weights.rows() != hidden_bias.size() || weights.cols() != visible_bias.size()) {
        throw std::invalid_argument("Rbm: weight matrix must be n_hidden x n_visible");
    }
}

Rbm Rbm::zeros(int n_visible, int n_hidden) {
    return Rbm(Matrix::Zero(n_hidden, n_visible), Vector::Zero(n_visible),
               Vector::Zero(n_hidden));
}

Rbm Rbm::random_init(int n_visible, int n_hidden, const RngStream& stream) {
    Rbm rbm = zeros(n_visible, n_hidden);
    auto gen = stream.generator();
    const double sigma = 1.0 / std::sqrt(double(n_visible) * double(n_hidden));
    for (int i = 0; i < n_hidden; ++i) {
        for (int j = 0; j < n_visible; ++j) {
            rbm.weights(i, j) = sigma * gen.normal();
        }
    }
    return rbm;
}

bool Rbm::finite() const {
    return weights.allFinite() && visible_bias.allFinite() && hidden_bias.allFinite();
}

namespace {

void check_visible(const Rbm& rbm, Eigen::Index n, const char* where) {
    if (n != rbm.num_visible()) {
        throw std::invalid_argument(std::string(where) + ": visible size " +
                                    std::to_string(n) + " does not match n_v=" +
                                    std::to_string(rbm.num_visible()));
    }
}

void check_hidden(const Rbm& rbm, Eigen::Index n, const char* where) {
    if (n != rbm.num_hidden()) {
        throw std::invalid_argument(std::string(where) + ": hidden size " +
                                    std::to_string(n) + " does not match n_h=" +
                                    std::to_string(rbm.num_hidden()));
    }
}

}  // namespace

double Rbm::energy(const Eigen::Ref<const Vector>& v,
                   const Eigen::Ref<const Vector>& h) const {
    check_visible(*this, v.size(), "energy");
    check_hidden(*this, h.size(), "energy");
    return -visible_bias.dot(v) - hidden_bias.dot(h) - h.dot(weights * v);
}

double Rbm::effective_energy(const Eigen::Ref<const Vector>& v) const {
    check_visible(*this, v.size(), "effective_energy");
    const Vector theta = weights * v + hidden_bias;
    double hidden_term = 0.0;
    for (Eigen::Index i = 0; i < theta.size(); ++i) hidden_term += softplus(theta(i));
    return -visible_bias.dot(v) - hidden_term;
}

Vector Rbm::effective_energies(const SpinBatch& batch) const {
    check_visible(*this, batch.cols(), "effective_energies");
    Vector out(batch.rows());
    parallel_for_chunks(batch.rows(), [&](std::int64_t begin, std::int64_t end) {
        const auto rows = end - begin;
        Matrix theta = batch.middleRows(begin, rows) * weights.transpose();
        theta.rowwise() += hidden_bias.transpose();
        for (std::int64_t r = 0; r < rows; ++r) {
            double hidden_term = 0.0;
            for (Eigen::Index i = 0; i < theta.cols(); ++i) {
                hidden_term += softplus(theta(r, i));
            }
            out(begin + r) = -visible_bias.dot(batch.row(begin + r)) - hidden_term;
        }
    });
    return out;
}

Vector Rbm::conditional_hidden_probs(const Eigen::Ref<const Vector>& v) const {
    check_visible(*this, v.size(), "conditional_hidden_probs");
    Vector theta = weights * v + hidden_bias;
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = logistic(theta(i));
    return theta;
}

Vector Rbm::conditional_visible_probs(const Eigen::Ref<const Vector>& h) const {
    check_hidden(*this, h.size(), "conditional_visible_probs");
    Vector eta = weights.transpose() * h + visible_bias;
    for (Eigen::Index j = 0; j < eta.size(); ++j) eta(j) = logistic(eta(j));
    return eta;
}

double log_partition(const Rbm& rbm, int enumeration_limit) {
    const int n = rbm.num_visible();
    if (n > enumeration_limit) {
        throw std::runtime_error("log_partition: intractable enumeration, n_v=" +
                                 std::to_string(n) + " exceeds limit " +
                                 std::to_string(enumeration_limit));
    }
    const std::int64_t total = std::int64_t{1} << n;

    // Per-chunk (max, sum of exp(x - max)) pairs merged in chunk order.
    struct LseAcc {
        double max;
        double sum;
    };
    const LseAcc init{-std::numeric_limits<double>::infinity(), 0.0};
    const LseAcc acc = parallel_reduce_chunks(
        total, init,
        [&](std::int64_t begin, std::int64_t end) {
            Vector v(n);
            LseAcc part{-std::numeric_limits<double>::infinity(), 0.0};
            for (std::int64_t idx = begin; idx < end; ++idx) {
                config_from_index(std::uint64_t(idx), n, v);
                const double x = -rbm.effective_energy(v);
                if (x <= part.max) {
                    part.sum += std::exp(x - part.max);
                } else {
                    part.sum = part.sum * std::exp(part.max - x) + 1.0;
                    part.max = x;
                }
            }
            return part;
        },
        [](LseAcc a, LseAcc b) {
            if (b.sum == 0.0) return a;
            if (a.sum == 0.0) return b;
            if (a.max >= b.max) {
                a.sum += b.sum * std::exp(b.max - a.max);
                return a;
            }
            b.sum += a.sum * std::exp(a.max - b.max);
            return b;
        });
    return acc.max + std::log(acc.sum);
}

SpinBatch enumerate_configurations(int n, int enumeration_limit) {
    if (n < 1) throw std::invalid_argument("enumerate_configurations: n must be >= 1");
    if (n > enumeration_limit) {
        throw std::runtime_error("enumerate_configurations: n=" + std::to_string(n) +
                                 " exceeds enumeration limit " +
                                 std::to_string(enumeration_limit));
    }
    const std::int64_t total = std::int64_t{1} << n;
    SpinBatch space(total, n);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        auto row = space.row(idx);
        for (int j = 0; j < n; ++j) {
            row(j) = double((idx >> (n - 1 - j)) & 1);
        }
    }
    return space;
}

void config_from_index(std::uint64_t index, int n,
                       Eigen::Ref<Vector, 0, Eigen::InnerStride<>> out) {
    for (int j = 0; j < n; ++j) {
        out(j) = double((index >> (n - 1 - j)) & 1);
    }
}

std::uint64_t index_from_config(const Eigen::Ref<const Vector>& v) {
    std::uint64_t idx = 0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        idx = (idx << 1) | (v(j) != 0.0 ? 1u : 0u);
    }
    return idx;
}

namespace {

// One sweep on a single chain, reusing caller-provided buffers.
void gibbs_sweep(const Rbm& rbm, Vector& v, Vector& h, Xoshiro256& gen) {
    h.noalias() = rbm.weights * v + rbm.hidden_bias;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        h(i) = gen.bernoulli(logistic(h(i))) ? 1.0 : 0.0;
    }
    v.noalias() = rbm.weights.transpose() * h + rbm.visible_bias;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        v(j) = gen.bernoulli(logistic(v(j))) ? 1.0 : 0.0;
    }
}

}  // namespace

Vector block_gibbs_step(const Rbm& rbm, const Eigen::Ref<const Vector>& v, Xoshiro256& gen) {
    check_visible(rbm, v.size(), "block_gibbs_step");
    Vector state = v;
    Vector h(rbm.num_hidden());
    gibbs_sweep(rbm, state, h, gen);
    return state;
}

void gibbs_update_chains(const Rbm& rbm, SpinBatch& chains, int k, const RngStream& stream) {
    check_visible(rbm, chains.cols(), "gibbs_update_chains");
    if (k < 1) throw std::invalid_argument("gibbs_update_chains: k must be >= 1");
    parallel_for(chains.rows(), [&](std::int64_t i) {
        auto gen = stream.child(std::uint64_t(i)).generator();
        Vector v = chains.row(i).transpose();
        Vector h(rbm.num_hidden());
        for (int step = 0; step < k; ++step) gibbs_sweep(rbm, v, h, gen);
        chains.row(i) = v.transpose();
    });
}

SpinBatch sample(const Rbm& rbm, int num_samples, int k, const RngStream& stream,
                 const std::optional<SpinBatch>& initial) {
    if (num_samples < 1) throw std::invalid_argument("sample: num_samples must be >= 1");
    if (k < 1) throw std::invalid_argument("sample: k must be >= 1");
    const int n = rbm.num_visible();
    SpinBatch chains(num_samples, n);
    if (initial) {
        if (initial->rows() != num_samples || initial->cols() != n) {
            throw std::invalid_argument("sample: initial batch has wrong shape");
        }
        chains = *initial;
        gibbs_update_chains(rbm, chains, k, stream);
        return chains;
    }
    // Uniform random start; the start state and the sweeps share chain i's
    // substream so the whole chain depends only on (stream, i).
    parallel_for(num_samples, [&](std::int64_t i) {
        auto gen = stream.child(std::uint64_t(i)).generator();
        Vector v(n);
        for (int j = 0; j < n; ++j) v(j) = gen.bernoulli(0.5) ? 1.0 : 0.0;
        Vector h(rbm.num_hidden());
        for (int step = 0; step < k; ++step) gibbs_sweep(rbm, v, h, gen);
        chains.row(i) = v.transpose();
    });
    return chains;
}

}  // namespace qst
