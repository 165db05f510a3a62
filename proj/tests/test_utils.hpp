#ifndef QST_TESTS_TEST_UTILS_HPP
#define QST_TESTS_TEST_UTILS_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "qst/gradients.hpp"
#include "qst/rbm.hpp"
#include "qst/rng.hpp"
#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

namespace qst::testing {

// Random parameters of O(scale) magnitude on every entry, biases included.
inline Rbm random_rbm(int n_v, int n_h, std::uint64_t seed, double scale = 1.0) {
    auto gen = RngStream(seed).generator();
    Rbm rbm = Rbm::zeros(n_v, n_h);
    for (int i = 0; i < n_h; ++i) {
        for (int j = 0; j < n_v; ++j) rbm.weights(i, j) = scale * gen.normal();
    }
    for (int j = 0; j < n_v; ++j) rbm.visible_bias(j) = scale * gen.normal();
    for (int i = 0; i < n_h; ++i) rbm.hidden_bias(i) = scale * gen.normal();
    return rbm;
}

inline PositiveWavefunction random_positive(int n_v, int n_h, std::uint64_t seed,
                                            double scale = 1.0) {
    return PositiveWavefunction(random_rbm(n_v, n_h, seed, scale));
}

inline ComplexWavefunction random_complex(int n_v, int n_h, std::uint64_t seed,
                                          double scale = 1.0) {
    return ComplexWavefunction(random_rbm(n_v, n_h, seed, scale),
                               random_rbm(n_v, n_h, seed + 17, scale));
}

// Pointers to every parameter of an RBM, in a fixed flattening order.
inline std::vector<double*> param_pointers(Rbm& rbm) {
    std::vector<double*> out;
    out.reserve(std::size_t(rbm.num_parameters()));
    for (Eigen::Index i = 0; i < rbm.weights.size(); ++i) out.push_back(rbm.weights.data() + i);
    for (Eigen::Index j = 0; j < rbm.visible_bias.size(); ++j) {
        out.push_back(rbm.visible_bias.data() + j);
    }
    for (Eigen::Index i = 0; i < rbm.hidden_bias.size(); ++i) {
        out.push_back(rbm.hidden_bias.data() + i);
    }
    return out;
}

// The matching flattening of a gradient.
inline std::vector<double> flatten(const RbmGradient& g) {
    std::vector<double> out;
    out.reserve(std::size_t(g.weights.size() + g.visible_bias.size() + g.hidden_bias.size()));
    for (Eigen::Index i = 0; i < g.weights.size(); ++i) out.push_back(g.weights.data()[i]);
    for (Eigen::Index j = 0; j < g.visible_bias.size(); ++j) {
        out.push_back(g.visible_bias.data()[j]);
    }
    for (Eigen::Index i = 0; i < g.hidden_bias.size(); ++i) {
        out.push_back(g.hidden_bias.data()[i]);
    }
    return out;
}

// Central finite differences of `objective` with respect to every parameter
// of `rbm` (which is restored afterwards).
inline std::vector<double> central_differences(Rbm& rbm,
                                               const std::function<double()>& objective,
                                               double step = 1e-5) {
    std::vector<double> out;
    for (double* p : param_pointers(rbm)) {
        const double saved = *p;
        *p = saved + step;
        const double plus = objective();
        *p = saved - step;
        const double minus = objective();
        *p = saved;
        out.push_back((plus - minus) / (2.0 * step));
    }
    return out;
}

// |a - fd| / max(|a|, floor), the comparison used for all gradient checks.
inline double gradient_rel_error(double analytic, double fd, double floor = 1e-8) {
    return std::abs(analytic - fd) / std::max(std::abs(analytic), floor);
}

// Upper chi-square quantile via the Wilson-Hilferty approximation; good to a
// few percent for df >= 3, plenty for p-value gates of 1e-3.
inline double chi_square_critical(double df, double alpha) {
    // z for upper tail alpha (alpha = 1e-3 -> 3.0902)
    double z;
    if (alpha <= 0.0011) {
        z = 3.0902;
    } else if (alpha <= 0.011) {
        z = 2.3263;
    } else {
        z = 1.6449;
    }
    const double a = 2.0 / (9.0 * df);
    const double t = 1.0 - a + z * std::sqrt(a);
    return df * t * t * t;
}

// Dense tensor-product unitary built by explicit Kronecker products, site 0
// as the most significant factor; the test-side oracle for the sparse
// rotated sums.
inline ComplexMatrix kron_unitary(const GateRegistry& registry, const Basis& basis) {
    ComplexMatrix u = ComplexMatrix::Identity(1, 1);
    for (const auto& label : basis) {
        const Eigen::Matrix2cd& g = registry.gate(label);
        ComplexMatrix next(u.rows() * 2, u.cols() * 2);
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            for (Eigen::Index c = 0; c < u.cols(); ++c) {
                next.block(2 * r, 2 * c, 2, 2) = u(r, c) * g;
            }
        }
        u = std::move(next);
    }
    return u;
}

// Unnormalized model amplitudes over a space, via per-row psi calls.
template <typename ModelT>
ComplexVector psi_table(const ModelT& model, const SpinBatch& space) {
    ComplexVector out(space.rows());
    for (Eigen::Index i = 0; i < space.rows(); ++i) {
        out(i) = model.psi_complex(space.row(i).transpose());
    }
    return out;
}

inline double total_variation(const Vector& p, const Vector& q) {
    return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace qst::testing

#endif
