#include "qst/exact.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qst/rbm.hpp"

namespace qst {

void TfimSpec::validate() const {
    if (num_sites < 2) throw std::invalid_argument("TfimSpec: need at least two sites");
}

namespace {

void check_dense_limit(int n) {
    if (n > kDenseDiagonalizationLimit) {
        throw std::runtime_error("dense diagonalization limited to N <= " +
                                 std::to_string(kDenseDiagonalizationLimit) + ", got N=" +
                                 std::to_string(n));
    }
}

// Site j lives in bit (N-1-j) of the canonical index.
inline int site_bit(std::uint64_t index, int n, int j) {
    return int((index >> (n - 1 - j)) & 1);
}

double diagonal_coupling(const TfimSpec& spec, std::uint64_t index) {
    double sum = 0.0;
    for (int j = 0; j + 1 < spec.num_sites; ++j) {
        const double s0 = 2.0 * site_bit(index, spec.num_sites, j) - 1.0;
        const double s1 = 2.0 * site_bit(index, spec.num_sites, j + 1) - 1.0;
        sum += s0 * s1;
    }
    return -spec.coupling * sum;
}

}  // namespace

Matrix tfim_hamiltonian(const TfimSpec& spec) {
    spec.validate();
    check_dense_limit(spec.num_sites);
    const int n = spec.num_sites;
    const Eigen::Index dim = Eigen::Index(1) << n;
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        h(x, x) = diagonal_coupling(spec, std::uint64_t(x));
        for (int j = 0; j < n; ++j) {
            const Eigen::Index y = x ^ (Eigen::Index(1) << (n - 1 - j));
            h(x, y) -= spec.field;
        }
    }
    return h;
}

ComplexVector apply_tfim(const TfimSpec& spec, const ComplexVector& psi) {
    spec.validate();
    const int n = spec.num_sites;
    if (psi.size() != (Eigen::Index(1) << n)) {
        throw std::invalid_argument("apply_tfim: state length != 2^N");
    }
    ComplexVector out(psi.size());
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
        Complex acc = diagonal_coupling(spec, std::uint64_t(x)) * psi(x);
        for (int j = 0; j < n; ++j) {
            acc -= spec.field * psi(x ^ (Eigen::Index(1) << (n - 1 - j)));
        }
        out(x) = acc;
    }
    return out;
}

std::pair<double, TargetState> tfim_ground_state(const TfimSpec& spec) {
    const Matrix h = tfim_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("tfim_ground_state: eigensolver failed");
    }
    const double energy = solver.eigenvalues()(0);
    Vector ground = solver.eigenvectors().col(0);

    // Fix the overall sign: largest-magnitude amplitude positive.
    Eigen::Index argmax = 0;
    ground.cwiseAbs().maxCoeff(&argmax);
    if (ground(argmax) < 0.0) ground = -ground;
    ground /= ground.norm();

    ComplexVector amps(ground.size());
    for (Eigen::Index i = 0; i < ground.size(); ++i) amps(i) = ground(i);
    return {energy, TargetState(std::move(amps))};
}

SpinBatch born_sample(const TargetState& state, int num_samples, const RngStream& stream) {
    if (num_samples < 1) throw std::invalid_argument("born_sample: num_samples must be >= 1");
    const double norm = state.norm_sq();
    if (std::abs(norm - 1.0) > 1e-8) {
        throw std::invalid_argument("born_sample: state is not normalized");
    }
    const int n = state.num_sites();
    const Eigen::Index dim = state.amplitudes.size();

    std::vector<double> cumulative(static_cast<std::size_t>(dim));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        acc += std::norm(state.amplitudes(i));
        cumulative[std::size_t(i)] = acc;
    }
    cumulative.back() = 1.0;  // guard against rounding at the top

    auto gen = stream.generator();
    SpinBatch samples(num_samples, n);
    for (int s = 0; s < num_samples; ++s) {
        const double u = gen.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto idx = std::uint64_t(it - cumulative.begin());
        for (int j = 0; j < n; ++j) samples(s, j) = double((idx >> (n - 1 - j)) & 1);
    }
    return samples;
}

TargetState random_complex_state(int num_qubits, const RngStream& stream) {
    if (num_qubits < 1 || num_qubits > kDenseDiagonalizationLimit) {
        throw std::invalid_argument("random_complex_state: unsupported qubit count");
    }
    auto gen = stream.generator();
    const Eigen::Index dim = Eigen::Index(1) << num_qubits;
    ComplexVector amps(dim);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double magnitude = gen.uniform();
        const double phase = two_pi * gen.uniform();
        amps(i) = std::polar(magnitude, phase);
    }
    amps /= amps.norm();
    return TargetState(std::move(amps));
}

TrainingDataset rotated_measurement_dataset(const TargetState& state,
                                            const GateRegistry& registry,
                                            const std::vector<Basis>& bases,
                                            int samples_per_basis, const RngStream& stream) {
    if (bases.empty()) throw std::invalid_argument("rotated_measurement_dataset: no bases");
    if (samples_per_basis < 1) {
        throw std::invalid_argument("rotated_measurement_dataset: samples_per_basis must be >= 1");
    }
    const int n = state.num_sites();
    for (const auto& b : bases) {
        if (int(b.size()) != n) {
            throw std::invalid_argument("rotated_measurement_dataset: basis width mismatch");
        }
        validate_basis(registry, b);
    }

    TrainingDataset dataset;
    dataset.samples.resize(Eigen::Index(bases.size()) * samples_per_basis, n);
    dataset.bases.reserve(dataset.samples.rows());
    Eigen::Index row = 0;
    for (std::size_t bi = 0; bi < bases.size(); ++bi) {
        ComplexVector rotated = apply_product_unitary(registry, bases[bi], state.amplitudes);
        rotated /= rotated.norm();  // unitary up to rounding
        const TargetState rotated_state(std::move(rotated));
        const SpinBatch draws =
            born_sample(rotated_state, samples_per_basis, stream.child(std::uint64_t(bi)));
        dataset.samples.middleRows(row, samples_per_basis) = draws;
        for (int s = 0; s < samples_per_basis; ++s) dataset.bases.push_back(bases[bi]);
        row += samples_per_basis;
    }
    return dataset;
}

double exact_observable(const TargetState& state, ExactObservable kind) {
    const int n = state.num_sites();
    const Eigen::Index dim = state.amplitudes.size();
    double value = 0.0;
    switch (kind) {
        case ExactObservable::SigmaZ:
        case ExactObservable::AbsSigmaZ: {
            for (Eigen::Index x = 0; x < dim; ++x) {
                double mz = 0.0;
                for (int j = 0; j < n; ++j) {
                    mz += 2.0 * site_bit(std::uint64_t(x), n, j) - 1.0;
                }
                mz /= double(n);
                if (kind == ExactObservable::AbsSigmaZ) mz = std::abs(mz);
                value += std::norm(state.amplitudes(x)) * mz;
            }
            return value;
        }
        case ExactObservable::SigmaX: {
            for (Eigen::Index x = 0; x < dim; ++x) {
                for (int j = 0; j < n; ++j) {
                    const Eigen::Index y = x ^ (Eigen::Index(1) << (n - 1 - j));
                    value += std::real(std::conj(state.amplitudes(x)) * state.amplitudes(y));
                }
            }
            return value / double(n);
        }
    }
    throw std::logic_error("exact_observable: unknown kind");
}

double exact_tfim_energy(const TargetState& state, const TfimSpec& spec) {
    if (state.num_sites() != spec.num_sites) {
        throw std::invalid_argument("exact_tfim_energy: state size does not match spec");
    }
    const ComplexVector h_psi = apply_tfim(spec, state.amplitudes);
    return std::real(state.amplitudes.dot(h_psi));
}

double exact_renyi_s2(const TargetState& state, const Region& region) {
    const int n = state.num_sites();
    region.check_against(n);
    const int m = region.size();
    if (m == 0 || m == n) return 0.0;  // empty or full region of a pure state

    std::vector<int> complement;
    complement.reserve(n - m);
    {
        std::size_t r = 0;
        for (int j = 0; j < n; ++j) {
            if (r < region.sites.size() && region.sites[r] == j) {
                ++r;
            } else {
                complement.push_back(j);
            }
        }
    }

    auto spread = [&](std::uint64_t bits, const std::vector<int>& sites) {
        std::uint64_t index = 0;
        for (std::size_t t = 0; t < sites.size(); ++t) {
            index |= ((bits >> t) & 1) << (n - 1 - sites[t]);
        }
        return index;
    };

    const Eigen::Index dim_a = Eigen::Index(1) << m;
    const Eigen::Index dim_c = Eigen::Index(1) << (n - m);
    ComplexMatrix rho = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index a = 0; a < dim_a; ++a) {
        const std::uint64_t a_part = spread(std::uint64_t(a), region.sites);
        for (Eigen::Index ap = 0; ap < dim_a; ++ap) {
            const std::uint64_t ap_part = spread(std::uint64_t(ap), region.sites);
            Complex acc(0.0, 0.0);
            for (Eigen::Index c = 0; c < dim_c; ++c) {
                const std::uint64_t c_part = spread(std::uint64_t(c), complement);
                acc += state.amplitudes(Eigen::Index(a_part | c_part)) *
                       std::conj(state.amplitudes(Eigen::Index(ap_part | c_part)));
            }
            rho(a, ap) = acc;
        }
    }
    const double purity = rho.squaredNorm();  // sum |rho_ij|^2 = Tr(rho^2) for Hermitian rho
    return -std::log(purity);
}

}  // namespace qst
