#include "qst/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "qst/parallel.hpp"
#include "qst/rbm.hpp"

namespace qst {

Region::Region(std::vector<int> site_indices) : sites(std::move(site_indices)) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (sites[i] < 0) throw std::invalid_argument("Region: negative site index");
        if (i > 0 && sites[i] <= sites[i - 1]) {
            throw std::invalid_argument("Region: site indices must be strictly increasing");
        }
    }
}

void Region::check_against(Eigen::Index num_sites) const {
    if (!sites.empty() && sites.back() >= num_sites) {
        throw std::invalid_argument("Region: site index " + std::to_string(sites.back()) +
                                    " out of range for N=" + std::to_string(num_sites));
    }
}

ObservableEstimate statistics(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("statistics: empty value list");
    const auto n = std::int64_t(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= double(n);
    double ssq = 0.0;
    for (double v : values) ssq += (v - mean) * (v - mean);
    const double variance = n > 1 ? ssq / double(n - 1) : 0.0;
    return ObservableEstimate{mean, variance, std::sqrt(variance / double(n)), n};
}

namespace {

void check_batch(const SpinBatch& samples, const char* where) {
    if (samples.rows() == 0) {
        throw std::invalid_argument(std::string(where) + ": empty sample batch");
    }
}

double mz_of_row(const SpinBatch& samples, Eigen::Index i) {
    // binary 0/1 -> +-1 spins
    return 2.0 * samples.row(i).mean() - 1.0;
}

}  // namespace

ObservableEstimate sigma_z_magnetization(const SpinBatch& samples) {
    check_batch(samples, "sigma_z_magnetization");
    std::vector<double> values(samples.rows());
    for (Eigen::Index i = 0; i < samples.rows(); ++i) values[i] = mz_of_row(samples, i);
    return statistics(values);
}

ObservableEstimate abs_sigma_z_magnetization(const SpinBatch& samples) {
    check_batch(samples, "abs_sigma_z_magnetization");
    std::vector<double> values(samples.rows());
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        values[i] = std::abs(mz_of_row(samples, i));
    }
    return statistics(values);
}

namespace {

// Effective-energy bookkeeping for single-site flips: keep theta = W v + c
// and update one column on a flip instead of recomputing the matvec.
struct FlipWorkspace {
    Vector theta;
    double softplus_sum = 0.0;

    void reset(const Rbm& rbm, const Eigen::Ref<const Vector>& v) {
        theta = rbm.weights * v + rbm.hidden_bias;
        softplus_sum = 0.0;
        for (Eigen::Index i = 0; i < theta.size(); ++i) softplus_sum += softplus(theta(i));
    }

    // E_eff(v with site j flipped) - E_eff(v)
    double flip_energy_delta(const Rbm& rbm, const Eigen::Ref<const Vector>& v, int j) const {
        const double delta = 1.0 - 2.0 * v(j);
        double flipped_sum = 0.0;
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            flipped_sum += softplus(theta(i) + delta * rbm.weights(i, j));
        }
        return -rbm.visible_bias(j) * delta - (flipped_sum - softplus_sum);
    }
};

template <typename ModelT>
double sigma_x_local_impl(const ModelT& model, const Eigen::Ref<const Vector>& sigma, int site);

template <>
double sigma_x_local_impl(const PositiveWavefunction& model,
                          const Eigen::Ref<const Vector>& sigma, int site) {
    FlipWorkspace ws;
    ws.reset(model.amplitude, sigma);
    return std::exp(-0.5 * ws.flip_energy_delta(model.amplitude, sigma, site));
}

template <>
double sigma_x_local_impl(const ComplexWavefunction& model,
                          const Eigen::Ref<const Vector>& sigma, int site) {
    FlipWorkspace amp, ph;
    amp.reset(model.amplitude, sigma);
    ph.reset(model.phase_rbm, sigma);
    const double log_ratio = -0.5 * amp.flip_energy_delta(model.amplitude, sigma, site);
    // Re[ psi(flip)/psi ]; the ratio's argument is (phi(flip) - phi)/2.
    const double arg = -0.5 * ph.flip_energy_delta(model.phase_rbm, sigma, site);
    return std::exp(log_ratio) * std::cos(arg);
}

template <typename ModelT>
std::vector<double> sigma_x_values_impl(const ModelT& model, const SpinBatch& samples) {
    check_batch(samples, "sigma_x_values");
    if (samples.cols() != model.num_sites()) {
        throw std::invalid_argument("sigma_x_values: sample width mismatch");
    }
    const int n_sites = model.num_sites();
    std::vector<double> values(samples.rows());
    parallel_for(samples.rows(), [&](std::int64_t i) {
        const Vector sigma = samples.row(i).transpose();
        double sum = 0.0;
        for (int j = 0; j < n_sites; ++j) sum += sigma_x_local_impl(model, sigma, j);
        values[i] = sum / double(n_sites);
    });
    return values;
}

template <typename ModelT>
double tfim_local_energy_impl(const ModelT& model, const Eigen::Ref<const Vector>& sigma,
                              double coupling, double field) {
    const Eigen::Index n = sigma.size();
    if (n < 2) throw std::invalid_argument("tfim_local_energy: need at least two sites");
    if (n != model.num_sites()) {
        throw std::invalid_argument("tfim_local_energy: sample width mismatch");
    }
    double diag = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        diag += (2.0 * sigma(i) - 1.0) * (2.0 * sigma(i + 1) - 1.0);
    }
    double offdiag = 0.0;
    for (int j = 0; j < int(n); ++j) offdiag += sigma_x_local_impl(model, sigma, j);
    return -coupling * diag - field * offdiag;
}

template <typename ModelT>
ObservableEstimate tfim_energy_impl(const ModelT& model, const SpinBatch& samples,
                                    double coupling, double field) {
    check_batch(samples, "tfim_energy");
    std::vector<double> values(samples.rows());
    parallel_for(samples.rows(), [&](std::int64_t i) {
        values[i] = tfim_local_energy_impl(model, samples.row(i).transpose(), coupling, field);
    });
    return statistics(values);
}

template <typename ModelT>
Complex psi_log_parts(const ModelT& model, const Eigen::Ref<const Vector>& v);

// log psi split as (log amplitude, phase/2) so products/ratios of replica
// amplitudes reduce to sums and differences.
template <>
Complex psi_log_parts(const PositiveWavefunction& model, const Eigen::Ref<const Vector>& v) {
    return Complex(model.log_psi(v), 0.0);
}

template <>
Complex psi_log_parts(const ComplexWavefunction& model, const Eigen::Ref<const Vector>& v) {
    return Complex(model.log_amplitude(v), 0.5 * model.phase(v));
}

template <typename ModelT>
std::vector<double> swap_values_impl(const ModelT& model, const SpinBatch& samples,
                                     const Region& region) {
    if (samples.rows() < 2) {
        throw std::invalid_argument("swap_local_estimator: need at least two samples");
    }
    if (samples.cols() != model.num_sites()) {
        throw std::invalid_argument("swap_local_estimator: sample width mismatch");
    }
    region.check_against(samples.cols());

    const Eigen::Index pairs = samples.rows() / 2;
    std::vector<double> values(pairs);
    parallel_for(pairs, [&](std::int64_t p) {
        const Vector s1 = samples.row(p).transpose();
        const Vector s2 = samples.row(pairs + p).transpose();
        auto [s1s, s2s] = swap_regions(s1, s2, region);
        const Complex ket = psi_log_parts(model, s1) + psi_log_parts(model, s2);
        const Complex bra = psi_log_parts(model, s1s) + psi_log_parts(model, s2s);
        const Complex log_ratio = bra - ket;
        values[p] = std::exp(log_ratio.real()) * std::cos(log_ratio.imag());
    });
    return values;
}

}  // namespace

double local_estimator_sigma_x(const PositiveWavefunction& model,
                               const Eigen::Ref<const Vector>& sigma, int site) {
    if (site < 0 || site >= model.num_sites()) {
        throw std::invalid_argument("local_estimator_sigma_x: site index out of range");
    }
    return sigma_x_local_impl(model, sigma, site);
}

double local_estimator_sigma_x(const ComplexWavefunction& model,
                               const Eigen::Ref<const Vector>& sigma, int site) {
    if (site < 0 || site >= model.num_sites()) {
        throw std::invalid_argument("local_estimator_sigma_x: site index out of range");
    }
    return sigma_x_local_impl(model, sigma, site);
}

std::vector<double> sigma_x_values(const PositiveWavefunction& model, const SpinBatch& samples) {
    return sigma_x_values_impl(model, samples);
}

std::vector<double> sigma_x_values(const ComplexWavefunction& model, const SpinBatch& samples) {
    return sigma_x_values_impl(model, samples);
}

ObservableEstimate sigma_x_magnetization(const PositiveWavefunction& model,
                                         const SpinBatch& samples) {
    return statistics(sigma_x_values_impl(model, samples));
}

ObservableEstimate sigma_x_magnetization(const ComplexWavefunction& model,
                                         const SpinBatch& samples) {
    return statistics(sigma_x_values_impl(model, samples));
}

double tfim_local_energy(const PositiveWavefunction& model,
                         const Eigen::Ref<const Vector>& sigma, double coupling, double field) {
    return tfim_local_energy_impl(model, sigma, coupling, field);
}

double tfim_local_energy(const ComplexWavefunction& model,
                         const Eigen::Ref<const Vector>& sigma, double coupling, double field) {
    return tfim_local_energy_impl(model, sigma, coupling, field);
}

ObservableEstimate tfim_energy(const PositiveWavefunction& model, const SpinBatch& samples,
                               double coupling, double field) {
    return tfim_energy_impl(model, samples, coupling, field);
}

ObservableEstimate tfim_energy(const ComplexWavefunction& model, const SpinBatch& samples,
                               double coupling, double field) {
    return tfim_energy_impl(model, samples, coupling, field);
}

std::pair<Vector, Vector> swap_regions(const Eigen::Ref<const Vector>& s1,
                                       const Eigen::Ref<const Vector>& s2, const Region& region) {
    if (s1.size() != s2.size()) {
        throw std::invalid_argument("swap_regions: configurations differ in width");
    }
    region.check_against(s1.size());
    Vector out1 = s1;
    Vector out2 = s2;
    for (int site : region.sites) {
        std::swap(out1(site), out2(site));
    }
    return {std::move(out1), std::move(out2)};
}

std::vector<double> swap_local_estimator(const PositiveWavefunction& model,
                                         const SpinBatch& samples, const Region& region) {
    return swap_values_impl(model, samples, region);
}

std::vector<double> swap_local_estimator(const ComplexWavefunction& model,
                                         const SpinBatch& samples, const Region& region) {
    return swap_values_impl(model, samples, region);
}

namespace {

RenyiEstimate renyi_from_values(const std::vector<double>& values) {
    const ObservableEstimate stats = statistics(values);
    if (!(stats.mean > 0.0)) {
        throw std::runtime_error("renyi_s2: estimator collapsed (mean swap value " +
                                 std::to_string(stats.mean) + " <= 0)");
    }
    RenyiEstimate est;
    est.swap_mean = stats.mean;
    est.swap_variance = stats.variance;
    est.swap_std_error = stats.std_error;
    est.num_pairs = stats.num_samples;
    est.s2 = -std::log(stats.mean);
    est.s2_std_error = stats.std_error / stats.mean;
    return est;
}

}  // namespace

RenyiEstimate renyi_s2(const PositiveWavefunction& model, const SpinBatch& samples,
                       const Region& region) {
    return renyi_from_values(swap_local_estimator(model, samples, region));
}

RenyiEstimate renyi_s2(const ComplexWavefunction& model, const SpinBatch& samples,
                       const Region& region) {
    return renyi_from_values(swap_local_estimator(model, samples, region));
}

}  // namespace qst
