#ifndef QST_OBSERVABLES_HPP
#define QST_OBSERVABLES_HPP

#include <utility>
#include <vector>

#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

namespace qst {

// Monte Carlo estimate: sample mean, unbiased (n-1) variance, and the
// standard error of the mean.
struct ObservableEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::int64_t num_samples = 0;
};

// Strictly increasing site indices defining a subregion.
struct Region {
    std::vector<int> sites;

    Region() = default;
    explicit Region(std::vector<int> site_indices);

    int size() const { return static_cast<int>(sites.size()); }
    void check_against(Eigen::Index num_sites) const;
};

ObservableEstimate statistics(const std::vector<double>& values);

// Diagonal magnetization (1/N) sum_j (2 sigma_j - 1), per sample.
ObservableEstimate sigma_z_magnetization(const SpinBatch& samples);
// Same with the absolute value taken per sample.
ObservableEstimate abs_sigma_z_magnetization(const SpinBatch& samples);

// psi(sigma with site j flipped) / psi(sigma), the local estimator of
// sigma^x_j. Real part for complex models; the amplitudes are unnormalized,
// the ratio is normalization-free.
double local_estimator_sigma_x(const PositiveWavefunction& model,
                               const Eigen::Ref<const Vector>& sigma, int site);
double local_estimator_sigma_x(const ComplexWavefunction& model,
                               const Eigen::Ref<const Vector>& sigma, int site);

// Per-sample transverse magnetization (1/N) sum_j sigma^x_j local estimator.
std::vector<double> sigma_x_values(const PositiveWavefunction& model, const SpinBatch& samples);
std::vector<double> sigma_x_values(const ComplexWavefunction& model, const SpinBatch& samples);
ObservableEstimate sigma_x_magnetization(const PositiveWavefunction& model,
                                         const SpinBatch& samples);
ObservableEstimate sigma_x_magnetization(const ComplexWavefunction& model,
                                         const SpinBatch& samples);

// Local energy of the open-boundary transverse-field Ising chain:
// -J sum_i s_i s_{i+1} - h sum_j sigma^x_j estimator, s = 2 sigma - 1.
double tfim_local_energy(const PositiveWavefunction& model,
                         const Eigen::Ref<const Vector>& sigma, double coupling, double field);
double tfim_local_energy(const ComplexWavefunction& model,
                         const Eigen::Ref<const Vector>& sigma, double coupling, double field);
ObservableEstimate tfim_energy(const PositiveWavefunction& model, const SpinBatch& samples,
                               double coupling, double field);
ObservableEstimate tfim_energy(const ComplexWavefunction& model, const SpinBatch& samples,
                               double coupling, double field);

// Exchanges the entries at the region's sites between two configurations.
std::pair<Vector, Vector> swap_regions(const Eigen::Ref<const Vector>& s1,
                                       const Eigen::Ref<const Vector>& s2, const Region& region);

// Swap-operator local estimator: the batch is split into two halves of
// floor(n/2) replica pairs; each pair (s1, s2) contributes
// Re[ psi(s1') psi(s2') / (psi(s1) psi(s2)) ] with the region swapped.
std::vector<double> swap_local_estimator(const PositiveWavefunction& model,
                                         const SpinBatch& samples, const Region& region);
std::vector<double> swap_local_estimator(const ComplexWavefunction& model,
                                         const SpinBatch& samples, const Region& region);

// Second Renyi entropy from the swap estimator: S2 = -ln<Swap>, with the
// error bar propagated to first order (std_error / mean).
struct RenyiEstimate {
    double swap_mean = 0.0;
    double swap_variance = 0.0;
    double swap_std_error = 0.0;
    std::int64_t num_pairs = 0;
    double s2 = 0.0;
    double s2_std_error = 0.0;
};

RenyiEstimate renyi_s2(const PositiveWavefunction& model, const SpinBatch& samples,
                       const Region& region);
RenyiEstimate renyi_s2(const ComplexWavefunction& model, const SpinBatch& samples,
                       const Region& region);

}  // namespace qst

#endif
