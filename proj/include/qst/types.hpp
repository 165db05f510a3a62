#ifndef QST_TYPES_HPP
#define QST_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qst {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// A batch of spin configurations, one configuration per row.
// Entries are exactly 0.0 (down) or 1.0 (up).
using SpinBatch = Matrix;

// Per-site measurement-basis labels, one gate label per site ("Z","X","Y",...).
using Basis = std::vector<std::string>;

// Largest number of visible units for which partition-dependent quantities
// are enumerated exactly. Above this the operations refuse to run.
inline constexpr int kDefaultEnumerationLimit = 20;

// Largest number of simultaneously rotated (non-"Z") sites in a basis.
inline constexpr int kDefaultRotatedSitesLimit = 16;

inline bool is_binary(const Eigen::Ref<const Vector>& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (v(j) != 0.0 && v(j) != 1.0) return false;
    }
    return true;
}

inline bool is_binary_batch(const Eigen::Ref<const Matrix>& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (!is_binary(m.row(i).transpose())) return false;
    }
    return true;
}

// Measurement records used for training: one configuration per row, plus an
// optional per-sample basis (empty = every sample in the reference basis).
struct TrainingDataset {
    SpinBatch samples;
    std::vector<Basis> bases;

    bool has_bases() const { return !bases.empty(); }

    void validate() const {
        if (!bases.empty() && Eigen::Index(bases.size()) != samples.rows()) {
            throw std::invalid_argument(
                "TrainingDataset: basis count does not match sample count");
        }
        for (const auto& b : bases) {
            if (Eigen::Index(b.size()) != samples.cols()) {
                throw std::invalid_argument(
                    "TrainingDataset: basis length does not match sample width");
            }
        }
    }
};

}  // namespace qst

#endif
