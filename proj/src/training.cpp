#include "qst/training.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

namespace qst {

void TrainingConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("TrainingConfig: epochs must be >= 0");
    if (pos_batch_size < 1 || neg_batch_size < 1) {
        throw std::invalid_argument("TrainingConfig: batch sizes must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("TrainingConfig: learning_rate must be > 0");
    }
    if (k < 1) throw std::invalid_argument("TrainingConfig: k must be >= 1");
    if (log_every < 1) throw std::invalid_argument("TrainingConfig: log_every must be >= 1");
}

template <typename ModelT>
void MetricEvaluator<ModelT>::print_record(const MetricRecord& record) {
    std::cout << "Epoch: " << record.epoch;
    for (const auto& [name, value] : record.values) {
        std::cout << "\t" << name << " = " << value;
    }
    std::cout << std::endl;
}

template class MetricEvaluator<PositiveWavefunction>;
template class MetricEvaluator<ComplexWavefunction>;

namespace {

// Stream salts for the independent random choices of a training run.
constexpr std::uint64_t kShuffleSalt = 0x5u;
constexpr std::uint64_t kUpdateSalt = 0x6u;

void fisher_yates(std::vector<Eigen::Index>& idx, Xoshiro256 gen) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = std::size_t(gen.uniform_below(i));
        std::swap(idx[i - 1], idx[j]);
    }
}

template <typename ModelT>
std::vector<MetricRecord> merged_history(
    const std::vector<MetricEvaluator<ModelT>*>& callbacks) {
    std::map<int, MetricRecord> by_epoch;
    for (const auto* cb : callbacks) {
        for (const auto& record : cb->history()) {
            auto& merged = by_epoch[record.epoch];
            merged.epoch = record.epoch;
            merged.values.insert(record.values.begin(), record.values.end());
        }
    }
    std::vector<MetricRecord> out;
    out.reserve(by_epoch.size());
    for (auto& [epoch, record] : by_epoch) out.push_back(std::move(record));
    return out;
}

}  // namespace

TrainResult fit_positive(PositiveWavefunction& model, const SpinBatch& data,
                         const TrainingConfig& config,
                         const std::vector<MetricEvaluator<PositiveWavefunction>*>& callbacks) {
    config.validate();
    if (data.rows() == 0) throw std::invalid_argument("fit_positive: empty dataset");
    if (data.cols() != model.num_sites()) {
        throw std::invalid_argument("fit_positive: sample width does not match n_visible");
    }

    const RngStream root(config.seed);
    const RngStream shuffle_stream = root.child(kShuffleSalt);
    const RngStream update_stream = root.child(kUpdateSalt);

    const Eigen::Index n = data.rows();
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;

    TrainResult result;
    SpinBatch batch;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        fisher_yates(order, shuffle_stream.child(std::uint64_t(epoch)).generator());
        for (Eigen::Index start = 0; start < n; start += config.pos_batch_size) {
            const Eigen::Index rows = std::min<Eigen::Index>(config.pos_batch_size, n - start);
            batch.resize(rows, data.cols());
            for (Eigen::Index r = 0; r < rows; ++r) batch.row(r) = data.row(order[start + r]);

            const GradientSet grads =
                cd_gradient_positive(model, batch, config.k,
                                     update_stream.child(std::uint64_t(result.num_updates)),
                                     config.neg_batch_size);
            sgd_step(model, grads, config.learning_rate);
            ++result.num_updates;
        }
        if (epoch % config.log_every == 0) {
            for (auto* cb : callbacks) (*cb)(epoch, model);
        }
    }
    result.history = merged_history(callbacks);
    return result;
}

TrainResult fit_positive(PositiveWavefunction& model, const TrainingDataset& data,
                         const TrainingConfig& config,
                         const std::vector<MetricEvaluator<PositiveWavefunction>*>& callbacks) {
    data.validate();
    if (data.has_bases()) {
        for (const auto& b : data.bases) {
            if (rotated_site_count(b) != 0) {
                throw std::invalid_argument(
                    "fit_positive: dataset contains rotated-basis samples; "
                    "use a complex model");
            }
        }
    }
    return fit_positive(model, data.samples, config, callbacks);
}

TrainResult fit_complex(ComplexWavefunction& model, const TrainingDataset& data,
                        const GateRegistry& registry, const TrainingConfig& config,
                        const std::vector<MetricEvaluator<ComplexWavefunction>*>& callbacks) {
    config.validate();
    data.validate();
    if (data.samples.rows() == 0) throw std::invalid_argument("fit_complex: empty dataset");
    if (!data.has_bases()) {
        throw std::invalid_argument("fit_complex: every sample needs a basis assignment");
    }
    if (data.samples.cols() != model.num_sites()) {
        throw std::invalid_argument("fit_complex: sample width does not match n_visible");
    }
    for (const auto& b : data.bases) validate_basis(registry, b);

    const RngStream root(config.seed);
    const RngStream shuffle_stream = root.child(kShuffleSalt);
    const RngStream update_stream = root.child(kUpdateSalt);

    const Eigen::Index n = data.samples.rows();
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;

    TrainResult result;
    SpinBatch batch;
    std::vector<Basis> batch_bases;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        fisher_yates(order, shuffle_stream.child(std::uint64_t(epoch)).generator());
        for (Eigen::Index start = 0; start < n; start += config.pos_batch_size) {
            const Eigen::Index rows = std::min<Eigen::Index>(config.pos_batch_size, n - start);
            batch.resize(rows, data.samples.cols());
            batch_bases.resize(rows);
            for (Eigen::Index r = 0; r < rows; ++r) {
                batch.row(r) = data.samples.row(order[start + r]);
                batch_bases[r] = data.bases[order[start + r]];
            }

            const GradientSet grads = multibasis_gradient_complex(
                model, registry, batch, batch_bases, config.k,
                update_stream.child(std::uint64_t(result.num_updates)), config.neg_batch_size);
            sgd_step(model, grads, config.learning_rate);
            ++result.num_updates;
        }
        if (epoch % config.log_every == 0) {
            for (auto* cb : callbacks) (*cb)(epoch, model);
        }
    }
    result.history = merged_history(callbacks);
    return result;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricRecord>& history) {
    std::set<std::string> names;
    for (const auto& r : history) {
        for (const auto& [name, value] : r.values) names.insert(name);
    }
    os << "epoch";
    for (const auto& name : names) os << "," << name;
    os << "\n";
    char buf[64];
    for (const auto& r : history) {
        os << r.epoch;
        for (const auto& name : names) {
            os << ",";
            auto it = r.values.find(name);
            if (it != r.values.end()) {
                std::snprintf(buf, sizeof(buf), "%.17g", it->second);
                os << buf;
            }
        }
        os << "\n";
    }
}

void write_metrics_csv(const std::string& path, const std::vector<MetricRecord>& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path);
    write_metrics_csv(out, history);
}

}  // namespace qst
