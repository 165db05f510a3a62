#ifndef QST_TRAINING_HPP
#define QST_TRAINING_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qst/gates.hpp"
#include "qst/gradients.hpp"
#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

namespace qst {

struct TrainingConfig {
    int epochs = 500;
    int pos_batch_size = 100;
    int neg_batch_size = 100;
    double learning_rate = 0.01;
    int k = 5;  // Gibbs steps in the CD negative phase
    std::uint64_t seed = 1234;
    int log_every = 10;

    void validate() const;
};

struct MetricRecord {
    int epoch = 0;
    std::map<std::string, double> values;
};

// Periodic metric logger, the callback mechanism of the fit loops. Metrics
// are evaluated and recorded at epochs divisible by `period`; with
// verbose=true the epoch number and all values are printed as they arrive.
template <typename ModelT>
class MetricEvaluator {
public:
    using MetricFn = std::function<double(const ModelT&)>;

    MetricEvaluator(int period, std::map<std::string, MetricFn> metrics, bool verbose = false)
        : period_(period), metrics_(std::move(metrics)), verbose_(verbose) {
        if (period_ < 1) throw std::invalid_argument("MetricEvaluator: period must be >= 1");
    }

    void operator()(int epoch, const ModelT& model) {
        if (epoch % period_ != 0) return;
        MetricRecord record;
        record.epoch = epoch;
        for (const auto& [name, fn] : metrics_) record.values[name] = fn(model);
        history_.push_back(record);
        if (verbose_) print_record(record);
    }

    const std::vector<MetricRecord>& history() const { return history_; }

    // One metric as a series, in recording order.
    std::vector<double> series(const std::string& name) const {
        std::vector<double> out;
        out.reserve(history_.size());
        for (const auto& r : history_) out.push_back(r.values.at(name));
        return out;
    }

private:
    static void print_record(const MetricRecord& record);

    int period_;
    std::map<std::string, MetricFn> metrics_;
    bool verbose_;
    std::vector<MetricRecord> history_;
};

struct TrainResult {
    std::vector<MetricRecord> history;  // merged from all evaluators, by epoch
    std::int64_t num_updates = 0;       // parameter updates performed
};

// SGD with CD-k gradients over shuffled minibatches. One epoch is a full
// pass through the dataset: ceil(N / pos_batch_size) updates. Evaluators are
// invoked after each epoch divisible by config.log_every.
TrainResult fit_positive(PositiveWavefunction& model, const SpinBatch& data,
                         const TrainingConfig& config,
                         const std::vector<MetricEvaluator<PositiveWavefunction>*>& callbacks = {});
TrainResult fit_positive(PositiveWavefunction& model, const TrainingDataset& data,
                         const TrainingConfig& config,
                         const std::vector<MetricEvaluator<PositiveWavefunction>*>& callbacks = {});

// Multi-basis training of a complex model; every sample must carry a basis.
// Both RBMs are updated each step (the phase gradient vanishes identically
// for reference-basis samples).
TrainResult fit_complex(ComplexWavefunction& model, const TrainingDataset& data,
                        const GateRegistry& registry, const TrainingConfig& config,
                        const std::vector<MetricEvaluator<ComplexWavefunction>*>& callbacks = {});

// CSV with one row per recorded epoch: epoch,<metric>,... (metric columns
// in name order, 17 significant digits).
void write_metrics_csv(std::ostream& os, const std::vector<MetricRecord>& history);
void write_metrics_csv(const std::string& path, const std::vector<MetricRecord>& history);

}  // namespace qst

#endif
