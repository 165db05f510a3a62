#ifndef QST_IO_HPP
#define QST_IO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qst/metrics.hpp"
#include "qst/types.hpp"
#include "qst/wavefunction.hpp"

namespace qst {

// Loader/parser failure with the offending file and line in the message.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, long line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

// Samples: one configuration per line, whitespace-separated 0/1 tokens.
SpinBatch load_samples(const std::string& path);
void save_samples(const std::string& path, const SpinBatch& samples);

// Wavefunction: 2^N lines of "real imaginary", canonical configuration
// order. Normalized on load; warns on stderr when the norm is off by more
// than 1e-6.
TargetState load_target_psi(const std::string& path, int n_qubits);
void save_target_psi(const std::string& path, const TargetState& state);

// Basis files: one basis per line, whitespace-separated gate labels.
std::vector<Basis> load_basis_list(const std::string& path);
void save_bases(const std::string& path, const std::vector<Basis>& bases);

// Per-sample bases plus the list of distinct bases used by the dataset.
std::pair<std::vector<Basis>, std::vector<Basis>> load_bases(
    const std::string& train_bases_path, const std::string& bases_path);

inline constexpr int kCheckpointFormatVersion = 1;

// Self-describing single-file model container (JSON). Parameters survive a
// round trip bit-exactly; metadata carries metric histories, the training
// config and the RNG description.
void save_checkpoint(const std::string& path, const PositiveWavefunction& model,
                     const nlohmann::json& metadata = nlohmann::json::object());
void save_checkpoint(const std::string& path, const ComplexWavefunction& model,
                     const nlohmann::json& metadata = nlohmann::json::object());

struct Checkpoint {
    int format_version = kCheckpointFormatVersion;
    std::string model_kind;  // "positive" | "complex"
    std::optional<PositiveWavefunction> positive;
    std::optional<ComplexWavefunction> complex_model;
    nlohmann::json metadata;
};

Checkpoint load_checkpoint(const std::string& path);
// Kind-checked loaders: loading the other kind is an error.
PositiveWavefunction load_positive_checkpoint(const std::string& path);
ComplexWavefunction load_complex_checkpoint(const std::string& path);

}  // namespace qst

#endif
