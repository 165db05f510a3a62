#include "qst/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qst/rng.hpp"

namespace qst {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open file for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open file for writing");
    return out;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& token, const std::string& path, long line) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw IoError(path, line, "malformed decimal \"" + token + "\"");
    }
    if (pos != token.size()) {
        throw IoError(path, line, "malformed decimal \"" + token + "\"");
    }
    return value;
}

}  // namespace

SpinBatch load_samples(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;  // blank lines are harmless
        if (width == 0) width = tokens.size();
        if (tokens.size() != width) {
            throw IoError(path, lineno,
                          "expected " + std::to_string(width) + " entries, got " +
                              std::to_string(tokens.size()));
        }
        std::vector<double> row(width);
        for (std::size_t j = 0; j < width; ++j) {
            if (tokens[j] == "0") {
                row[j] = 0.0;
            } else if (tokens[j] == "1") {
                row[j] = 1.0;
            } else {
                throw IoError(path, lineno,
                              "expected binary token 0/1, got \"" + tokens[j] + "\"");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path, "file contains no samples");
    SpinBatch batch(Eigen::Index(rows.size()), Eigen::Index(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) batch(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
    }
    return batch;
}

void save_samples(const std::string& path, const SpinBatch& samples) {
    if (!is_binary_batch(samples)) {
        throw std::invalid_argument("save_samples: batch entries must be 0 or 1");
    }
    auto out = open_output(path);
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        for (Eigen::Index j = 0; j < samples.cols(); ++j) {
            if (j) out << ' ';
            out << int(samples(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError(path, "write failed");
}

TargetState load_target_psi(const std::string& path, int n_qubits) {
    auto in = open_input(path);
    const Eigen::Index expected = Eigen::Index(1) << n_qubits;
    ComplexVector amps(expected);
    std::string line;
    long lineno = 0;
    Eigen::Index count = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (count >= expected) {
            throw IoError(path, lineno,
                          "more than 2^" + std::to_string(n_qubits) + " amplitude lines");
        }
        if (tokens.size() != 2) {
            throw IoError(path, lineno, "expected \"real imaginary\", got " +
                                            std::to_string(tokens.size()) + " tokens");
        }
        const double re = parse_double(tokens[0], path, lineno);
        const double im = parse_double(tokens[1], path, lineno);
        amps(count++) = Complex(re, im);
    }
    if (count != expected) {
        throw IoError(path, "expected " + std::to_string(expected) + " amplitude lines, got " +
                                std::to_string(count));
    }
    const double norm = amps.norm();
    if (norm <= 0.0) throw IoError(path, "state has zero norm");
    if (std::abs(norm * norm - 1.0) > 1e-6) {
        std::cerr << "warning: " << path << ": |psi|^2 = " << norm * norm
                  << ", normalizing on load\n";
    }
    amps /= norm;
    return TargetState(std::move(amps));
}

void save_target_psi(const std::string& path, const TargetState& state) {
    auto out = open_output(path);
    char buf[80];
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g", state.amplitudes(i).real(),
                      state.amplitudes(i).imag());
        out << buf << '\n';
    }
    if (!out) throw IoError(path, "write failed");
}

std::vector<Basis> load_basis_list(const std::string& path) {
    auto in = open_input(path);
    std::vector<Basis> bases;
    std::string line;
    long lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (width == 0) width = tokens.size();
        if (tokens.size() != width) {
            throw IoError(path, lineno,
                          "expected " + std::to_string(width) + " labels, got " +
                              std::to_string(tokens.size()));
        }
        bases.push_back(std::move(tokens));
    }
    if (bases.empty()) throw IoError(path, "file contains no bases");
    return bases;
}

void save_bases(const std::string& path, const std::vector<Basis>& bases) {
    auto out = open_output(path);
    for (const auto& basis : bases) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (j) out << ' ';
            out << basis[j];
        }
        out << '\n';
    }
    if (!out) throw IoError(path, "write failed");
}

std::pair<std::vector<Basis>, std::vector<Basis>> load_bases(
    const std::string& train_bases_path, const std::string& bases_path) {
    return {load_basis_list(train_bases_path), load_basis_list(bases_path)};
}

namespace {

nlohmann::json rbm_to_json(const Rbm& rbm) {
    if (!rbm.finite()) {
        throw std::invalid_argument("save_checkpoint: parameters must be finite");
    }
    nlohmann::json j;
    j["n_visible"] = rbm.num_visible();
    j["n_hidden"] = rbm.num_hidden();
    auto weights = nlohmann::json::array();
    for (int i = 0; i < rbm.num_hidden(); ++i) {
        auto row = nlohmann::json::array();
        for (int jcol = 0; jcol < rbm.num_visible(); ++jcol) row.push_back(rbm.weights(i, jcol));
        weights.push_back(std::move(row));
    }
    j["weights"] = std::move(weights);
    j["visible_bias"] = std::vector<double>(rbm.visible_bias.begin(), rbm.visible_bias.end());
    j["hidden_bias"] = std::vector<double>(rbm.hidden_bias.begin(), rbm.hidden_bias.end());
    return j;
}

Rbm rbm_from_json(const nlohmann::json& j, const std::string& path) {
    try {
        const int n_v = j.at("n_visible").get<int>();
        const int n_h = j.at("n_hidden").get<int>();
        Matrix w(n_h, n_v);
        const auto& weights = j.at("weights");
        if (int(weights.size()) != n_h) throw IoError(path, "weight row count mismatch");
        for (int i = 0; i < n_h; ++i) {
            const auto& row = weights.at(i);
            if (int(row.size()) != n_v) throw IoError(path, "weight column count mismatch");
            for (int jcol = 0; jcol < n_v; ++jcol) w(i, jcol) = row.at(jcol).get<double>();
        }
        const auto vb = j.at("visible_bias").get<std::vector<double>>();
        const auto hb = j.at("hidden_bias").get<std::vector<double>>();
        if (int(vb.size()) != n_v || int(hb.size()) != n_h) {
            throw IoError(path, "bias length mismatch");
        }
        Rbm rbm(std::move(w), Eigen::Map<const Vector>(vb.data(), n_v),
                Eigen::Map<const Vector>(hb.data(), n_h));
        if (!rbm.finite()) throw IoError(path, "checkpoint parameters are not finite");
        return rbm;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("malformed RBM block: ") + e.what());
    }
}

void write_checkpoint_json(const std::string& path, nlohmann::json j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError(path, "write failed");
}

}  // namespace

void save_checkpoint(const std::string& path, const PositiveWavefunction& model,
                     const nlohmann::json& metadata) {
    nlohmann::json j;
    j["format_version"] = kCheckpointFormatVersion;
    j["model_kind"] = "positive";
    j["rng"] = kRngDescription;
    j["amplitude"] = rbm_to_json(model.amplitude);
    j["metadata"] = metadata;
    write_checkpoint_json(path, std::move(j));
}

void save_checkpoint(const std::string& path, const ComplexWavefunction& model,
                     const nlohmann::json& metadata) {
    nlohmann::json j;
    j["format_version"] = kCheckpointFormatVersion;
    j["model_kind"] = "complex";
    j["rng"] = kRngDescription;
    j["amplitude"] = rbm_to_json(model.amplitude);
    j["phase"] = rbm_to_json(model.phase_rbm);
    j["metadata"] = metadata;
    write_checkpoint_json(path, std::move(j));
}

Checkpoint load_checkpoint(const std::string& path) {
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("corrupted or truncated checkpoint: ") + e.what());
    }
    Checkpoint ckpt;
    try {
        ckpt.format_version = j.at("format_version").get<int>();
        if (ckpt.format_version != kCheckpointFormatVersion) {
            throw IoError(path, "unsupported checkpoint format version " +
                                    std::to_string(ckpt.format_version));
        }
        ckpt.model_kind = j.at("model_kind").get<std::string>();
        ckpt.metadata = j.value("metadata", nlohmann::json::object());
        if (ckpt.model_kind == "positive") {
            ckpt.positive = PositiveWavefunction(rbm_from_json(j.at("amplitude"), path));
        } else if (ckpt.model_kind == "complex") {
            ckpt.complex_model = ComplexWavefunction(rbm_from_json(j.at("amplitude"), path),
                                                     rbm_from_json(j.at("phase"), path));
        } else {
            throw IoError(path, "unknown model_kind \"" + ckpt.model_kind + "\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("corrupted checkpoint: ") + e.what());
    }
    return ckpt;
}

PositiveWavefunction load_positive_checkpoint(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    if (!ckpt.positive) {
        throw IoError(path, "expected a positive-model checkpoint, found \"" +
                                ckpt.model_kind + "\"");
    }
    return std::move(*ckpt.positive);
}

ComplexWavefunction load_complex_checkpoint(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    if (!ckpt.complex_model) {
        throw IoError(path, "expected a complex-model checkpoint, found \"" +
                                ckpt.model_kind + "\"");
    }
    return std::move(*ckpt.complex_model);
}

}  // namespace qst
