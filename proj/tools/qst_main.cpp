// qst: command-line front end for RBM wavefunction reconstruction.
//
// Subcommands: gen-data (exact data synthesis), train, sample, observe,
// evaluate. Every file-producing run writes a manifest.json next to its
// outputs with the flags and seed needed to replay it.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qst/exact.hpp"
#include "qst/gradients.hpp"
#include "qst/io.hpp"
#include "qst/metrics.hpp"
#include "qst/observables.hpp"
#include "qst/parallel.hpp"
#include "qst/rbm.hpp"
#include "qst/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

// --out fallback shared by all commands that write files.
std::string resolve_out(const std::string& out_flag, const char* what) {
    if (!out_flag.empty()) return out_flag;
    if (const char* env = std::getenv("QST_OUT_DIR"); env && *env) return env;
    throw CLI::ValidationError(std::string("--out is required for ") + what +
                               " (or set QST_OUT_DIR)");
}

struct ManifestBuilder {
    json flags = json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string command;
    std::uint64_t seed = 0;

    void write(const fs::path& directory) const {
        json m;
        m["command"] = command;
        m["flags"] = flags;
        m["seed"] = seed;
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        m["timestamp"] = iso_timestamp();
        m["artifact_version"] = kArtifactVersion;
        m["rng"] = qst::kRngDescription;
        m["threads"] = qst::num_threads();
        std::ofstream out(directory / "manifest.json");
        if (!out) {
            throw std::runtime_error("cannot write manifest in " + directory.string());
        }
        out << m.dump(2) << '\n';
    }
};

std::vector<qst::Basis> default_qubit_bases(int n) {
    // Reference basis plus each site rotated to X and to Y; for n = 2 this
    // is exactly (z,z),(x,z),(z,x),(y,z),(z,y).
    std::vector<qst::Basis> bases;
    bases.emplace_back(std::size_t(n), "Z");
    for (const std::string gate : {"X", "Y"}) {
        for (int j = 0; j < n; ++j) {
            qst::Basis b(std::size_t(n), "Z");
            b[std::size_t(j)] = gate;
            bases.push_back(std::move(b));
        }
    }
    return bases;
}

json estimate_to_json(const std::string& name, const qst::ObservableEstimate& est) {
    json j;
    j["observable"] = name;
    j["mean"] = est.mean;
    j["variance"] = est.variance;
    j["std_error"] = est.std_error;
    j["n"] = est.num_samples;
    return j;
}

// ---------------------------------------------------------------- gen-data

struct GenTfimOptions {
    int n = 10;
    double j = 1.0;
    double h = 1.0;
    int samples = 100000;
    std::uint64_t seed = 1234;
    std::string out;
};

void run_gen_tfim(const GenTfimOptions& opt) {
    const fs::path dir = resolve_out(opt.out, "gen-data");
    fs::create_directories(dir);

    const qst::TfimSpec spec{opt.n, opt.j, opt.h};
    const auto [energy, state] = qst::tfim_ground_state(spec);
    const qst::SpinBatch samples =
        qst::born_sample(state, opt.samples, qst::RngStream(opt.seed));

    const fs::path samples_path = dir / "samples.txt";
    const fs::path psi_path = dir / "psi.txt";
    qst::save_samples(samples_path.string(), samples);
    qst::save_target_psi(psi_path.string(), state);

    ManifestBuilder manifest;
    manifest.command = "gen-data tfim";
    manifest.seed = opt.seed;
    manifest.flags = {{"n", opt.n},       {"j", opt.j},           {"h", opt.h},
                      {"samples", opt.samples}, {"out", dir.string()}};
    manifest.outputs = {samples_path.string(), psi_path.string()};
    manifest.write(dir);

    std::cout << "ground-state energy " << energy << "; wrote " << opt.samples
              << " samples to " << dir.string() << "\n";
}

struct GenQubitsOptions {
    int n = 2;
    std::string bases_file;
    int samples_per_basis = 10000;
    std::uint64_t seed = 1234;
    std::string out;
};

void run_gen_qubits(const GenQubitsOptions& opt) {
    const fs::path dir = resolve_out(opt.out, "gen-data");
    fs::create_directories(dir);

    const qst::GateRegistry registry = qst::default_gate_registry();
    std::vector<qst::Basis> bases;
    if (opt.bases_file.empty()) {
        bases = default_qubit_bases(opt.n);
    } else {
        bases = qst::load_basis_list(opt.bases_file);
    }

    const qst::RngStream root(opt.seed);
    const qst::TargetState state = qst::random_complex_state(opt.n, root.child(0));
    const qst::TrainingDataset dataset = qst::rotated_measurement_dataset(
        state, registry, bases, opt.samples_per_basis, root.child(1));

    const fs::path samples_path = dir / "samples.txt";
    const fs::path psi_path = dir / "psi.txt";
    const fs::path train_bases_path = dir / "train_bases.txt";
    const fs::path bases_path = dir / "bases.txt";
    qst::save_samples(samples_path.string(), dataset.samples);
    qst::save_target_psi(psi_path.string(), state);
    qst::save_bases(train_bases_path.string(), dataset.bases);
    qst::save_bases(bases_path.string(), bases);

    ManifestBuilder manifest;
    manifest.command = "gen-data qubits";
    manifest.seed = opt.seed;
    manifest.flags = {{"n", opt.n},
                      {"bases-file", opt.bases_file},
                      {"samples-per-basis", opt.samples_per_basis},
                      {"out", dir.string()}};
    if (!opt.bases_file.empty()) manifest.inputs.push_back(opt.bases_file);
    manifest.outputs = {samples_path.string(), psi_path.string(),
                        train_bases_path.string(), bases_path.string()};
    manifest.write(dir);

    std::cout << "wrote " << dataset.samples.rows() << " measurements over " << bases.size()
              << " bases to " << dir.string() << "\n";
}

// ------------------------------------------------------------------- train

struct TrainOptions {
    std::string data;
    std::string bases;
    std::string bases_list;
    std::string psi;
    int hidden = 0;  // 0 = match the number of sites
    qst::TrainingConfig config;
    bool verbose = false;
    std::string out;
};

json history_to_metadata(const std::vector<qst::MetricRecord>& history,
                         const qst::TrainingConfig& config) {
    json metadata;
    metadata["config"] = {{"epochs", config.epochs},
                          {"pos_batch_size", config.pos_batch_size},
                          {"neg_batch_size", config.neg_batch_size},
                          {"learning_rate", config.learning_rate},
                          {"k", config.k},
                          {"seed", config.seed},
                          {"log_every", config.log_every}};
    json metrics = json::object();
    for (const auto& record : history) {
        metrics["epoch"].push_back(record.epoch);
        for (const auto& [name, value] : record.values) metrics[name].push_back(value);
    }
    metadata["metrics"] = metrics;
    return metadata;
}

void run_train(const TrainOptions& opt, bool complex_mode) {
    const fs::path dir = resolve_out(opt.out, "train");
    fs::create_directories(dir);

    const qst::SpinBatch data = qst::load_samples(opt.data);
    const int n_sites = int(data.cols());
    const int n_hidden = opt.hidden > 0 ? opt.hidden : n_sites;

    std::optional<qst::TargetState> target;
    qst::SpinBatch space;
    if (!opt.psi.empty()) {
        target = qst::load_target_psi(opt.psi, n_sites);
        space = qst::enumerate_configurations(n_sites);
    }

    ManifestBuilder manifest;
    manifest.command = complex_mode ? "train complex" : "train positive";
    manifest.seed = opt.config.seed;
    manifest.flags = {{"data", opt.data},
                      {"bases", opt.bases},
                      {"bases-list", opt.bases_list},
                      {"psi", opt.psi},
                      {"hidden", n_hidden},
                      {"epochs", opt.config.epochs},
                      {"pos-batch", opt.config.pos_batch_size},
                      {"neg-batch", opt.config.neg_batch_size},
                      {"lr", opt.config.learning_rate},
                      {"k", opt.config.k},
                      {"log-every", opt.config.log_every},
                      {"out", dir.string()}};
    manifest.inputs.push_back(opt.data);
    if (!opt.psi.empty()) manifest.inputs.push_back(opt.psi);

    const fs::path ckpt_path = dir / "checkpoint.json";
    const fs::path csv_path = dir / "metrics.csv";
    std::vector<qst::MetricRecord> history;

    if (!complex_mode) {
        qst::PositiveWavefunction model(n_sites, n_hidden,
                                        qst::RngStream(opt.config.seed).child(0xA11));
        std::map<std::string, qst::MetricEvaluator<qst::PositiveWavefunction>::MetricFn> fns;
        if (target) {
            fns["fidelity"] = [&](const qst::PositiveWavefunction& m) {
                return qst::fidelity(m, *target, space);
            };
            fns["kl"] = [&](const qst::PositiveWavefunction& m) {
                return qst::kl_divergence(m, *target, space);
            };
        }
        qst::MetricEvaluator<qst::PositiveWavefunction> evaluator(1, std::move(fns),
                                                                  opt.verbose);
        const qst::TrainResult result =
            qst::fit_positive(model, data, opt.config, {&evaluator});
        history = result.history;
        qst::save_checkpoint(ckpt_path.string(), model,
                             history_to_metadata(history, opt.config));
    } else {
        if (opt.bases.empty()) {
            throw CLI::ValidationError("train complex requires --bases");
        }
        qst::TrainingDataset dataset;
        dataset.samples = data;
        dataset.bases = qst::load_basis_list(opt.bases);
        if (Eigen::Index(dataset.bases.size()) != data.rows()) {
            throw std::runtime_error(opt.bases + ": " + std::to_string(dataset.bases.size()) +
                                     " bases for " + std::to_string(data.rows()) +
                                     " samples in " + opt.data);
        }
        manifest.inputs.push_back(opt.bases);

        const qst::GateRegistry registry = qst::default_gate_registry();
        std::vector<qst::Basis> basis_list;
        if (!opt.bases_list.empty()) {
            basis_list = qst::load_basis_list(opt.bases_list);
            manifest.inputs.push_back(opt.bases_list);
        } else {
            // distinct bases in order of first appearance
            for (const auto& b : dataset.bases) {
                if (std::find(basis_list.begin(), basis_list.end(), b) == basis_list.end()) {
                    basis_list.push_back(b);
                }
            }
        }

        qst::ComplexWavefunction model(n_sites, n_hidden,
                                       qst::RngStream(opt.config.seed).child(0xA11));
        std::map<std::string, qst::MetricEvaluator<qst::ComplexWavefunction>::MetricFn> fns;
        if (target) {
            fns["fidelity"] = [&](const qst::ComplexWavefunction& m) {
                return qst::fidelity(m, *target, space);
            };
            fns["kl"] = [&, basis_list](const qst::ComplexWavefunction& m) {
                return qst::kl_multibasis(m, registry, *target, basis_list, space);
            };
        }
        qst::MetricEvaluator<qst::ComplexWavefunction> evaluator(1, std::move(fns),
                                                                 opt.verbose);
        const qst::TrainResult result =
            qst::fit_complex(model, dataset, registry, opt.config, {&evaluator});
        history = result.history;
        qst::save_checkpoint(ckpt_path.string(), model,
                             history_to_metadata(history, opt.config));
    }

    manifest.outputs.push_back(ckpt_path.string());
    if (target) {
        qst::write_metrics_csv(csv_path.string(), history);
        manifest.outputs.push_back(csv_path.string());
    }
    manifest.write(dir);
    std::cout << "checkpoint written to " << ckpt_path.string() << "\n";
}

// ------------------------------------------------------------------ sample

struct SampleOptions {
    std::string model;
    int num = 1000;
    int k = 10;
    std::uint64_t seed = 1234;
    std::string out;
};

void run_sample(const SampleOptions& opt) {
    const fs::path out_path = resolve_out(opt.out, "sample");
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());

    const qst::Checkpoint ckpt = qst::load_checkpoint(opt.model);
    const qst::Rbm& amplitude =
        ckpt.positive ? ckpt.positive->amplitude : ckpt.complex_model->amplitude;
    const qst::SpinBatch samples =
        qst::sample(amplitude, opt.num, opt.k, qst::RngStream(opt.seed));
    qst::save_samples(out_path.string(), samples);

    ManifestBuilder manifest;
    manifest.command = "sample";
    manifest.seed = opt.seed;
    manifest.flags = {{"model", opt.model}, {"num", opt.num}, {"k", opt.k},
                      {"out", out_path.string()}};
    manifest.inputs = {opt.model};
    manifest.outputs = {out_path.string()};
    manifest.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));

    std::cout << "wrote " << opt.num << " samples to " << out_path.string() << "\n";
}

// ----------------------------------------------------------------- observe

struct ObserveOptions {
    std::string model;
    std::string obs;
    std::string region_spec;
    int num = 1000;
    int k = 10;
    std::uint64_t seed = 1234;
    double j = 1.0;
    double h = 1.0;
    bool j_given = false;
    bool h_given = false;
    std::string out;
};

qst::Region parse_region(const std::string& spec) {
    std::vector<int> sites;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        sites.push_back(std::stoi(token));
    }
    return qst::Region(sites);  // validates ordering/duplicates
}

template <typename ModelT>
json observe_model(const ModelT& model, const ObserveOptions& opt) {
    const qst::SpinBatch samples =
        qst::sample(model.amplitude, opt.num, opt.k, qst::RngStream(opt.seed));
    if (opt.obs == "sigmaz") {
        return estimate_to_json("sigma_z", qst::sigma_z_magnetization(samples));
    }
    if (opt.obs == "abs-sigmaz") {
        return estimate_to_json("abs_sigma_z", qst::abs_sigma_z_magnetization(samples));
    }
    if (opt.obs == "sigmax") {
        return estimate_to_json("sigma_x", qst::sigma_x_magnetization(model, samples));
    }
    if (opt.obs == "energy") {
        if (!opt.j_given || !opt.h_given) {
            throw CLI::ValidationError("--obs energy requires --j and --h");
        }
        json out = estimate_to_json("tfim_energy", qst::tfim_energy(model, samples, opt.j, opt.h));
        out["j"] = opt.j;
        out["h"] = opt.h;
        return out;
    }
    if (opt.obs == "renyi") {
        if (opt.region_spec.empty()) {
            throw CLI::ValidationError("--obs renyi requires --region");
        }
        const qst::Region region = parse_region(opt.region_spec);
        const qst::RenyiEstimate est = qst::renyi_s2(model, samples, region);
        json out;
        out["observable"] = "renyi_s2";
        out["region"] = region.sites;
        out["swap_mean"] = est.swap_mean;
        out["swap_variance"] = est.swap_variance;
        out["swap_std_error"] = est.swap_std_error;
        out["num_pairs"] = est.num_pairs;
        out["s2"] = est.s2;
        out["s2_std_error"] = est.s2_std_error;
        return out;
    }
    throw CLI::ValidationError("unknown observable \"" + opt.obs + "\"");
}

void run_observe(const ObserveOptions& opt) {
    const qst::Checkpoint ckpt = qst::load_checkpoint(opt.model);
    json result = ckpt.positive ? observe_model(*ckpt.positive, opt)
                                : observe_model(*ckpt.complex_model, opt);
    result["num_samples_requested"] = opt.num;
    result["k"] = opt.k;
    result["seed"] = opt.seed;

    std::cout << result.dump() << "\n";
    if (!opt.out.empty()) {
        const fs::path out_path(opt.out);
        if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
        std::ofstream file(out_path);
        file << result.dump(2) << '\n';
        ManifestBuilder manifest;
        manifest.command = "observe";
        manifest.seed = opt.seed;
        manifest.flags = {{"model", opt.model}, {"obs", opt.obs},
                          {"region", opt.region_spec}, {"num", opt.num},
                          {"k", opt.k}, {"out", opt.out}};
        manifest.inputs = {opt.model};
        manifest.outputs = {opt.out};
        manifest.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));
    }
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
    std::string model;
    std::string psi;
    std::string bases_list;
    std::string out;
};

void run_evaluate(const EvaluateOptions& opt) {
    const qst::Checkpoint ckpt = qst::load_checkpoint(opt.model);
    const int n_sites = ckpt.positive ? ckpt.positive->num_sites()
                                      : ckpt.complex_model->num_sites();
    const qst::TargetState target = qst::load_target_psi(opt.psi, n_sites);
    const qst::SpinBatch space = qst::enumerate_configurations(n_sites);

    json result;
    if (ckpt.positive) {
        result["fidelity"] = qst::fidelity(*ckpt.positive, target, space);
        result["kl"] = qst::kl_divergence(*ckpt.positive, target, space);
    } else {
        result["fidelity"] = qst::fidelity(*ckpt.complex_model, target, space);
        result["kl"] = qst::kl_divergence(*ckpt.complex_model, target, space);
    }
    if (!opt.bases_list.empty()) {
        const auto bases = qst::load_basis_list(opt.bases_list);
        const qst::GateRegistry registry = qst::default_gate_registry();
        result["kl_multibasis"] =
            ckpt.positive
                ? qst::kl_multibasis(*ckpt.positive, registry, target, bases, space)
                : qst::kl_multibasis(*ckpt.complex_model, registry, target, bases, space);
    }
    result["model_kind"] = ckpt.model_kind;

    std::cout << result.dump() << "\n";
    if (!opt.out.empty()) {
        std::ofstream file(opt.out);
        file << result.dump(2) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RBM quantum state tomography"};
    app.require_subcommand(1);
    // --h is a physics flag here; keep help on --help only.
    app.set_help_flag("--help", "print help");

    int threads = 1;
    app.add_option("--threads", threads, "worker threads for the parallel kernels")
        ->capture_default_str();

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "synthesize training data from exact states");
    gen->require_subcommand(1);
    GenTfimOptions tfim_opt;
    auto* gen_tfim = gen->add_subcommand("tfim", "open-boundary transverse-field Ising chain");
    gen_tfim->add_option("--n", tfim_opt.n, "number of spins")->capture_default_str();
    gen_tfim->add_option("--j", tfim_opt.j, "coupling J")->capture_default_str();
    gen_tfim->add_option("--h", tfim_opt.h, "transverse field h")->capture_default_str();
    gen_tfim->add_option("--samples", tfim_opt.samples, "number of projective measurements")
        ->capture_default_str();
    gen_tfim->add_option("--seed", tfim_opt.seed, "RNG seed")->capture_default_str();
    gen_tfim->add_option("--out", tfim_opt.out, "output directory");

    GenQubitsOptions qubits_opt;
    auto* gen_qubits = gen->add_subcommand("qubits", "random complex state, multi-basis data");
    gen_qubits->add_option("--n", qubits_opt.n, "number of qubits")->capture_default_str();
    gen_qubits->add_option("--bases-file", qubits_opt.bases_file,
                           "basis list file (default: Z^n plus per-site X and Y)");
    gen_qubits->add_option("--samples-per-basis", qubits_opt.samples_per_basis,
                           "measurements per basis")
        ->capture_default_str();
    gen_qubits->add_option("--seed", qubits_opt.seed, "RNG seed")->capture_default_str();
    gen_qubits->add_option("--out", qubits_opt.out, "output directory");

    // train
    auto* train = app.add_subcommand("train", "fit an RBM model to measurement data");
    train->require_subcommand(1);

    TrainOptions pos_opt;
    pos_opt.config = qst::TrainingConfig{};  // paper defaults for positive mode
    auto* train_pos = train->add_subcommand("positive", "positive-amplitude wavefunction");
    TrainOptions cplx_opt;
    cplx_opt.config.epochs = 100;
    cplx_opt.config.pos_batch_size = 10;
    cplx_opt.config.neg_batch_size = 10;
    cplx_opt.config.learning_rate = 0.05;
    cplx_opt.config.k = 5;
    auto* train_cplx = train->add_subcommand("complex", "amplitude + phase wavefunction");

    for (auto [cmd, opt] : {std::pair{train_pos, &pos_opt}, {train_cplx, &cplx_opt}}) {
        cmd->add_option("--data", opt->data, "samples file")->required();
        cmd->add_option("--bases", opt->bases, "per-sample basis file (complex mode)");
        cmd->add_option("--bases-list", opt->bases_list, "distinct-bases file");
        cmd->add_option("--psi", opt->psi, "target wavefunction for fidelity/KL logging");
        cmd->add_option("--hidden", opt->hidden, "hidden units (default: one per site)");
        cmd->add_option("--epochs", opt->config.epochs)->capture_default_str();
        cmd->add_option("--pos-batch", opt->config.pos_batch_size)->capture_default_str();
        cmd->add_option("--neg-batch", opt->config.neg_batch_size)->capture_default_str();
        cmd->add_option("--lr", opt->config.learning_rate)->capture_default_str();
        cmd->add_option("--k", opt->config.k)->capture_default_str();
        cmd->add_option("--seed", opt->config.seed)->capture_default_str();
        cmd->add_option("--log-every", opt->config.log_every)->capture_default_str();
        cmd->add_flag("--verbose", opt->verbose, "print metrics as they are logged");
        cmd->add_option("--out", opt->out, "output directory");
    }

    // sample
    SampleOptions sample_opt;
    auto* sample_cmd = app.add_subcommand("sample", "draw visible samples from a checkpoint");
    sample_cmd->add_option("--model", sample_opt.model, "checkpoint file")->required();
    sample_cmd->add_option("--num", sample_opt.num)->capture_default_str();
    sample_cmd->add_option("--k", sample_opt.k, "block-Gibbs steps per chain")
        ->capture_default_str();
    sample_cmd->add_option("--seed", sample_opt.seed)->capture_default_str();
    sample_cmd->add_option("--out", sample_opt.out, "output samples file");

    // observe
    ObserveOptions observe_opt;
    auto* observe_cmd = app.add_subcommand("observe", "Monte Carlo observable estimation");
    observe_cmd->add_option("--model", observe_opt.model, "checkpoint file")->required();
    observe_cmd
        ->add_option("--obs", observe_opt.obs,
                     "sigmaz | abs-sigmaz | sigmax | energy | renyi")
        ->required();
    observe_cmd->add_option("--region", observe_opt.region_spec,
                            "comma-separated site indices (renyi)");
    observe_cmd->add_option("--num", observe_opt.num)->capture_default_str();
    observe_cmd->add_option("--k", observe_opt.k)->capture_default_str();
    observe_cmd->add_option("--seed", observe_opt.seed)->capture_default_str();
    auto* j_flag = observe_cmd->add_option("--j", observe_opt.j, "TFIM coupling (energy)");
    auto* h_flag = observe_cmd->add_option("--h", observe_opt.h, "TFIM field (energy)");
    observe_cmd->add_option("--out", observe_opt.out, "also write the JSON estimate here");

    // evaluate
    EvaluateOptions eval_opt;
    auto* eval_cmd = app.add_subcommand("evaluate", "exact fidelity and KL against a target");
    eval_cmd->add_option("--model", eval_opt.model, "checkpoint file")->required();
    eval_cmd->add_option("--psi", eval_opt.psi, "target wavefunction file")->required();
    eval_cmd->add_option("--bases-list", eval_opt.bases_list,
                         "distinct-bases file for multi-basis KL");
    eval_cmd->add_option("--out", eval_opt.out, "also write the JSON metrics here");

    for (CLI::App* top : app.get_subcommands([](const CLI::App*) { return true; })) {
        top->set_help_flag("--help", "print help");
        for (CLI::App* nested : top->get_subcommands([](const CLI::App*) { return true; })) {
            nested->set_help_flag("--help", "print help");
        }
    }

    try {
        app.parse(argc, argv);
        qst::set_num_threads(threads);
        if (gen_tfim->parsed()) run_gen_tfim(tfim_opt);
        if (gen_qubits->parsed()) run_gen_qubits(qubits_opt);
        if (train_pos->parsed()) run_train(pos_opt, false);
        if (train_cplx->parsed()) run_train(cplx_opt, true);
        if (sample_cmd->parsed()) run_sample(sample_opt);
        if (observe_cmd->parsed()) {
            observe_opt.j_given = j_flag->count() > 0;
            observe_opt.h_given = h_flag->count() > 0;
            run_observe(observe_opt);
        }
        if (eval_cmd->parsed()) run_evaluate(eval_opt);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
