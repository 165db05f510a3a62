// Timing comparison between the serial reference implementations and the
// OpenMP kernels, with a correctness column (max deviation) for each pair.
//
//   qst_bench [--threads T] [--scale S]
//
// Scale multiplies the default problem sizes; the defaults finish in a few
// seconds.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qst/observables.hpp"
#include "qst/parallel.hpp"
#include "qst/rbm.hpp"
#include "qst/reference.hpp"

using namespace qst;

namespace {

double seconds(const std::function<void()>& fn, int repeats) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count() / repeats;
}

void report(const std::string& name, double t_ref, double t_kernel, double deviation) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx %12.3e\n", name.c_str(), t_ref * 1e3,
                t_kernel * 1e3, t_ref / t_kernel, deviation);
}

Rbm bench_rbm(int n_v, int n_h) {
    auto gen = RngStream(42).generator();
    Rbm rbm = Rbm::zeros(n_v, n_h);
    for (int i = 0; i < n_h; ++i) {
        for (int j = 0; j < n_v; ++j) rbm.weights(i, j) = 0.3 * gen.normal();
    }
    return rbm;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial-reference vs parallel-kernel benchmark"};
    int threads = 2;
    double scale = 1.0;
    int repeats = 3;
    app.add_option("--threads", threads, "threads for the parallel kernels")
        ->capture_default_str();
    app.add_option("--scale", scale, "problem-size multiplier")->capture_default_str();
    app.add_option("--repeats", repeats, "timing repetitions")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const int chains = int(2000 * scale);
    const int batch_rows = int(20000 * scale);
    const int log_z_sites = scale >= 1.0 ? 18 : 14;

    std::printf("threads = %d, scale = %.2f\n\n", threads, scale);
    std::printf("%-28s %13s %13s %9s %12s\n", "kernel", "serial ref", "parallel", "speedup",
                "max dev");

    // --- block-Gibbs sampling -------------------------------------------
    {
        const Rbm rbm = bench_rbm(16, 16);
        set_num_threads(1);
        SpinBatch ref_out;
        const double t_ref =
            seconds([&] { ref_out = ref::sample(rbm, chains, 10, RngStream(1)); }, repeats);
        set_num_threads(threads);
        SpinBatch par_out;
        const double t_par =
            seconds([&] { par_out = sample(rbm, chains, 10, RngStream(1)); }, repeats);
        report("gibbs sampling", t_ref, t_par, (ref_out - par_out).cwiseAbs().maxCoeff());
    }

    // --- batch effective energies ---------------------------------------
    {
        const Rbm rbm = bench_rbm(16, 16);
        set_num_threads(1);
        const SpinBatch batch = sample(rbm, batch_rows, 1, RngStream(2));
        Vector ref_e, par_e;
        const double t_ref =
            seconds([&] { ref_e = ref::effective_energies(rbm, batch); }, repeats);
        set_num_threads(threads);
        const double t_par = seconds([&] { par_e = rbm.effective_energies(batch); }, repeats);
        report("effective energies", t_ref, t_par, (ref_e - par_e).cwiseAbs().maxCoeff());
    }

    // --- log partition ----------------------------------------------------
    {
        const Rbm rbm = bench_rbm(log_z_sites, 12);
        set_num_threads(1);
        double ref_z = 0.0, par_z = 0.0;
        const double t_ref = seconds([&] { ref_z = ref::log_partition(rbm); }, repeats);
        set_num_threads(threads);
        const double t_par = seconds([&] { par_z = log_partition(rbm); }, repeats);
        report("log partition (2^" + std::to_string(log_z_sites) + ")", t_ref, t_par,
               std::abs(ref_z - par_z));
    }

    // --- batch gradient ----------------------------------------------------
    {
        const Rbm rbm = bench_rbm(16, 16);
        set_num_threads(1);
        const SpinBatch batch = sample(rbm, batch_rows, 1, RngStream(3));
        RbmGradient ref_g, par_g;
        const double t_ref =
            seconds([&] { ref_g = ref::mean_energy_gradient(rbm, batch); }, repeats);
        set_num_threads(threads);
        const double t_par = seconds([&] { par_g = mean_energy_gradient(rbm, batch); }, repeats);
        const double dev = (ref_g.weights - par_g.weights).cwiseAbs().maxCoeff();
        report("mean energy gradient", t_ref, t_par, dev);
    }

    // --- sigma_x local estimators ------------------------------------------
    {
        const Rbm rbm = bench_rbm(16, 16);
        set_num_threads(1);
        const PositiveWavefunction model(rbm);
        const SpinBatch batch = sample(rbm, int(batch_rows / 10), 1, RngStream(4));
        std::vector<double> ref_v, par_v;
        const double t_ref = seconds([&] { ref_v = ref::sigma_x_values(model, batch); }, repeats);
        set_num_threads(threads);
        const double t_par = seconds([&] { par_v = sigma_x_values(model, batch); }, repeats);
        double dev = 0.0;
        for (std::size_t i = 0; i < ref_v.size(); ++i) {
            dev = std::max(dev, std::abs(ref_v[i] - par_v[i]));
        }
        report("sigma_x estimators", t_ref, t_par, dev);
    }

    // --- swap estimators -----------------------------------------------------
    {
        const Rbm rbm = bench_rbm(16, 16);
        set_num_threads(1);
        const PositiveWavefunction model(rbm);
        const SpinBatch batch = sample(rbm, batch_rows, 1, RngStream(5));
        const Region region({0, 1, 2, 3, 4, 5, 6, 7});
        std::vector<double> ref_v, par_v;
        const double t_ref =
            seconds([&] { ref_v = ref::swap_local_estimator(model, batch, region); }, repeats);
        set_num_threads(threads);
        const double t_par =
            seconds([&] { par_v = swap_local_estimator(model, batch, region); }, repeats);
        double dev = 0.0;
        for (std::size_t i = 0; i < ref_v.size(); ++i) {
            dev = std::max(dev, std::abs(ref_v[i] - par_v[i]));
        }
        report("swap estimators", t_ref, t_par, dev);
    }

    set_num_threads(1);
    return 0;
}
