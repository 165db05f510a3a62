#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qst/exact.hpp"
#include "qst/io.hpp"
#include "qst/rbm.hpp"
#include "test_utils.hpp"

using namespace qst;
using qst::testing::random_complex;
using qst::testing::random_positive;

namespace {

// Scratch directory cleaned up at process exit.
std::string scratch_path(const std::string& name) {
    static const std::filesystem::path dir = [] {
        auto p = std::filesystem::temp_directory_path() / "qst_io_tests";
        std::filesystem::create_directories(p);
        return p;
    }();
    return (dir / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

bool message_mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("sample files") {
    SUBCASE("a known line parses to the right configuration") {
        const std::string path = scratch_path("known_line.txt");
        write_text(path, "1 0 1 1 0 1 0 0 0 1\n");
        const SpinBatch batch = load_samples(path);
        REQUIRE(batch.rows() == 1);
        REQUIRE(batch.cols() == 10);
        const double expected[10] = {1, 0, 1, 1, 0, 1, 0, 0, 0, 1};
        for (int j = 0; j < 10; ++j) CHECK(batch(0, j) == expected[j]);
    }
    SUBCASE("large batches round-trip") {
        const auto [energy, state] = tfim_ground_state(TfimSpec{10, 1.0, 1.0});
        const SpinBatch samples = born_sample(state, 100000, RngStream(1));
        const std::string path = scratch_path("large.txt");
        save_samples(path, samples);
        const SpinBatch loaded = load_samples(path);
        CHECK(loaded.rows() == 100000);
        CHECK(loaded.cols() == 10);
        CHECK(loaded == samples);
    }
    SUBCASE("non-binary tokens are reported with their line") {
        const std::string path = scratch_path("bad_token.txt");
        write_text(path, "0 1\n1 2\n");
        try {
            (void)load_samples(path);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(message_mentions(e, path));
            CHECK(message_mentions(e, ":2:"));
            CHECK(message_mentions(e, "2"));
        }
    }
    SUBCASE("ragged rows are reported with their line") {
        const std::string path = scratch_path("ragged.txt");
        write_text(path, "0 1 0\n0 1\n");
        try {
            (void)load_samples(path);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(message_mentions(e, ":2:"));
        }
    }
    SUBCASE("empty files are rejected") {
        const std::string path = scratch_path("empty.txt");
        write_text(path, "");
        CHECK_THROWS_AS((void)load_samples(path), IoError);
    }
}

TEST_CASE("wavefunction files") {
    SUBCASE("positive states have a zero imaginary column") {
        const auto [energy, state] = tfim_ground_state(TfimSpec{3, 1.0, 1.0});
        const std::string path = scratch_path("tfim3_psi.txt");
        save_target_psi(path, state);
        const TargetState loaded = load_target_psi(path, 3);
        for (Eigen::Index i = 0; i < loaded.amplitudes.size(); ++i) {
            CHECK(loaded.amplitudes(i).imag() == 0.0);
        }
    }
    SUBCASE("|+> from a two-line file") {
        const std::string path = scratch_path("plus.txt");
        write_text(path, "0.7071067811865476 0.0\n0.7071067811865476 0.0\n");
        const TargetState state = load_target_psi(path, 1);
        CHECK(state.amplitudes(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(state.amplitudes(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
    SUBCASE("round trip preserves amplitudes to full precision") {
        const TargetState state = random_complex_state(4, RngStream(2));
        const std::string path = scratch_path("random_psi.txt");
        save_target_psi(path, state);
        const TargetState loaded = load_target_psi(path, 4);
        for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
            CHECK(std::abs(loaded.amplitudes(i) - state.amplitudes(i)) < 1e-15);
        }
    }
    SUBCASE("wrong line counts are rejected") {
        const std::string path = scratch_path("short_psi.txt");
        write_text(path, "1.0 0.0\n");
        CHECK_THROWS_AS((void)load_target_psi(path, 2), IoError);
    }
    SUBCASE("malformed decimals are rejected with their line") {
        const std::string path = scratch_path("bad_psi.txt");
        write_text(path, "1.0 0.0\n0.x 0.0\n");
        try {
            (void)load_target_psi(path, 1);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(message_mentions(e, ":2:"));
        }
    }
}

TEST_CASE("basis files") {
    SUBCASE("identity assignment") {
        const std::string path = scratch_path("zz.txt");
        write_text(path, "Z Z\n");
        const auto bases = load_basis_list(path);
        REQUIRE(bases.size() == 1);
        CHECK(bases[0] == Basis{"Z", "Z"});
    }
    SUBCASE("the five two-qubit bases") {
        const std::string path = scratch_path("five.txt");
        write_text(path, "Z Z\nX Z\nZ X\nY Z\nZ Y\n");
        const auto bases = load_basis_list(path);
        REQUIRE(bases.size() == 5);
        CHECK(bases[1] == Basis{"X", "Z"});
        CHECK(bases[4] == Basis{"Z", "Y"});
    }
    SUBCASE("round trip") {
        const std::vector<Basis> bases = {{"Z", "X", "Y"}, {"Z", "Z", "Z"}};
        const std::string path = scratch_path("roundtrip_bases.txt");
        save_bases(path, bases);
        CHECK(load_basis_list(path) == bases);
    }
    SUBCASE("ragged label counts are rejected") {
        const std::string path = scratch_path("ragged_bases.txt");
        write_text(path, "Z Z\nX\n");
        CHECK_THROWS_AS((void)load_basis_list(path), IoError);
    }
    SUBCASE("pair loader returns both files") {
        const std::string train = scratch_path("train_bases.txt");
        const std::string list = scratch_path("bases_list.txt");
        write_text(train, "Z Z\nX Z\nZ Z\n");
        write_text(list, "Z Z\nX Z\n");
        const auto [per_sample, distinct] = load_bases(train, list);
        CHECK(per_sample.size() == 3);
        CHECK(distinct.size() == 2);
    }
}

TEST_CASE("checkpoints") {
    SUBCASE("positive round trip is bit-exact on psi") {
        const PositiveWavefunction model = random_positive(5, 4, 3);
        const std::string path = scratch_path("positive.ckpt.json");
        nlohmann::json metadata;
        metadata["fidelity"] = {0.5, 0.9, 0.99};
        save_checkpoint(path, model, metadata);

        const PositiveWavefunction loaded = load_positive_checkpoint(path);
        auto gen = RngStream(4).generator();
        Vector v(5);
        for (int trial = 0; trial < 100; ++trial) {
            for (int j = 0; j < 5; ++j) v(j) = gen.bernoulli(0.5) ? 1.0 : 0.0;
            CHECK(loaded.psi(v) == model.psi(v));
        }
        const Checkpoint ckpt = load_checkpoint(path);
        CHECK(ckpt.model_kind == "positive");
        REQUIRE(ckpt.metadata.contains("fidelity"));
        CHECK(ckpt.metadata["fidelity"].size() == 3);
        CHECK(ckpt.metadata["fidelity"][2].get<double>() == 0.99);
    }
    SUBCASE("complex round trip is bit-exact on psi") {
        const ComplexWavefunction model = random_complex(4, 3, 5);
        const std::string path = scratch_path("complex.ckpt.json");
        save_checkpoint(path, model);
        const ComplexWavefunction loaded = load_complex_checkpoint(path);
        auto gen = RngStream(6).generator();
        Vector v(4);
        for (int trial = 0; trial < 100; ++trial) {
            for (int j = 0; j < 4; ++j) v(j) = gen.bernoulli(0.5) ? 1.0 : 0.0;
            const Complex a = loaded.psi(v);
            const Complex b = model.psi(v);
            CHECK(a.real() == b.real());
            CHECK(a.imag() == b.imag());
        }
    }
    SUBCASE("kind mismatch is an error") {
        const PositiveWavefunction model = random_positive(3, 2, 7);
        const std::string path = scratch_path("kind.ckpt.json");
        save_checkpoint(path, model);
        CHECK_THROWS_AS((void)load_complex_checkpoint(path), IoError);
        CHECK_NOTHROW((void)load_positive_checkpoint(path));
    }
    SUBCASE("truncated files fail loudly, with no partial model") {
        const PositiveWavefunction model = random_positive(3, 2, 8);
        const std::string path = scratch_path("truncated.ckpt.json");
        save_checkpoint(path, model);
        std::ifstream in(path);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        in.close();
        write_text(path, all.substr(0, all.size() / 2));
        CHECK_THROWS_AS((void)load_checkpoint(path), IoError);
    }
    SUBCASE("unsupported versions are rejected") {
        const std::string path = scratch_path("version.ckpt.json");
        write_text(path, R"({"format_version": 99, "model_kind": "positive"})");
        try {
            (void)load_checkpoint(path);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(message_mentions(e, "version"));
        }
    }
    SUBCASE("missing files are reported") {
        CHECK_THROWS_AS((void)load_checkpoint(scratch_path("does_not_exist.json")), IoError);
    }
}

TEST_CASE("canonical configuration order is shared across modules") {
    // Row i of enumerate_configurations, line i of a psi file, and index i
    // of the dense oracle all name the same configuration (N = 3).
    const auto [energy, state] = tfim_ground_state(TfimSpec{3, 1.0, 0.7});
    const std::string path = scratch_path("canonical_psi.txt");
    save_target_psi(path, state);
    const TargetState loaded = load_target_psi(path, 3);
    const SpinBatch space = enumerate_configurations(3);

    // The h=0.7 ground state has strictly decreasing probability with the
    // number of flipped spins relative to the ordered components, so
    // amplitudes identify configurations unambiguously here.
    for (Eigen::Index i = 0; i < space.rows(); ++i) {
        const auto idx = index_from_config(space.row(i).transpose());
        CHECK(Eigen::Index(idx) == i);
        CHECK(loaded.amplitudes(i).real() ==
              doctest::Approx(state.amplitudes(i).real()).epsilon(1e-15));
    }
    // Spot-check a physical consequence of the ordering: the two ordered
    // product states |000> and |111> carry the largest weight.
    double max_other = 0.0;
    for (Eigen::Index i = 1; i < 7; ++i) {
        max_other = std::max(max_other, std::norm(loaded.amplitudes(i)));
    }
    CHECK(std::norm(loaded.amplitudes(0)) > max_other);
    CHECK(std::norm(loaded.amplitudes(7)) > max_other);
}
