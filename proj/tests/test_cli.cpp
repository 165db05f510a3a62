#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the command-line front end; each test drives the
// built binary through a shell.

namespace fs = std::filesystem;

namespace {

const std::string kCli = QST_CLI_PATH;

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto p = fs::temp_directory_path() / "qst_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int run(const std::string& args, const std::string& log_name = "last") {
    const fs::path out = scratch_dir() / (log_name + ".out");
    const fs::path err = scratch_dir() / (log_name + ".err");
    const std::string cmd =
        kCli + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string last_stderr(const std::string& log_name = "last") {
    return slurp(scratch_dir() / (log_name + ".err"));
}

bool same_bytes(const fs::path& a, const fs::path& b) { return slurp(a) == slurp(b); }

}  // namespace

TEST_CASE("gen-data / train / evaluate pipeline runs end to end") {
    const fs::path dir = scratch_dir() / "pipeline";
    REQUIRE(run("gen-data tfim --n 4 --j 1.0 --h 1.0 --samples 2000 --seed 7 --out " +
                (dir / "data").string()) == 0);
    CHECK(fs::exists(dir / "data" / "samples.txt"));
    CHECK(fs::exists(dir / "data" / "psi.txt"));
    CHECK(fs::exists(dir / "data" / "manifest.json"));

    REQUIRE(run("train positive --data " + (dir / "data" / "samples.txt").string() +
                " --psi " + (dir / "data" / "psi.txt").string() +
                " --epochs 40 --pos-batch 100 --neg-batch 100 --lr 0.05 --k 5 --seed 3"
                " --log-every 10 --out " +
                (dir / "run").string()) == 0);
    CHECK(fs::exists(dir / "run" / "checkpoint.json"));
    CHECK(fs::exists(dir / "run" / "metrics.csv"));
    CHECK(fs::exists(dir / "run" / "manifest.json"));

    REQUIRE(run("evaluate --model " + (dir / "run" / "checkpoint.json").string() + " --psi " +
                    (dir / "data" / "psi.txt").string(),
                "eval") == 0);
    const std::string out = slurp(scratch_dir() / "eval.out");
    CHECK(out.find("\"fidelity\"") != std::string::npos);
    CHECK(out.find("\"kl\"") != std::string::npos);
}

TEST_CASE("identical flags and seed give byte-identical outputs") {
    const fs::path dir = scratch_dir() / "repro";
    for (const char* run_name : {"a", "b"}) {
        REQUIRE(run(std::string("gen-data qubits --n 2 --samples-per-basis 200 --seed 5 "
                                "--out ") +
                    (dir / run_name / "data").string()) == 0);
        REQUIRE(run(std::string("train complex --data ") +
                    (dir / run_name / "data" / "samples.txt").string() + " --bases " +
                    (dir / run_name / "data" / "train_bases.txt").string() + " --bases-list " +
                    (dir / run_name / "data" / "bases.txt").string() + " --psi " +
                    (dir / run_name / "data" / "psi.txt").string() +
                    " --epochs 10 --seed 21 --out " + (dir / run_name / "run").string()) == 0);
        REQUIRE(run(std::string("sample --model ") +
                    (dir / run_name / "run" / "checkpoint.json").string() +
                    " --num 100 --k 5 --seed 9 --out " +
                    (dir / run_name / "samples.txt").string()) == 0);
        REQUIRE(run(std::string("observe --model ") +
                    (dir / run_name / "run" / "checkpoint.json").string() +
                    " --obs sigmax --num 200 --k 5 --seed 13 --out " +
                    (dir / run_name / "observe.json").string()) == 0);
    }
    for (const char* file : {"data/samples.txt", "data/psi.txt", "data/train_bases.txt",
                             "data/bases.txt", "run/checkpoint.json", "run/metrics.csv",
                             "samples.txt", "observe.json"}) {
        CAPTURE(file);
        CHECK(same_bytes(dir / "a" / file, dir / "b" / file));
    }
}

TEST_CASE("failures exit nonzero with a machine-readable error line") {
    const fs::path dir = scratch_dir() / "errors";
    fs::create_directories(dir);

    SUBCASE("malformed samples file names the offending line") {
        std::ofstream bad(dir / "bad.txt");
        bad << "0 1\n1 2\n";
        bad.close();
        std::ofstream psi(dir / "psi.txt");
        psi << "1.0 0.0\n0.0 0.0\n0.0 0.0\n0.0 0.0\n";
        psi.close();
        CHECK(run("train positive --data " + (dir / "bad.txt").string() + " --epochs 1 --out " +
                      (dir / "run").string(),
                  "bad_samples") != 0);
        const std::string err = last_stderr("bad_samples");
        CHECK(err.find("\"error\"") != std::string::npos);
        CHECK(err.find(":2:") != std::string::npos);
    }
    SUBCASE("duplicate region indices are rejected") {
        // needs any checkpoint; reuse the pipeline one if present
        const fs::path ckpt = scratch_dir() / "pipeline" / "run" / "checkpoint.json";
        if (fs::exists(ckpt)) {
            CHECK(run("observe --model " + ckpt.string() + " --obs renyi --region 0,0 --num 10",
                      "dup_region") != 0);
            CHECK(last_stderr("dup_region").find("error") != std::string::npos);
        }
    }
    SUBCASE("renyi without a region is rejected") {
        const fs::path ckpt = scratch_dir() / "pipeline" / "run" / "checkpoint.json";
        if (fs::exists(ckpt)) {
            CHECK(run("observe --model " + ckpt.string() + " --obs renyi --num 10",
                      "no_region") != 0);
        }
    }
    SUBCASE("energy without couplings is rejected") {
        const fs::path ckpt = scratch_dir() / "pipeline" / "run" / "checkpoint.json";
        if (fs::exists(ckpt)) {
            CHECK(run("observe --model " + ckpt.string() + " --obs energy --num 10",
                      "no_couplings") != 0);
        }
    }
    SUBCASE("complex training requires bases") {
        const fs::path data = scratch_dir() / "pipeline" / "data" / "samples.txt";
        if (fs::exists(data)) {
            CHECK(run("train complex --data " + data.string() + " --epochs 1 --out " +
                          (dir / "run2").string(),
                      "no_bases") != 0);
        }
    }
}

TEST_CASE("train with zero epochs still writes a loadable checkpoint") {
    const fs::path dir = scratch_dir() / "zero_epochs";
    REQUIRE(run("gen-data tfim --n 3 --samples 100 --seed 3 --out " + (dir / "data").string()) ==
            0);
    REQUIRE(run("train positive --data " + (dir / "data" / "samples.txt").string() +
                " --epochs 0 --out " + (dir / "run").string()) == 0);
    CHECK(fs::exists(dir / "run" / "checkpoint.json"));
    REQUIRE(run("sample --model " + (dir / "run" / "checkpoint.json").string() +
                " --num 10 --k 2 --seed 4 --out " + (dir / "s.txt").string()) == 0);
}

TEST_CASE("gen-data qubits default bases cover the five two-qubit settings") {
    const fs::path dir = scratch_dir() / "default_bases";
    REQUIRE(run("gen-data qubits --n 2 --samples-per-basis 50 --seed 6 --out " +
                (dir / "data").string()) == 0);
    const std::string bases = slurp(dir / "data" / "bases.txt");
    CHECK(bases == "Z Z\nX Z\nZ X\nY Z\nZ Y\n");
    // per-sample bases file has one line per sample
    std::istringstream train_bases(slurp(dir / "data" / "train_bases.txt"));
    int lines = 0;
    std::string line;
    while (std::getline(train_bases, line)) {
        if (!line.empty()) ++lines;
    }
    CHECK(lines == 250);
}
