// End-to-end checks of the CLI binary: determinism, file plumbing, and exit
// codes. The binary path comes in via HAWKES_CLI_PATH from CMake.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hawkes/io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HAWKES_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate is deterministic and produces the requested trace files") {
    TempDir a("hawkes_cli_sim_a"), b("hawkes_cli_sim_b");
    REQUIRE(run("simulate --out " + a.path.string() + " --epochs 3 --sessions 50 --seed 7") == 0);
    REQUIRE(run("simulate --out " + b.path.string() + " --epochs 3 --sessions 50 --seed 7") == 0);
    for (const char* name : {"epoch_000.jsonl", "epoch_001.jsonl", "epoch_002.jsonl",
                             "catalog.txt", "truth.json", "manifest.json"}) {
        CHECK(fs::exists(a.path / name));
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    }
    const hawkes::EpochTrace trace = hawkes::read_trace_file((a.path / "epoch_000.jsonl").string());
    CHECK(trace.sessions.size() == 50);
}

TEST_CASE("fit consumes simulate output and reports errors against truth") {
    TempDir dir("hawkes_cli_fit");
    REQUIRE(run("simulate --out " + dir.path.string() + " --epochs 2 --sessions 80 --seed 3") ==
            0);
    const std::string report_path = (dir.path / "report.json").string();
    REQUIRE(run("fit --traces " + dir.path.string() + " --catalog " +
                (dir.path / "catalog.txt").string() + " --truth " +
                (dir.path / "truth.json").string() + " --out " + report_path +
                " --steps 200 --batch 2") == 0);
    const std::string report = slurp(report_path);
    CHECK(report.find("\"errors\"") != std::string::npos);
    CHECK(report.find("\"params\"") != std::string::npos);
}

TEST_CASE("invalid input exits with code 2") {
    TempDir dir("hawkes_cli_err");
    CHECK(run("fit --traces /nonexistent.jsonl --catalog /nonexistent_catalog.txt") == 2);
    CHECK(run("experiment --name not-an-experiment --out " + dir.path.string()) == 2);
    CHECK(run("totally-unknown-verb") == 2);
    // Malformed catalog file.
    std::ofstream((dir.path / "bad_catalog.txt")) << "bogus\n";
    std::ofstream((dir.path / "t.jsonl"))
        << "{\"horizon\": 1.0, \"epoch\": 0, \"seed\": 1}\n{\"t\": 0.5, \"items\": [0]}\n";
    CHECK(run("fit --traces " + (dir.path / "t.jsonl").string() + " --catalog " +
              (dir.path / "bad_catalog.txt").string()) == 2);
}

TEST_CASE("rank prints k items from a params file") {
    TempDir dir("hawkes_cli_rank");
    REQUIRE(run("simulate --out " + dir.path.string() + " --epochs 1 --sessions 10 --seed 5") ==
            0);
    const std::string out_file = (dir.path / "rank.txt").string();
    const std::string cmd = std::string(HAWKES_CLI_PATH) + " rank --catalog " +
                            (dir.path / "catalog.txt").string() + " --params " +
                            (dir.path / "truth.json").string() + " --mode utility -k 5 > " +
                            out_file + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream in(out_file);
    int lines = 0;
    double prev = 1e300;
    int index;
    double score;
    while (in >> index >> score) {
        ++lines;
        CHECK(score <= prev);
        prev = score;
    }
    CHECK(lines == 5);
}

TEST_CASE("experiment rejects an empty grid from config") {
    TempDir dir("hawkes_cli_exp");
    std::ofstream((dir.path / "spec.cfg")) << "[experiment]\nname = error-vs-samples\ngrid =\n";
    CHECK(run("experiment --config " + (dir.path / "spec.cfg").string() + " --out " +
              dir.path.string()) == 2);
}
