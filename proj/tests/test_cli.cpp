#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rcv/cli.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rcv;
namespace fs = std::filesystem;

namespace {

const std::string kWeights = RCV_FIXTURES "/weights.csv";

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "rcv_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> simulate_args(const fs::path& out, const std::string& workers) {
    return {"simulate", "--weights", kWeights, "--state", "Balanced", "--candidates", "3",
            "--model", "noise", "--elections", "60", "--voters", "501", "--seed", "5",
            "--workers", workers, "--out", out.string()};
}

const std::string kStem = "Balanced_bimodal_3cands_noise_5";

}  // namespace

TEST_CASE("example prints the worked profile") {
    const auto r = cli({"example"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("plurality  winner A") != std::string::npos);
    CHECK(r.out.find("irv        winner B") != std::string::npos);
    CHECK(r.out.find("A=230 B=240 C=0 exhausted=10") != std::string::npos);
    CHECK(r.out.find("bucklin    winner C") != std::string::npos);
    CHECK(r.out.find("A vs C: 220-250") != std::string::npos);
    CHECK(r.out.find("borda      winner C  points A=450 B=430 C=510") != std::string::npos);
}

TEST_CASE("example as JSON") {
    const auto r = cli({"example", "--json"});
    REQUIRE(r.code == kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["ballots"] == 480);
    CHECK(doc["condorcet_winner"] == "C");
    CHECK(doc["rules"]["plurality"]["winner"] == "A");
    CHECK(doc["rules"]["irv"]["winner"] == "B");
    CHECK(doc["rules"]["minimax"]["winner"] == "C");
    CHECK(doc["rules"]["bucklin"]["winner"] == "C");
    CHECK(doc["rules"]["borda"]["winner"] == "C");
}

TEST_CASE("example with a profile file") {
    const auto dir = fresh_dir("profile");
    std::ofstream(dir / "p.txt") << "X,Y\n3: X>Y\n2: Y\n";
    const auto r = cli({"example", "--profile", (dir / "p.txt").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("plurality  winner X") != std::string::npos);
    std::ofstream(dir / "bad.txt") << "X,Y\n3: X>X\n";
    CHECK(cli({"example", "--profile", (dir / "bad.txt").string()}).code == kExitData);
}

TEST_CASE("usage errors exit 1") {
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
    const auto r = cli({"simulate", "--weights", kWeights, "--state", "Balanced", "--model", "strategic",
                        "--out", fresh_dir("usage").string()});
    CHECK(r.code == kExitUsage);
    for (const char* m : {"theoretical-ideal", "ideological-truncation", "random-truncation", "abstention",
                          "noise", "most-realistic"}) {
        CHECK(r.err.find(m) != std::string::npos);
    }
    CHECK(cli({"simulate", "--weights", kWeights, "--out", fresh_dir("usage").string()}).code == kExitUsage);
}

TEST_CASE("data errors exit 2") {
    const auto out = fresh_dir("data");
    CHECK(cli({"simulate", "--weights", kWeights, "--state", "Atlantis", "--elections", "2", "--out",
               out.string()})
              .code == kExitData);
    CHECK(cli({"simulate", "--weights", "/nonexistent.csv", "--state", "Balanced", "--elections", "2",
               "--out", out.string()})
              .code == kExitData);
    std::ofstream(out / "file") << "x";
    CHECK(cli({"simulate", "--weights", kWeights, "--state", "Balanced", "--elections", "2", "--voters", "11",
               "--out", (out / "file" / "sub").string()})
              .code == kExitData);
}

TEST_CASE("simulate is byte-identical across worker counts and summaries rebuild") {
    const auto a = fresh_dir("w1");
    const auto b = fresh_dir("w3");
    REQUIRE(cli(simulate_args(a, "1")).code == kExitOk);
    REQUIRE(cli(simulate_args(b, "3")).code == kExitOk);
    const auto records = a / (kStem + ".records.csv");
    const auto summary = a / (kStem + ".summary.json");
    CHECK(slurp(records) == slurp(b / (kStem + ".records.csv")));
    CHECK(slurp(summary) == slurp(b / (kStem + ".summary.json")));

    const auto rebuilt = a / "rebuilt.json";
    REQUIRE(cli({"summarize", "--records", records.string(), "--config", summary.string(), "--out",
                 rebuilt.string()})
                .code == kExitOk);
    CHECK(slurp(rebuilt) == slurp(summary));

    const auto again = fresh_dir("again");
    REQUIRE(cli({"simulate", "--config", summary.string(), "--out", again.string()}).code == kExitOk);
    CHECK(slurp(again / (kStem + ".summary.json")) == slurp(summary));
}

TEST_CASE("simulate expands comma lists and summarize builds tables") {
    const auto out = fresh_dir("grid");
    const auto r = cli({"simulate", "--weights", kWeights, "--state", "Balanced,Partisan", "--candidates", "4",
                        "--model", "theoretical-ideal,ideological-truncation", "--elections", "30", "--voters",
                        "301", "--out", out.string()});
    REQUIRE(r.code == kExitOk);
    std::size_t summaries = 0;
    for (const auto& e : fs::directory_iterator(out)) {
        if (e.path().string().ends_with(".summary.json")) ++summaries;
    }
    CHECK(summaries == 4);

    const auto tables = out / "tables";
    REQUIRE(cli({"summarize", "--tables", out.string(), "--out", tables.string()}).code == kExitOk);
    const auto cmp = slurp(tables / "comparison.csv");
    CHECK(cmp.find("Partisan,bimodal,4,ideological-truncation") != std::string::npos);
    CHECK(slurp(tables / "distances.csv").find("Balanced,bimodal,4,borda") != std::string::npos);
    CHECK(slurp(tables / "state_stats.csv").find("Partisan,bimodal,4") != std::string::npos);
    CHECK(cli({"summarize", "--tables", fresh_dir("empty").string()}).code == kExitData);
}

TEST_CASE("moments and tune-noise") {
    const auto m = cli({"moments", "--weights", kWeights, "--state", "Uniform", "--flavor", "bimodal"});
    CHECK(m.code == kExitOk);
    CHECK(m.out.rfind("state,flavor,mean,variance,symmetrized_mean,analytic_median\n", 0) == 0);
    CHECK(m.out.find("Uniform,bimodal,") != std::string::npos);
    CHECK(cli({"moments", "--weights", kWeights, "--state", "Nowhere"}).code == kExitData);

    const auto t = cli({"tune-noise", "--weights", kWeights, "--state", "Balanced", "--elections", "5",
                        "--voters", "101", "--half-widths", "0,0.1"});
    CHECK(t.code == kExitOk);
    CHECK(t.out.find("\n0,505,0,0,0\n") != std::string::npos);
    CHECK(cli({"tune-noise", "--weights", kWeights, "--state", "Balanced", "--half-widths", "0.7"}).code ==
          kExitUsage);
}
