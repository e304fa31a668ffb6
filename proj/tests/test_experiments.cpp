#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fluctlab/experiments.hpp"
#include "fluctlab/report.hpp"

using namespace fluctlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Config rw_micro_config() {
    return Config::parse_text(
        "[experiment]\n"
        "name = rw-oracle\n"
        "step = exp-minus-exp\n"
        "rate_plus = 1\n"
        "rate_minus = 0.5\n"
        "walks = 50000\n"
        "n_max = 2000\n"
        "barrier = 40\n"
        "x_probes = 4\n"
        "ratio_target = 1.5\n"
        "lt_probes = 20, 40, 80, 160\n"
        "\n"
        "[output]\n"
        "dir = out/test-experiments\n"
        "prefix = determinism\n"
        "\n"
        "[rng]\n"
        "seed = 777\n");
}

}  // namespace

TEST_CASE("git blob hash matches the reference vectors") {
    CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("float formatting is canonical") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e6) == "1000000");
    CHECK(format_double(1e20) == "1e+20");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(1.0 / 0.0) == "inf");
    CHECK(format_double(-1.0 / 0.0) == "-inf");
}

TEST_CASE("csv serialization golden") {
    Csv t;
    t.columns = {"a", "b"};
    t.add_row({1.0, 0.5});
    t.add_row({2.0, 0.25});
    CHECK(t.serialize() == "a,b\n1,0.5\n2,0.25\n");
}

TEST_CASE("unknown experiments and missing sections are config errors") {
    CHECK_THROWS_AS(
        run_experiment(Config::parse_text("[experiment]\nname = warp-drive\n"), 1),
        ConfigError);
    CHECK_THROWS_AS(run_experiment(Config::parse_text("[output]\ndir = out\n"), 1),
                    ConfigError);
    // sinai-check needs a process
    CHECK_THROWS_AS(
        run_experiment(Config::parse_text("[experiment]\nname = sinai-check\n"), 1),
        ConfigError);
}

TEST_CASE("exponent consistency runs clean end to end") {
    Config cfg = Config::parse_text(
        "[experiment]\n"
        "name = exponent-consistency\n"
        "\n"
        "[output]\n"
        "dir = out/test-experiments\n"
        "prefix = exponents\n"
        "\n"
        "[rng]\n"
        "seed = 1\n");
    RunOutcome oc = run_experiment(cfg, 1);
    CHECK(oc.exit_code == kExitPass);
    CHECK(oc.pass);
    CHECK(oc.summary.find("exponent-consistency") != std::string::npos);

    Json doc = Json::parse(slurp(oc.report_path));
    CHECK(doc["schema"] == 1);
    CHECK(doc["experiment"] == "exponent-consistency");
    CHECK(doc["pass"] == true);
    CHECK(doc["config"]["rng"]["seed"] == "1");
    REQUIRE(doc["checks"].is_array());
    CHECK(!doc["checks"].empty());
    for (const auto& line : doc["checks"]) {
        CHECK(std::string(line).rfind("ok: ", 0) == 0);
    }

    // the content hash covers the document without its own field
    Json stripped = doc;
    stripped.erase("content_hash");
    CHECK(std::string(doc["content_hash"]) == git_blob_sha1(stripped.dump(2) + "\n"));

    // every advertised table exists next to the report
    for (const auto& [name, fname] : doc["tables"].items()) {
        std::string csv = slurp("out/test-experiments/" + std::string(fname));
        CHECK(csv.find('\n') != std::string::npos);
    }
}

TEST_CASE("worker count never changes the written bytes") {
    Config cfg = rw_micro_config();
    RunOutcome first = run_experiment(cfg, 1);
    CHECK(first.exit_code == kExitPass);
    std::string json1 = slurp(first.report_path);
    std::string csv1 = slurp("out/test-experiments/determinism-walks.csv");

    RunOutcome second = run_experiment(cfg, 3);
    CHECK(second.exit_code == first.exit_code);
    CHECK(slurp(second.report_path) == json1);
    CHECK(slurp("out/test-experiments/determinism-walks.csv") == csv1);
}

TEST_CASE("failed assertions exit 2, thin tails exit 3") {
    Config bad = rw_micro_config();
    bad.set("experiment", "ratio_target", "10");
    bad.set("output", "prefix", "assert-fail");
    RunOutcome oc = run_experiment(bad, 1);
    CHECK(oc.exit_code == kExitAssert);
    CHECK(!oc.pass);
    Json doc = Json::parse(slurp(oc.report_path));
    CHECK(doc["pass"] == false);
    bool any_fail = false;
    for (const auto& line : doc["checks"]) {
        if (std::string(line).rfind("fail: ", 0) == 0) any_fail = true;
    }
    CHECK(any_fail);

    Config thin = rw_micro_config();
    thin.set("experiment", "x_probes", "50");
    thin.set("output", "prefix", "no-converge");
    RunOutcome oc3 = run_experiment(thin, 1);
    CHECK(oc3.exit_code == kExitNoConverge);
}
