#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "hydrosurr_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(HYDROSURR_CLI_PATH) + " " + args + " > " +
                            (work_dir() / "last.log").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::string out(const std::string& sub) { return "-o " + (work_dir() / sub).string(); }

}  // namespace

// The stages run in order and share files, so they live in one test.
TEST(Cli, EndToEndPipeline) {
    const auto w = work_dir();
    ASSERT_EQ(run(out("toy") + " toy --vehicle mini-husky --vehicle mini-warthog"), 0);
    const auto spec_h = (w / "toy" / "mini-husky.json").string();
    const auto spec_w = (w / "toy" / "mini-warthog.json").string();
    ASSERT_TRUE(fs::exists(spec_h));

    ASSERT_EQ(run(out("prep") + " prepare --spec " + spec_w), 0);
    EXPECT_TRUE(fs::exists(w / "prep" / "mini-warthog" / "sdf.hsdf"));
    EXPECT_TRUE(fs::exists(w / "prep" / "mini-warthog" / "patches.json"));
    ASSERT_EQ(run(out("prep") + " prepare --spec " + spec_w), 0);  // up to date

    ASSERT_EQ(run(out("ds") + " generate --spec " + spec_h + " --spec " + spec_w + " -n 6 --seed 3"), 0);
    const auto manifest = read_json(w / "ds" / "manifest.json");
    EXPECT_TRUE(manifest.contains("provenance"));

    {
        std::ofstream cfg(w / "train.json");
        cfg << R"({"hidden": 16, "batch": 16})";
    }
    ASSERT_EQ(run(out("m") + " train --bundle " + (w / "ds").string() + " --epochs 2 --config " +
                  (w / "train.json").string()),
              0);
    EXPECT_TRUE(fs::exists(w / "m" / "model.hsrg"));
    EXPECT_TRUE(fs::exists(w / "m" / "train_log.csv"));
    const auto model = (w / "m" / "model.hsrg").string();

    ASSERT_EQ(run(out("ev") + " eval --model " + model + " --bundle " + (w / "ds").string()), 0);
    const auto metrics = read_json(w / "ev" / "metrics.json");
    EXPECT_FALSE(metrics.empty());

    ASSERT_EQ(run(out("tr") + " traces --bundle " + (w / "ds").string() +
                  " --vehicle mini-warthog --depths 0.1016,0.2032 --speeds 0.8,1.2,1.6"),
              0);
    std::size_t n_traces = 0;
    for (const auto& e : fs::directory_iterator(w / "tr")) n_traces += e.path().extension() == ".csv";
    EXPECT_EQ(n_traces, 6u);

    // Physics thresholds may fail on a two-epoch model; the report must still be written.
    const int rc = run(out("val") + " validate --model " + model + " --bundle " + (w / "ds").string() +
                       " --vehicle mini-warthog --traces " + (w / "tr").string());
    EXPECT_TRUE(rc == 0 || rc == 4) << rc;
    EXPECT_TRUE(fs::exists(w / "val" / "report.json"));

    ASSERT_EQ(run(out("b") + " bench --model " + model + " --bundle " + (w / "ds").string() +
                  " --vehicle mini-warthog --iters 1000 --sustained 0.2"),
              0);
    const auto lat = read_json(w / "b" / "latency.json");
    EXPECT_TRUE(lat.contains("single"));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("train --bundle /nonexistent"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    const auto bad = work_dir() / "bad_spec.json";
    {
        std::ofstream f(bad);
        f << R"({"name": "x"})";
    }
    EXPECT_EQ(run(out("p2") + " prepare --spec " + bad.string()), 3);
    const auto junk = work_dir() / "junk.hsrg";
    {
        std::ofstream f(junk);
        f << "not a model";
    }
    fs::create_directories(work_dir() / "emptyds");
    EXPECT_EQ(run("eval --model " + junk.string() + " --bundle " + (work_dir() / "emptyds").string()), 3);
}
