#include <gtest/gtest.h>

#include <cstring>
#include <numeric>

#include "hydrosurr/bench/bench.hpp"
#include "hydrosurr/core/error.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"
#include "hydrosurr/model/inference.hpp"

using namespace hydrosurr;
using namespace hydrosurr::bench;

namespace {

model::Surrogate toy_model() {
    model::Surrogate m;
    m.hidden = 64;
    m.resize();
    m.init_he_uniform(3);
    m.stats.mu_G.assign(12, 0.0);
    m.stats.sigma_G.assign(12, 1.0);
    m.feature_schema = features::kSchemaVersion;
    return m;
}

}  // namespace

TEST(Stats, QuantilesInterpolate) {
    const std::vector<double> s{1, 2, 3, 4, 5};
    EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.95), 4.8);
    EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(s, 1.0), 5.0);
}

TEST(Stats, SummaryOfKnownSeries) {
    std::vector<double> d(101);
    std::iota(d.begin(), d.end(), 0.0);
    const auto s = compute_stats(d);
    EXPECT_EQ(s.n, 101u);
    EXPECT_DOUBLE_EQ(s.mean_ms, 50.0);
    EXPECT_DOUBLE_EQ(s.median_ms, 50.0);
    EXPECT_DOUBLE_EQ(s.p95_ms, 95.0);
    EXPECT_DOUBLE_EQ(s.p99_ms, 99.0);
    EXPECT_DOUBLE_EQ(s.min_ms, 0.0);
    EXPECT_DOUBLE_EQ(s.max_ms, 100.0);
    EXPECT_NEAR(s.std_ms, std::sqrt((101.0 * 101.0 - 1.0) / 12.0), 1e-12);
    EXPECT_THROW(compute_stats(std::vector<double>(99, 1.0)), ConfigError);
}

TEST(Bench, TimerIsFineEnough) { EXPECT_LE(timer_resolution(), 10e-6); }

TEST(Bench, TimedOutputsBitIdenticalToUntimed) {
    const auto g = geometry::prepare_toy(geometry::mini_warthog());
    model::InferencePipeline timed(toy_model(), g), plain(toy_model(), g);
    std::vector<model::InferenceInput> inputs(3);
    inputs[0].v = {1.0, 0, 0};
    inputs[0].depth = 0.2;
    inputs[1].v = {2.0, 0.3, 0};
    inputs[1].depth = 0.3;
    inputs[2].v = {0.5, 0, 0};
    inputs[2].depth = 0.1;
    BenchOptions opt;
    opt.warmup = 10;
    const auto r = bench_single(timed, inputs, opt);
    EXPECT_EQ(r.durations_ms.size(), 1000u);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& f = plain.predict(inputs[i]);
        ASSERT_EQ(f.size(), r.outputs[i].size());
        EXPECT_EQ(std::memcmp(f.data(), r.outputs[i].data(), f.size() * sizeof(Vec3)), 0);
    }
    opt.iterations = 10;
    EXPECT_THROW(bench_single(timed, inputs, opt), ConfigError);
}

TEST(Bench, SustainedModes) {
    const auto g = geometry::prepare_toy(geometry::mini_warthog());
    model::InferencePipeline p(toy_model(), g);
    model::InferenceInput base;
    base.v = {1.0, 0, 0};
    base.depth = 0.2;
    const auto r = bench_sustained(p, base, 0.3, InputMode::time_varying);
    EXPECT_GT(r.iterations, 100u);
    EXPECT_GT(r.rate_hz, 0.0);
    EXPECT_EQ(parse_input_mode("time-varying"), InputMode::time_varying);
    EXPECT_EQ(to_string(InputMode::constant), "constant");
}
