#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "hydrosurr/model/inference.hpp"

namespace hydrosurr::bench {

struct LatencyStats {
    std::size_t n = 0;
    double mean_ms = 0.0;
    double std_ms = 0.0;
    double median_ms = 0.0;
    double p95_ms = 0.0;
    double p99_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
    std::string precision;
    std::string machine;
};

/// Linear-interpolation quantile at position q (n-1) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);
/// Population standard deviation; throws ConfigError below 100 samples.
LatencyStats compute_stats(std::span<const double> durations_ms);

/// Smallest observed nonzero step of the monotonic clock (s).
double timer_resolution();
/// "<cpu model> / <isa>".
std::string machine_descriptor();

struct BenchOptions {
    std::size_t warmup = 100;
    std::size_t iterations = 1000;
};

struct BenchResult {
    LatencyStats stats;
    std::vector<double> durations_ms;
    /// Forces from the last timed call on each input.
    std::vector<std::vector<Vec3>> outputs;
};

/// Times the full input-to-forces path, cycling through `inputs`.
BenchResult bench_single(model::InferencePipeline& pipeline, std::span<const model::InferenceInput> inputs,
                         const BenchOptions& options = {});

enum class InputMode { constant, time_varying };
std::string to_string(InputMode m);
InputMode parse_input_mode(const std::string& s);

struct SustainedResult {
    InputMode mode = InputMode::constant;
    double duration_s = 0.0;
    std::size_t iterations = 0;
    double rate_hz = 0.0;
    LatencyStats stats;
    std::vector<double> durations_ms;
};

/// Back-to-back inference for `duration_s` seconds. Time-varying mode modulates
/// speed and depth sinusoidally around `base`.
SustainedResult bench_sustained(model::InferencePipeline& pipeline, const model::InferenceInput& base,
                                double duration_s, InputMode mode);

nlohmann::json to_json(const LatencyStats& s);
nlohmann::json to_json(const SustainedResult& r);
/// One duration (ms) per line under a "duration_ms" header.
void write_durations_csv(const std::filesystem::path& path, std::span<const double> durations_ms);

}  // namespace hydrosurr::bench
