#include "hydrosurr/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/simd/cpu.hpp"
#include "hydrosurr/simd/kernels.hpp"

namespace hydrosurr::bench {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0, Clock::time_point t1) {
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void check_timer() {
    const double res = timer_resolution();
    if (res > 10e-6)
        throw ConfigError("monotonic clock resolution " + std::to_string(res * 1e6) + " us is coarser than 10 us");
}

}  // namespace

double quantile_sorted(std::span<const double> s, double q) {
    if (s.empty()) throw DataError("quantile of an empty sample");
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return s[lo] + (s[hi] - s[lo]) * frac;
}

LatencyStats compute_stats(std::span<const double> d) {
    if (d.size() < 100) throw ConfigError("latency statistics need at least 100 samples, got " + std::to_string(d.size()));
    std::vector<double> s(d.begin(), d.end());
    std::sort(s.begin(), s.end());
    LatencyStats st;
    st.n = s.size();
    double sum = 0.0;
    for (double v : d) sum += v;
    st.mean_ms = sum / static_cast<double>(st.n);
    double ss = 0.0;
    for (double v : d) ss += (v - st.mean_ms) * (v - st.mean_ms);
    st.std_ms = std::sqrt(ss / static_cast<double>(st.n));
    st.median_ms = quantile_sorted(s, 0.5);
    st.p95_ms = quantile_sorted(s, 0.95);
    st.p99_ms = quantile_sorted(s, 0.99);
    st.min_ms = s.front();
    st.max_ms = s.back();
    return st;
}

double timer_resolution() {
    double best = std::chrono::duration<double>(Clock::duration(1)).count();
    double observed = 1.0;
    for (int i = 0; i < 50; ++i) {
        const auto t0 = Clock::now();
        auto t1 = Clock::now();
        while (t1 == t0) t1 = Clock::now();
        observed = std::min(observed, std::chrono::duration<double>(t1 - t0).count());
    }
    return std::max(best, observed);
}

std::string machine_descriptor() {
    return simd::cpu_model_name() + " / " + std::string(simd::isa_name(simd::active_kernels().isa));
}

BenchResult bench_single(model::InferencePipeline& pipe, std::span<const model::InferenceInput> inputs,
                         const BenchOptions& o) {
    if (inputs.empty()) throw ConfigError("bench needs at least one input");
    if (o.iterations < 1000) throw ConfigError("bench needs at least 1000 timed iterations");
    check_timer();
    for (std::size_t i = 0; i < o.warmup; ++i) pipe.predict(inputs[i % inputs.size()]);

    BenchResult r;
    r.durations_ms.resize(o.iterations);
    r.outputs.resize(inputs.size());
    for (std::size_t i = 0; i < o.iterations; ++i) {
        const auto& in = inputs[i % inputs.size()];
        const auto t0 = Clock::now();
        const auto& f = pipe.predict(in);
        const auto t1 = Clock::now();
        r.durations_ms[i] = ms_since(t0, t1);
        r.outputs[i % inputs.size()] = f;
    }
    r.stats = compute_stats(r.durations_ms);
    r.stats.precision = std::string(model::to_string(pipe.precision()));
    r.stats.machine = machine_descriptor();
    return r;
}

std::string to_string(InputMode m) { return m == InputMode::constant ? "constant" : "time-varying"; }

InputMode parse_input_mode(const std::string& s) {
    if (s == "constant") return InputMode::constant;
    if (s == "time-varying") return InputMode::time_varying;
    throw ConfigError("unknown input mode '" + s + "' (constant | time-varying)");
}

SustainedResult bench_sustained(model::InferencePipeline& pipe, const model::InferenceInput& base, double duration_s,
                                InputMode mode) {
    if (!(duration_s > 0.0)) throw ConfigError("sustained duration must be positive");
    check_timer();
    SustainedResult r;
    r.mode = mode;
    model::InferenceInput in = base;
    const auto start = Clock::now();
    const auto stop = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(duration_s));
    auto now = start;
    while (now < stop) {
        if (mode == InputMode::time_varying) {
            const double t = std::chrono::duration<double>(now - start).count();
            in.v = base.v * (1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * 0.5 * t));
            in.depth = base.depth * (1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * 0.3 * t));
            if (!std::isnan(base.z_water)) in.z_water = base.z_water + (in.depth - base.depth);
        }
        const auto t0 = Clock::now();
        pipe.predict(in);
        now = Clock::now();
        r.durations_ms.push_back(ms_since(t0, now));
    }
    r.duration_s = std::chrono::duration<double>(now - start).count();
    r.iterations = r.durations_ms.size();
    r.rate_hz = static_cast<double>(r.iterations) / r.duration_s;
    r.stats = compute_stats(r.durations_ms);
    r.stats.precision = std::string(model::to_string(pipe.precision()));
    r.stats.machine = machine_descriptor();
    return r;
}

nlohmann::json to_json(const LatencyStats& s) {
    return {{"n", s.n},           {"mean_ms", s.mean_ms},     {"std_ms", s.std_ms}, {"median_ms", s.median_ms},
            {"p95_ms", s.p95_ms}, {"p99_ms", s.p99_ms},       {"min_ms", s.min_ms}, {"max_ms", s.max_ms},
            {"precision", s.precision}, {"machine", s.machine}};
}

nlohmann::json to_json(const SustainedResult& r) {
    return {{"mode", to_string(r.mode)}, {"duration_s", r.duration_s}, {"iterations", r.iterations},
            {"rate_hz", r.rate_hz},      {"stats", to_json(r.stats)}};
}

void write_durations_csv(const std::filesystem::path& path, std::span<const double> d) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << std::setprecision(17) << "duration_ms\n";
    for (double v : d) f << v << '\n';
    if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace hydrosurr::bench
