// hydrosurr: command-line front end for the surrogate pipeline.
//
// Exit codes: 0 success, 1 I/O or unexpected failure, 2 configuration error,
// 3 data error, 4 numeric failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "hydrosurr/bench/bench.hpp"
#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/log.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/dataset/bundle.hpp"
#include "hydrosurr/dataset/oracle.hpp"
#include "hydrosurr/geometry/mesh.hpp"
#include "hydrosurr/geometry/patches.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"
#include "hydrosurr/geometry/vehicle.hpp"
#include "hydrosurr/model/ablation.hpp"
#include "hydrosurr/model/inference.hpp"
#include "hydrosurr/model/metrics.hpp"
#include "hydrosurr/model/serialize.hpp"
#include "hydrosurr/model/train.hpp"
#include "hydrosurr/sdf/grid.hpp"
#include "hydrosurr/simd/kernels.hpp"
#include "hydrosurr/validation/suite.hpp"
#include "hydrosurr/validation/synthetic.hpp"

#ifndef HYDROSURR_DEFAULTS_PATH
#define HYDROSURR_DEFAULTS_PATH "data/defaults.json"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hydrosurr;

namespace {

struct Globals {
    std::string defaults_path = HYDROSURR_DEFAULTS_PATH;
    std::string out;
    unsigned jobs = 1;
    std::string isa;
};

json load_defaults(const Globals& g) {
    if (!fs::exists(g.defaults_path)) throw ConfigError("defaults file not found: " + g.defaults_path);
    return geometry::read_json_file(g.defaults_path);
}

/// --out, else HYDROSURR_OUTPUT_DIR, else `fallback`.
fs::path output_dir(const Globals& g, const std::string& fallback) {
    if (!g.out.empty()) return g.out;
    if (const char* env = std::getenv("HYDROSURR_OUTPUT_DIR"); env && *env) return env;
    return fallback;
}

json provenance(const std::string& command, std::uint64_t seed, const json& config) {
    return {{"command", command}, {"seed", seed}, {"config", config}};
}

model::Variant variant_of(const model::Surrogate& m) { return model::parse_variant(m.variant); }

/// Geometry the model was trained on: merged tessellation for the merged variant.
geometry::VehicleGeometry model_geometry(const model::Surrogate& m, const geometry::VehicleGeometry& g) {
    return variant_of(m) == model::Variant::merged ? model::merge_geometry(g) : g;
}

geometry::VehicleGeometry geometry_from_args(const std::string& geometry_path, const std::string& bundle_dir,
                                             const std::string& vehicle) {
    if (!geometry_path.empty()) return geometry::read_vehicle_geometry(geometry_path);
    if (bundle_dir.empty() || vehicle.empty()) throw ConfigError("give --geometry, or --bundle with --vehicle");
    return geometry::read_vehicle_geometry(fs::path(bundle_dir) / "geometry" / (vehicle + ".json"));
}

geometry::VehicleGeometry geometry_from_spec(const fs::path& spec_path) {
    const auto spec = geometry::read_vehicle_spec(spec_path);
    const auto mesh = geometry::load_mesh(spec.mesh_path, spec.load_transform);
    return geometry::prepare_geometry(spec, mesh, geometry::read_patch_labels(spec.labels_path));
}

// ---------------------------------------------------------------- toy

void cmd_toy(const Globals& g, const std::vector<std::string>& names) {
    const fs::path dir = output_dir(g, "toy");
    fs::create_directories(dir);
    for (const auto& n : names) {
        const auto path = geometry::write_toy_vehicle(dir, geometry::toy_vehicle(n));
        std::cout << "wrote " << path.string() << "\n";
    }
}

// ---------------------------------------------------------------- prepare

void cmd_prepare(const Globals& g, const std::string& spec_path, bool force) {
    const json defaults = load_defaults(g);
    const auto spec = geometry::read_vehicle_spec(spec_path);
    const auto mesh = geometry::load_mesh(spec.mesh_path, spec.load_transform);
    const std::uint32_t hash = geometry::mesh_hash(mesh);
    const fs::path dir = output_dir(g, "prepared") / spec.name;
    const fs::path grid_path = dir / "sdf.hsdf", geom_path = dir / "geometry.json";

    if (fs::exists(grid_path) && fs::exists(geom_path) && !force) {
        const auto old = geometry::read_json_file(geom_path);
        const auto old_hash = old.value("mesh_hash", std::uint32_t{0});
        const auto grid = sdf::load_grid(grid_path);
        if (old_hash == hash && grid.mesh_hash == hash) {
            std::cout << spec.name << ": up to date (mesh hash " << hash << ")\n";
            return;
        }
        throw DataError(spec.name + ": existing grid was built from a different mesh (hash " +
                        std::to_string(grid.mesh_hash) + ", mesh now " + std::to_string(hash) +
                        "); rerun with --force to rebuild");
    }
    const auto labels = geometry::read_patch_labels(spec.labels_path);
    const auto geom = geometry::prepare_geometry(spec, mesh, labels);
    const double margin = defaults.at("sdf").value("margin", sdf::kDefaultMargin);
    const auto grid = sdf::build_grid(mesh, margin, g.jobs);
    fs::create_directories(dir);
    sdf::save_grid(grid_path, grid);
    geometry::write_vehicle_geometry(geom_path, geom);
    json patches = json::array();
    for (const auto& p : geom.patches) patches.push_back(geometry::patch_to_json(p, false));
    geometry::write_json_file(dir / "patches.json",
                              {{"vehicle", spec.name}, {"mesh_hash", hash}, {"patches", patches},
                               {"provenance", provenance("prepare", spec.sample_seed, {{"margin", margin}})}});
    std::cout << spec.name << ": grid " << grid.dims[0] << "x" << grid.dims[1] << "x" << grid.dims[2] << " spacing "
              << grid.spacing << " m, " << geom.K() << " patches -> " << dir.string() << "\n";
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::vector<std::string> specs;
    std::size_t n_cases = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string campaign_path;
    bool no_augment = false;
};

void cmd_generate(const Globals& g, const GenerateArgs& a) {
    const json defaults = load_defaults(g);
    const std::size_t n = a.n_cases ? a.n_cases : defaults.value("n_cases", std::size_t{175});
    const std::uint64_t seed = a.seed_set ? a.seed : defaults.value("seed", std::uint64_t{2024});
    const json overrides = a.campaign_path.empty() ? json::object() : geometry::read_json_file(a.campaign_path);

    dataset::BuildOptions opt;
    const json& b = defaults.at("build");
    opt.t_cut = b.value("t_cut", opt.t_cut);
    opt.n_sections = b.value("n_sections", opt.n_sections);
    opt.augment = b.value("augment", opt.augment) && !a.no_augment;
    opt.train_fraction = b.value("train_fraction", opt.train_fraction);
    opt.split_seed = b.value("split_seed", opt.split_seed);
    opt.jobs = g.jobs;

    std::vector<geometry::VehicleGeometry> geoms;
    std::vector<std::vector<dataset::CaseRecord>> cases;
    json campaigns = json::object();
    for (std::size_t v = 0; v < a.specs.size(); ++v) {
        auto geom = geometry_from_spec(a.specs[v]);
        const auto& name = geom.spec.name;
        auto cfg = dataset::default_campaign(name);
        if (defaults.at("campaign").contains(name))
            cfg = dataset::campaign_from_json(defaults.at("campaign").at(name), cfg);
        if (overrides.contains(name)) cfg = dataset::campaign_from_json(overrides.at(name), cfg);
        cfg.validate();
        campaigns[name] = dataset::to_json(cfg);
        cases.push_back(dataset::generate_campaign(geom, cfg, n, derive_seed(seed, v), g.jobs));
        geoms.push_back(std::move(geom));
    }
    auto bundle = dataset::build_bundle(geoms, cases, opt);
    bundle.manifest["provenance"] = provenance("generate", seed, {{"n_cases", n}, {"campaign", campaigns}});
    const fs::path dir = output_dir(g, "dataset");
    dataset::write_bundle(dir, bundle, &cases);
    std::cout << "bundle " << dir.string() << ": " << bundle.samples.size() << " samples ("
              << bundle.split.train.size() << " train, " << bundle.split.val.size() << " val)\n";
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string bundle;
    std::string variant = "full";
    std::string config_path;
    int epochs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void cmd_train(const Globals& g, const TrainArgs& a) {
    const json defaults = load_defaults(g);
    auto cfg = model::TrainConfig::from_json(defaults.at("train"), model::TrainConfig{});
    if (!a.config_path.empty()) cfg = model::TrainConfig::from_json(geometry::read_json_file(a.config_path), cfg);
    if (a.epochs > 0) cfg.epochs = a.epochs;
    if (a.seed_set) cfg.seed = a.seed;
    const auto variant = model::parse_variant(a.variant);
    const auto bundle = dataset::read_bundle(a.bundle);

    const auto run = model::train_variant(bundle, variant, cfg, [](const model::EpochLog& e) {
        std::ostringstream s;
        s << "epoch " << e.epoch << " lr " << e.lr << " train " << e.train.total << " val " << e.val.total
          << " val_mae " << e.val_mae;
        log::info(s.str());
    });
    const fs::path dir = output_dir(g, "model");
    fs::create_directories(dir);
    model::save_weights(dir / "model.hsrg", run.result.model);
    model::write_train_log(dir / "train_log.csv", run.result.history);
    geometry::write_json_file(dir / "train_summary.json",
                              {{"variant", model::to_string(variant)},
                               {"best_epoch", run.result.best_epoch},
                               {"best_val_loss", run.result.best_val},
                               {"epochs_run", run.result.history.size()},
                               {"train_samples", run.train_set.samples()},
                               {"val_samples", run.val_set.samples()},
                               {"bundle", fs::absolute(a.bundle).string()},
                               {"provenance", provenance("train", cfg.seed, cfg.to_json())}});
    std::cout << "model " << (dir / "model.hsrg").string() << ": best epoch " << run.result.best_epoch
              << ", val loss " << run.result.best_val << "\n";
}

// ---------------------------------------------------------------- eval

void cmd_eval(const Globals& g, const std::string& model_path, const std::string& bundle_dir, const std::string& split) {
    const auto m = model::load_weights(model_path);
    const auto variant = variant_of(m);
    auto bundle = dataset::read_bundle(bundle_dir);
    if (variant == model::Variant::merged) bundle = model::merge_bundle(bundle);
    std::vector<std::size_t> subset;
    if (split == "val") subset = bundle.split.val;
    else if (split == "train") subset = bundle.split.train;
    else if (split == "all")
        for (std::size_t i = 0; i < bundle.samples.size(); ++i) subset.push_back(i);
    else throw ConfigError("unknown split '" + split + "' (train | val | all)");

    const auto opts = model::feature_options(variant);
    const auto set = model::build_feature_set(bundle, subset, m.stats, opts);
    model::check_compatible(m, set.surface_dim, set.global_dim);
    json reports = json::array();
    for (const auto& block : set.blocks) {
        const auto r = opts.global_only ? model::evaluate_net_only(m, block) : model::evaluate_metrics(m, block);
        reports.push_back(model::to_json(r));
        const auto& net = r.net;
        std::printf("%-14s n=%-6zu Fx MAE %.4g N sMAPE %.2f%% | Fz MAE %.4g N sMAPE %.2f%%\n", block.vehicle.c_str(),
                    net.n, net.mae[0], net.smape[0], net.mae[2], net.smape[2]);
    }
    json out{{"variant", m.variant}, {"split", split}, {"vehicles", reports},
             {"provenance", provenance("eval", 0, json::parse(m.config_fingerprint.empty() ? "{}" : m.config_fingerprint))}};
    if (!opts.global_only) {
        const auto dry = model::dry_surface_stats(m, set);
        out["dry_surfaces"] = {{"dry_mean", dry.dry_mean}, {"wet_mean", dry.wet_mean}, {"dry", dry.dry}, {"wet", dry.wet}};
    }
    const fs::path dir = output_dir(g, "eval");
    fs::create_directories(dir);
    geometry::write_json_file(dir / "metrics.json", out);
    std::cout << "report " << (dir / "metrics.json").string() << "\n";
}

// ---------------------------------------------------------------- traces

struct TracesArgs {
    std::string geometry, bundle, vehicle;
    std::vector<double> depths, speeds;
    std::uint64_t seed = 0;
    bool dry = false;
};

void cmd_traces(const Globals& g, const TracesArgs& a) {
    const json defaults = load_defaults(g);
    const json& vc = defaults.at("validation_campaign");
    const auto geom = geometry_from_args(a.geometry, a.bundle, a.vehicle);
    auto depths = a.depths.empty() ? vc.at("depths").get<std::vector<double>>() : a.depths;
    if (a.dry) depths = {0.0};
    const auto speeds = a.speeds.empty() ? vc.at("speeds").get<std::vector<double>>() : a.speeds;
    const fs::path dir = output_dir(g, "traces");
    fs::create_directories(dir);
    std::size_t k = 0;
    for (double d : depths)
        for (double u : speeds) {
            validation::SyntheticTrial t;
            char id[64];
            std::snprintf(id, sizeof id, "d%03d_u%03d", static_cast<int>(d * 1000 + 0.5), static_cast<int>(u * 100 + 0.5));
            t.id = id;
            t.depth = d;
            t.speed = u;
            t.direction = k % 2 == 0 ? validation::Direction::ramp_in : validation::Direction::ramp_out;
            t.rate = vc.value("rate", t.rate);
            t.jitter = vc.value("jitter", t.jitter);
            t.seed = derive_seed(a.seed, k++);
            validation::write_trace_csv(dir / (t.id + ".csv"), validation::synthetic_trial(t, geom.spec));
        }
    std::cout << "wrote " << k << " traces to " << dir.string() << "\n";
}

// ---------------------------------------------------------------- validate

std::vector<validation::TrialTrace> load_traces(const std::vector<std::string>& paths) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            for (const auto& e : fs::directory_iterator(p))
                if (e.path().extension() == ".csv") files.push_back(e.path());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<validation::TrialTrace> out;
    for (const auto& f : files) out.push_back(validation::read_trace_csv(f));
    if (out.empty()) throw DataError("no trace files found");
    return out;
}

void cmd_validate(const Globals& g, const std::string& model_path, const TracesArgs& where,
                  const std::vector<std::string>& trace_paths, const std::string& config_path, bool f32) {
    const json defaults = load_defaults(g);
    auto cfg = validation::suite_config_from_json(defaults.at("validation"));
    if (!config_path.empty()) cfg = validation::suite_config_from_json(geometry::read_json_file(config_path), cfg);
    cfg.jobs = g.jobs;
    if (f32) cfg.precision = model::Precision::f32;
    const auto m = model::load_weights(model_path);
    const auto geom = model_geometry(m, geometry_from_args(where.geometry, where.bundle, where.vehicle));
    const auto traces = load_traces(trace_paths);
    const auto rep = validation::run_validation_suite(m, geom, traces, cfg);

    json out = validation::to_json(rep, cfg);
    out["provenance"] = provenance("validate", 0, {{"model", fs::absolute(model_path).string()}, {"traces", traces.size()}});
    const fs::path dir = output_dir(g, "validation");
    fs::create_directories(dir);
    geometry::write_json_file(dir / "report.json", out);
    validation::write_plot_data(dir / "plot_points.csv", rep);

    for (const auto& d : rep.drag) {
        if (d.degenerate) std::printf("drag  d=%.4f m  degenerate\n", d.depth);
        else std::printf("drag  d=%.4f m  C_D,eff %.4g  R2 %.4f  n %zu  C_D %.3f\n", d.depth, d.fit.coef, d.fit.r2, d.fit.n, d.cd);
    }
    for (const auto& p : rep.pairs)
        std::printf("pairs %.4f/%.4f  n %zu  mean %.4f  fit %.4f  dev %.2f%%\n", p.depth_b, p.depth_a, p.n_pairs,
                    p.mean_ratio, p.fit_ratio, p.deviation_pct);
    for (const auto& f : rep.vertical.per_depth)
        std::printf("vert  d=%.4f m  F0 %.4g N  C_L %.4g  R2 %.4f\n", f.depth, f.intercept, f.coef, f.r2);
    if (rep.vertical.cross_checked) std::printf("F0 vs depth R2 %.4f\n", rep.vertical.f0_vs_depth.r2);
    for (const auto& f : rep.flags) std::printf("flag: %s\n", f.c_str());
    std::printf("drag %s | pairs %s | buoyancy %s\n", rep.drag_pass ? "PASS" : "FAIL", rep.pairs_pass ? "PASS" : "FAIL",
                rep.buoyancy_pass ? "PASS" : "FAIL");
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string model;
    TracesArgs where;
    bool f32 = false;
    std::size_t iterations = 0;
    double sustained = -1.0;
    std::string mode = "constant";
    double speed = 1.0, depth = 0.2;
};

void cmd_bench(const Globals& g, const BenchArgs& a) {
    const json defaults = load_defaults(g);
    const json& bd = defaults.at("bench");
    const auto m = model::load_weights(a.model);
    const auto geom = model_geometry(m, geometry_from_args(a.where.geometry, a.where.bundle, a.where.vehicle));
    model::InferencePipeline pipe(m, geom, a.f32 ? model::Precision::f32 : model::Precision::f64);
    bench::BenchOptions opt;
    opt.warmup = bd.value("warmup", opt.warmup);
    opt.iterations = a.iterations ? a.iterations : bd.value("iterations", opt.iterations);
    model::InferenceInput in;
    in.v = {a.speed, 0.0, 0.0};
    in.depth = a.depth;
    const std::vector<model::InferenceInput> inputs{in};
    const auto single = bench::bench_single(pipe, inputs, opt);
    const double sustained_s = a.sustained >= 0.0 ? a.sustained : bd.value("sustained_s", 10.0);

    const fs::path dir = output_dir(g, "bench");
    fs::create_directories(dir);
    json out{{"vehicle", geom.spec.name},
             {"K", pipe.rows()},
             {"single", bench::to_json(single.stats)},
             {"provenance", provenance("bench", 0, {{"iterations", opt.iterations}, {"warmup", opt.warmup}})}};
    bench::write_durations_csv(dir / "durations_single.csv", single.durations_ms);
    const auto& s = single.stats;
    std::printf("%s K=%zu %s: mean %.4f ms  std %.4f  median %.4f  p95 %.4f  p99 %.4f  (n=%zu)\n",
                geom.spec.name.c_str(), pipe.rows(), s.precision.c_str(), s.mean_ms, s.std_ms, s.median_ms, s.p95_ms,
                s.p99_ms, s.n);
    if (sustained_s > 0.0) {
        const auto sus = bench::bench_sustained(pipe, in, sustained_s, bench::parse_input_mode(a.mode));
        out["sustained"] = bench::to_json(sus);
        bench::write_durations_csv(dir / "durations_sustained.csv", sus.durations_ms);
        std::printf("sustained %.1f s (%s): %.0f Hz, p99 %.4f ms\n", sus.duration_s, a.mode.c_str(), sus.rate_hz,
                    sus.stats.p99_ms);
    }
    geometry::write_json_file(dir / "latency.json", out);
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::config: return 2;
        case ErrorKind::data: return 3;
        case ErrorKind::numeric: return 4;
        case ErrorKind::io: return 1;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hydrosurr: per-surface hydrodynamic force surrogate toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--defaults", g.defaults_path, "Defaults file")->capture_default_str();
    app.add_option("-o,--out", g.out, "Output directory (else $HYDROSURR_OUTPUT_DIR, else a per-command default)");
    app.add_option("-j,--jobs", g.jobs, "Worker threads for parallel stages")->check(CLI::PositiveNumber);
    app.add_option("--isa", g.isa, "Force kernel ISA")->check(CLI::IsMember({"scalar", "avx2"}));

    std::vector<std::string> toy_names{"mini-husky", "mini-warthog"};
    auto* toy = app.add_subcommand("toy", "Write the procedural toy vehicles (STL, labels, spec)");
    toy->add_option("--vehicle", toy_names, "mini-husky and/or mini-warthog");

    std::string spec_path;
    bool force = false;
    auto* prep = app.add_subcommand("prepare", "Build the SDF grid and patch descriptors for a vehicle");
    prep->add_option("--spec", spec_path, "Vehicle spec JSON")->required()->check(CLI::ExistingFile);
    prep->add_flag("--force", force, "Rebuild even when existing outputs came from a different mesh");

    GenerateArgs gen;
    auto* genc = app.add_subcommand("generate", "Run the synthetic oracle campaign and write a dataset bundle");
    genc->add_option("--spec", gen.specs, "Vehicle spec JSON (repeatable)")->required()->check(CLI::ExistingFile);
    genc->add_option("-n,--cases", gen.n_cases, "Cases per vehicle");
    auto* gen_seed = genc->add_option("--seed", gen.seed, "Campaign seed");
    genc->add_option("--campaign", gen.campaign_path, "Per-vehicle range overrides JSON")->check(CLI::ExistingFile);
    genc->add_flag("--no-augment", gen.no_augment, "Skip symmetry augmentation");

    TrainArgs tr;
    auto* trc = app.add_subcommand("train", "Train a model variant on a bundle");
    trc->add_option("--bundle", tr.bundle, "Dataset bundle directory")->required()->check(CLI::ExistingDirectory);
    trc->add_option("--variant", tr.variant, "full | no_dims | merged | global_only")->capture_default_str();
    trc->add_option("--config", tr.config_path, "Training config overrides JSON")->check(CLI::ExistingFile);
    trc->add_option("--epochs", tr.epochs, "Epoch count override");
    auto* tr_seed = trc->add_option("--seed", tr.seed, "Initialization and shuffling seed");

    std::string model_path, bundle_dir, split = "val";
    auto* ev = app.add_subcommand("eval", "Net-force and per-surface metrics on a bundle split");
    ev->add_option("--model", model_path, "Weight file")->required()->check(CLI::ExistingFile);
    ev->add_option("--bundle", bundle_dir, "Dataset bundle directory")->required()->check(CLI::ExistingDirectory);
    ev->add_option("--split", split, "train | val | all")->capture_default_str();

    TracesArgs ta;
    auto* trcs = app.add_subcommand("traces", "Write synthetic ramp-flat-ramp wading traces");
    trcs->add_option("--geometry", ta.geometry, "Vehicle geometry JSON");
    trcs->add_option("--bundle", ta.bundle, "Bundle holding the geometry");
    trcs->add_option("--vehicle", ta.vehicle, "Vehicle name within the bundle");
    trcs->add_option("--depths", ta.depths, "Quiescent depths (m)")->delimiter(',');
    trcs->add_option("--speeds", ta.speeds, "Horizontal speeds (m/s)")->delimiter(',');
    trcs->add_option("--seed", ta.seed, "Timestamp jitter seed");
    trcs->add_flag("--dry", ta.dry, "Zero-depth traces");

    TracesArgs va;
    std::vector<std::string> trace_paths;
    std::string val_config;
    bool val_f32 = false;
    std::string val_model;
    auto* val = app.add_subcommand("validate", "Physics tests on surrogate predictions along wading traces");
    val->add_option("--model", val_model, "Weight file")->required()->check(CLI::ExistingFile);
    val->add_option("--geometry", va.geometry, "Vehicle geometry JSON");
    val->add_option("--bundle", va.bundle, "Bundle holding the geometry");
    val->add_option("--vehicle", va.vehicle, "Vehicle name within the bundle");
    val->add_option("--traces", trace_paths, "Trace CSV files or directories")->required();
    val->add_option("--config", val_config, "Validation config overrides JSON")->check(CLI::ExistingFile);
    val->add_flag("--f32", val_f32, "Single-precision forward pass");

    BenchArgs ba;
    auto* be = app.add_subcommand("bench", "Single-sample latency and sustained-loop rate");
    be->add_option("--model", ba.model, "Weight file")->required()->check(CLI::ExistingFile);
    be->add_option("--geometry", ba.where.geometry, "Vehicle geometry JSON");
    be->add_option("--bundle", ba.where.bundle, "Bundle holding the geometry");
    be->add_option("--vehicle", ba.where.vehicle, "Vehicle name within the bundle");
    be->add_flag("--f32", ba.f32, "Single-precision forward pass");
    be->add_option("--iters", ba.iterations, "Timed iterations (>= 1000)");
    be->add_option("--sustained", ba.sustained, "Sustained loop length (s); 0 skips");
    be->add_option("--mode", ba.mode, "constant | time-varying")->capture_default_str();
    be->add_option("--speed", ba.speed, "Forward speed (m/s)")->capture_default_str();
    be->add_option("--depth", ba.depth, "Quiescent depth (m)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (g.isa == "scalar") simd::force_isa(simd::Isa::scalar);
        else if (g.isa == "avx2") simd::force_isa(simd::Isa::avx2);
        if (*toy) cmd_toy(g, toy_names);
        else if (*prep) cmd_prepare(g, spec_path, force);
        else if (*genc) {
            gen.seed_set = gen_seed->count() > 0;
            cmd_generate(g, gen);
        } else if (*trc) {
            tr.seed_set = tr_seed->count() > 0;
            cmd_train(g, tr);
        } else if (*ev) cmd_eval(g, model_path, bundle_dir, split);
        else if (*trcs) cmd_traces(g, ta);
        else if (*val) cmd_validate(g, val_model, va, trace_paths, val_config, val_f32);
        else if (*be) cmd_bench(g, ba);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
