#include "hydrosurr/validation/suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/log.hpp"
#include "hydrosurr/core/parallel.hpp"
#include "hydrosurr/validation/kinematics.hpp"

namespace hydrosurr::validation {

SuiteConfig suite_config_from_json(const nlohmann::json& j, const SuiteConfig& d) {
    SuiteConfig c = d;
    try {
        c.resample_rate = j.value("resample_rate", d.resample_rate);
        c.kinematics.window = j.value("sg_window", d.kinematics.window);
        c.kinematics.polyorder = j.value("sg_polyorder", d.kinematics.polyorder);
        c.sections.min_duration = j.value("min_section_duration", d.sections.min_duration);
        c.sections.vz_limit = j.value("vz_limit", d.sections.vz_limit);
        c.speed_tol = j.value("pair_speed_tol", d.speed_tol);
        c.min_speed = j.value("pair_min_speed", d.min_speed);
        c.bin_width = j.value("speed_bin_width", d.bin_width);
        c.rho = j.value("rho", d.rho);
        c.width = j.value("width", d.width);
        c.thresholds.drag_r2 = j.value("drag_r2_min", d.thresholds.drag_r2);
        c.thresholds.f0_depth_r2 = j.value("f0_depth_r2_min", d.thresholds.f0_depth_r2);
        c.thresholds.pair_deviation_pct = j.value("pair_deviation_pct_max", d.thresholds.pair_deviation_pct);
        if (j.contains("precision")) {
            const auto p = j.at("precision").get<std::string>();
            if (p != "f64" && p != "f32") throw ConfigError("validation config: precision must be f64 or f32");
            c.precision = p == "f32" ? model::Precision::f32 : model::Precision::f64;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("validation config: ") + e.what());
    }
    return c;
}

nlohmann::json to_json(const SuiteConfig& c) {
    return {{"resample_rate", c.resample_rate},
            {"sg_window", c.kinematics.window},
            {"sg_polyorder", c.kinematics.polyorder},
            {"min_section_duration", c.sections.min_duration},
            {"vz_limit", c.sections.vz_limit},
            {"pair_speed_tol", c.speed_tol},
            {"pair_min_speed", c.min_speed},
            {"speed_bin_width", c.bin_width},
            {"rho", c.rho},
            {"width", c.width},
            {"precision", std::string(model::to_string(c.precision))},
            {"drag_r2_min", c.thresholds.drag_r2},
            {"f0_depth_r2_min", c.thresholds.f0_depth_r2},
            {"pair_deviation_pct_max", c.thresholds.pair_deviation_pct}};
}

SuiteReport run_validation_suite(const model::Surrogate& model, const geometry::VehicleGeometry& geometry,
                                 std::span<const TrialTrace> traces, const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.trials.resize(traces.size());
    double min_sample_z = std::numeric_limits<double>::infinity();
    for (const auto& p : geometry.patches)
        for (double z : p.depth_samples) min_sample_z = std::min(min_sample_z, z);

    parallel_for(traces.size(), cfg.jobs, [&](std::size_t i) {
        const TrialTrace& raw = traces[i];
        TrialOutcome& out = rep.trials[i];
        out.id = raw.id;
        out.depth = raw.depth;
        out.direction = raw.direction;
        const TrialTrace uniform = resample_uniform(raw, cfg.resample_rate);
        const Kinematics k = compute_kinematics(uniform, geometry.spec, cfg.kinematics);
        auto sections = extract_planar_sections(k, cfg.sections);
        out.n_sections = sections.size();
        if (sections.empty()) return;
        out.qualifying = true;
        auto best = std::max_element(sections.begin(), sections.end(),
                                     [](const auto& a, const auto& b) { return a.duration < b.duration; });
        PlanarSection s = std::move(*best);

        model::InferencePipeline pipe(model, geometry, cfg.precision);
        out.dry = true;
        for (std::size_t t = s.begin; t < s.end; ++t) {
            model::InferenceInput in;
            in.v = k.v_body[t];
            in.rho = cfg.rho;
            in.depth = raw.depth;
            in.z_water = k.z_water[t];
            const Vec3 f = pipe.predict_net(in);
            s.fx.push_back(f.x);
            s.fz.push_back(f.z);
            s.mean_fx += f.x;
            s.mean_fz += f.z;
            if (k.z_water[t] >= min_sample_z) out.dry = false;
        }
        s.mean_fx /= static_cast<double>(s.fx.size());
        s.mean_fz /= static_cast<double>(s.fz.size());
        out.section = std::move(s);
        out.point = {raw.id, raw.depth, out.section.mean_speed, out.section.mean_v2, std::abs(out.section.mean_fx),
                     out.section.mean_fz};
    });

    std::size_t n_qual = 0;
    for (const auto& t : rep.trials) {
        if (!t.qualifying) continue;
        ++n_qual;
        if (t.dry) rep.flags.push_back("trial " + t.id + " is dry over its planar section; excluded from fits");
        else rep.points.push_back(t.point);
    }
    if (n_qual == 0) {
        rep.flags.push_back("no qualifying planar sections; tests empty");
        return rep;
    }

    // Dry trials still define depths so that a fully dry depth reports a degenerate drag fit.
    std::vector<double> depths;
    for (const auto& t : rep.trials)
        if (t.qualifying && std::none_of(depths.begin(), depths.end(), [&](double d) { return std::abs(d - t.depth) <= 1e-9; }))
            depths.push_back(t.depth);
    std::sort(depths.begin(), depths.end());
    const double width = cfg.width > 0.0 ? cfg.width : geometry.spec.W_ref;
    bool all_fit = true;
    for (double d : depths) {
        DragDepth dd;
        dd.depth = d;
        const auto pts = at_depth(rep.points, d);
        if (pts.size() < 2) {
            dd.degenerate = true;
            rep.flags.push_back("drag fit at depth " + std::to_string(d) + " is degenerate: " +
                                std::to_string(pts.size()) + " wet trial(s)");
        } else {
            try {
                dd.fit = fit_drag(pts);
                dd.cd = d > 0.0 ? physical_cd(dd.fit.coef, cfg.rho, width, d) : 0.0;
            } catch (const Error& e) {
                dd.degenerate = true;
                rep.flags.push_back("drag fit at depth " + std::to_string(d) + " failed: " + e.what());
            }
        }
        all_fit = all_fit && !dd.degenerate && dd.fit.r2 >= cfg.thresholds.drag_r2;
        rep.drag.push_back(dd);
    }
    rep.cd_monotonic = rep.drag.size() >= 2;
    for (std::size_t i = 1; i < rep.drag.size(); ++i)
        rep.cd_monotonic = rep.cd_monotonic && !rep.drag[i].degenerate && !rep.drag[i - 1].degenerate &&
                           rep.drag[i].fit.coef > rep.drag[i - 1].fit.coef;
    rep.drag_pass = all_fit && rep.cd_monotonic;

    rep.pairs = matched_pair_check(rep.points, cfg.speed_tol, cfg.min_speed);
    rep.pairs_pass = !rep.pairs.empty() &&
                     std::all_of(rep.pairs.begin(), rep.pairs.end(), [&](const PairRatio& p) {
                         return p.deviation_pct <= cfg.thresholds.pair_deviation_pct;
                     });
    if (rep.pairs.empty()) rep.flags.push_back("no speed-matched trial pairs");

    try {
        rep.vertical = fit_vertical(rep.points, cfg.bin_width);
        rep.buoyancy_pass = rep.vertical.cross_checked && rep.vertical.monotonic_f0 &&
                            rep.vertical.f0_vs_depth.r2 >= cfg.thresholds.f0_depth_r2;
        if (!rep.vertical.cross_checked) rep.flags.push_back("vertical cross-depth checks skipped: single depth");
    } catch (const Error& e) {
        rep.flags.push_back(std::string("vertical fit failed: ") + e.what());
    }
    return rep;
}

nlohmann::json to_json(const SuiteReport& r, const SuiteConfig& config) {
    nlohmann::json j;
    j["schema"] = "hydrosurr-validation/1";
    j["config"] = to_json(config);
    j["trials"] = nlohmann::json::array();
    for (const auto& t : r.trials) {
        nlohmann::json tj{{"id", t.id},
                          {"depth", t.depth},
                          {"direction", std::string(to_string(t.direction))},
                          {"n_sections", t.n_sections},
                          {"qualifying", t.qualifying},
                          {"dry", t.dry}};
        if (t.qualifying)
            tj["section"] = {{"begin", t.section.begin},         {"end", t.section.end},
                             {"duration", t.section.duration},   {"mean_speed", t.section.mean_speed},
                             {"mean_v2", t.section.mean_v2},     {"mean_vz", t.section.mean_vz},
                             {"mean_Fx", t.section.mean_fx},     {"mean_Fz", t.section.mean_fz}};
        j["trials"].push_back(tj);
    }
    j["drag"] = nlohmann::json::array();
    for (const auto& d : r.drag) {
        nlohmann::json dj{{"depth", d.depth}, {"degenerate", d.degenerate}};
        if (!d.degenerate) {
            dj["C_D_eff"] = d.fit.coef;
            dj["r2"] = d.fit.r2;
            dj["n"] = d.fit.n;
            dj["C_D"] = d.cd;
        }
        j["drag"].push_back(dj);
    }
    j["C_D_eff_monotonic"] = r.cd_monotonic;
    j["pairs"] = nlohmann::json::array();
    for (const auto& p : r.pairs) j["pairs"].push_back(to_json(p));
    j["vertical"] = to_json(r.vertical);
    j["pass"] = {{"drag", r.drag_pass}, {"pairs", r.pairs_pass}, {"buoyancy", r.buoyancy_pass}, {"all", r.passed()}};
    j["flags"] = r.flags;
    return j;
}

void write_plot_data(const std::filesystem::path& path, const SuiteReport& r) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << std::setprecision(12) << "id,depth,speed,v2,fx,fz\n";
    for (const auto& p : r.points)
        f << p.id << ',' << p.depth << ',' << p.speed << ',' << p.v2 << ',' << p.fx << ',' << p.fz << '\n';
}

}  // namespace hydrosurr::validation
