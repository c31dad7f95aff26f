#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "hydrosurr/geometry/vehicle.hpp"
#include "hydrosurr/model/inference.hpp"
#include "hydrosurr/model/surrogate.hpp"
#include "hydrosurr/validation/fits.hpp"
#include "hydrosurr/validation/sections.hpp"
#include "hydrosurr/validation/trace.hpp"

namespace hydrosurr::validation {

struct SuiteThresholds {
    double drag_r2 = 0.97;
    double f0_depth_r2 = 0.97;
    double pair_deviation_pct = 10.0;
};

struct SuiteConfig {
    double resample_rate = 111.0;
    KinematicsOptions kinematics;
    SectionOptions sections;
    double speed_tol = 0.3;
    double min_speed = 0.6;
    double bin_width = 0.5;
    double rho = 1000.0;
    double width = 0.0;  // reference width for C_D; 0 uses the spec width
    model::Precision precision = model::Precision::f64;
    SuiteThresholds thresholds;
    unsigned jobs = 1;
};

SuiteConfig suite_config_from_json(const nlohmann::json& j, const SuiteConfig& defaults = {});
nlohmann::json to_json(const SuiteConfig& c);

struct TrialOutcome {
    std::string id;
    double depth = 0.0;
    Direction direction = Direction::ramp_in;
    std::size_t n_sections = 0;
    bool qualifying = false;
    bool dry = false;        // no patch sample below the water level anywhere in the section
    PlanarSection section;   // longest qualifying section
    TrialPoint point;
};

struct DragDepth {
    double depth = 0.0;
    bool degenerate = false;
    FitResult fit;
    double cd = 0.0;
};

struct SuiteReport {
    std::vector<TrialOutcome> trials;
    std::vector<TrialPoint> points;  // wet qualifying trials
    std::vector<DragDepth> drag;
    bool cd_monotonic = false;
    std::vector<PairRatio> pairs;
    VerticalReport vertical;
    bool drag_pass = false;
    bool buoyancy_pass = false;
    bool pairs_pass = false;
    std::vector<std::string> flags;
    bool passed() const { return drag_pass && buoyancy_pass && pairs_pass; }
};

/// Preprocesses each trace, predicts net forces over its planar sections from
/// kinematics alone, and runs the drag and vertical-force tests.
SuiteReport run_validation_suite(const model::Surrogate& model, const geometry::VehicleGeometry& geometry,
                                 std::span<const TrialTrace> traces, const SuiteConfig& config = {});

nlohmann::json to_json(const SuiteReport& r, const SuiteConfig& config);
/// One row per wet qualifying trial: id, depth, speed, v2, fx, fz.
void write_plot_data(const std::filesystem::path& path, const SuiteReport& r);

}  // namespace hydrosurr::validation
