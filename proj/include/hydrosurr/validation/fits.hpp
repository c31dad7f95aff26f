#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace hydrosurr::validation {

/// One steady-state data point per trial.
struct TrialPoint {
    std::string id;
    double depth = 0.0;  // m
    double speed = 0.0;  // mean body-frame speed, m/s
    double v2 = 0.0;     // mean squared speed, m^2/s^2
    double fx = 0.0;     // |mean F_x|, N
    double fz = 0.0;     // mean F_z, N
};

/// y = intercept + coef x. Drag fits keep intercept at 0.
/// R^2 = 1 - SS_res / SS_tot with SS_tot about the mean of y in both cases.
struct FitResult {
    double coef = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
    double depth = 0.0;
};

/// Coefficient of determination against the mean of y; 1 when y is constant and fit exactly.
double r_squared(std::span<const double> y, std::span<const double> yhat);

/// Origin-constrained least squares C = sum(xy) / sum(x^2).
FitResult fit_origin(std::span<const double> x, std::span<const double> y, double depth = 0.0);
/// Ordinary least squares with a free intercept.
FitResult fit_linear(std::span<const double> x, std::span<const double> y, double depth = 0.0);

/// |F_x| = C_D,eff v^2 for trials at one depth.
FitResult fit_drag(std::span<const TrialPoint> points);

/// C_D = C_D,eff / (1/2 rho W d).
double physical_cd(double cd_eff, double rho, double width, double depth);

struct PairRatio {
    double depth_a = 0.0;  // shallower
    double depth_b = 0.0;  // deeper
    std::size_t n_pairs = 0;
    double mean_ratio = 0.0;  // mean of C_b / C_a over matched pairs
    double fit_ratio = 0.0;   // ratio of the aggregate fits
    double deviation_pct = 0.0;
};

/// Speed-matched cross-depth pairs: |v_i - v_j| <= speed_tol with both speeds >= min_speed.
/// Depth pairs without matches are omitted and logged.
std::vector<PairRatio> matched_pair_check(std::span<const TrialPoint> points, double speed_tol = 0.3,
                                          double min_speed = 0.6);

struct SpeedBinCheck {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t depths = 0;  // depths with trials in the bin
    bool ordered = true;     // mean F_z increases with depth
};

struct VerticalReport {
    std::vector<FitResult> per_depth;  // F_z = F_0 + C_L v^2; coef = C_L, intercept = F_0
    bool cross_checked = false;
    std::vector<double> mean_fz;       // per depth, same order as per_depth
    bool monotonic_mean_fz = false;
    bool monotonic_f0 = false;
    FitResult f0_vs_depth;             // F_0 = intercept + slope d
    std::vector<SpeedBinCheck> bins;
    bool bins_ordered = false;
};

/// Per-depth vertical fits plus cross-depth consistency checks. A single
/// depth yields the per-depth fit only, with a warning.
VerticalReport fit_vertical(std::span<const TrialPoint> points, double bin_width = 0.5);

/// Distinct depths in ascending order.
std::vector<double> depths_of(std::span<const TrialPoint> points);
std::vector<TrialPoint> at_depth(std::span<const TrialPoint> points, double depth);

nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const PairRatio& p);
nlohmann::json to_json(const VerticalReport& r);

}  // namespace hydrosurr::validation
