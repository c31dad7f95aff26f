#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/patches.hpp"
#include "hydrosurr/model/surrogate.hpp"
#include "hydrosurr/model/train.hpp"

namespace hydrosurr::model {

inline constexpr double kSmapeFloor = 1.0;  // N

/// 100 |p - t| / max((|p| + |t|) / 2, floor)
double smape_term(double pred, double truth, double floor = kSmapeFloor);

struct ComponentMetrics {
    std::array<double, 3> mae{}, rmse{}, smape{};
    std::size_t n = 0;
};

/// Net-force metrics in N over paired predictions and truths.
ComponentMetrics net_force_metrics(std::span<const Vec3> pred, std::span<const Vec3> truth,
                                   double floor = kSmapeFloor);

struct EvalReport {
    std::string vehicle;
    ComponentMetrics net;
    std::array<double, 3> surface_mae{};  // N, over (sample, surface) pairs
    std::map<geometry::SurfaceType, std::array<double, 3>> by_type;
    std::vector<Vec3> net_pred, net_true;  // N
};

/// Per-surface model on one vehicle block: forces re-scaled by each sample's density.
EvalReport evaluate_metrics(const Surrogate& model, const VehicleBlock& block);
/// Global-only model: the block carries net targets (K = 1).
EvalReport evaluate_net_only(const Surrogate& model, const VehicleBlock& block);

struct DrySurfaceStats {
    double dry_mean = 0.0;  // mean |Y^| (F/rho) over surfaces with sub_frac < threshold
    double wet_mean = 0.0;
    std::size_t dry = 0, wet = 0;
};

DrySurfaceStats dry_surface_stats(const Surrogate& model, const FeatureSet& set, double threshold = 0.01);

nlohmann::json to_json(const ComponentMetrics& m);
nlohmann::json to_json(const EvalReport& r);

}  // namespace hydrosurr::model
