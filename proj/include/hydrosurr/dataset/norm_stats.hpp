#pragma once

#include <array>
#include <vector>

#include "json.hpp"

namespace hydrosurr::dataset {

inline constexpr double kSigmaFloor = 1e-8;

/// Population statistics of the training split. Global features are
/// standardized per column; force targets per component, pooled over samples
/// and surfaces.
struct NormStats {
    std::vector<double> mu_G, sigma_G;
    std::array<double, 3> mu_Y{}, sigma_Y{1.0, 1.0, 1.0};

    std::size_t global_dim() const { return mu_G.size(); }

    /// (g - mu) / sigma; columns whose sigma sits at the floor map to 0.
    void normalize_global(const double* g, double* out) const;
    /// Physical F/rho -> normalized, and back.
    void normalize_target(const double* y, double* out) const;
    void denormalize_target(const double* y_tilde, double* out) const;

    friend bool operator==(const NormStats&, const NormStats&) = default;
};

/// `globals` holds one D_g row per training sample; `targets` holds K x 3 per
/// sample (K may differ between samples). Constant columns get sigma = 1e-8 and a warning.
NormStats fit_norm_stats(const std::vector<std::vector<double>>& globals,
                         const std::vector<const std::vector<double>*>& targets);

nlohmann::json to_json(const NormStats& stats);
NormStats norm_stats_from_json(const nlohmann::json& j);

}  // namespace hydrosurr::dataset
