#pragma once

#include <cstddef>

#include "hydrosurr/dataset/norm_stats.hpp"

namespace hydrosurr::model {

struct LossConfig {
    double alpha = 0.5;          // weight of the relative term inside the hybrid loss
    double eps = 0.01;           // relative-error floor on |Y~_true|
    double lambda_net = 0.1;
    double lambda_phys = 0.5;
    double lambda_F = 0.0;       // accepted for configuration parity; has no loss term
    double dry_threshold = 0.01; // sub_frac below this counts as dry
};

struct LossTerms {
    double total = 0.0;
    double hybrid = 0.0;
    double mse = 0.0;
    double rel = 0.0;
    double net = 0.0;   // in F/rho units
    double phys = 0.0;  // mean squared F/rho over dry (sample, surface) pairs
    std::size_t dry = 0;
};

/// Composite loss over a vehicle-homogeneous batch. `pred` and `truth` are
/// normalized B x K x 3; `sub_frac` is B x K or nullptr (no dry penalty).
/// When `grad` is non-null it receives dL/dpred (B x K x 3).
LossTerms composite_loss(const double* pred, const double* truth, const double* sub_frac, std::size_t B,
                         std::size_t K, const dataset::NormStats& stats, const LossConfig& config,
                         double* grad = nullptr);

}  // namespace hydrosurr::model
