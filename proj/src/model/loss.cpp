#include "hydrosurr/model/loss.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hydrosurr::model {

LossTerms composite_loss(const double* pred, const double* truth, const double* sub_frac, std::size_t B,
                         std::size_t K, const dataset::NormStats& st, const LossConfig& cfg, double* grad) {
    LossTerms t;
    const std::size_t n = B * K * 3;
    if (n == 0) return t;
    const double inv_n = 1.0 / static_cast<double>(n);

    // Hybrid term, normalized space.
    for (std::size_t e = 0; e < n; ++e) {
        const double d = pred[e] - truth[e];
        const double m = std::max(std::abs(truth[e]), cfg.eps);
        t.mse += d * d;
        t.rel += (d / m) * (d / m);
        if (grad) grad[e] = (1.0 - cfg.alpha) * 2.0 * d * inv_n + cfg.alpha * 2.0 * d / (m * m) * inv_n;
    }
    t.mse *= inv_n;
    t.rel *= inv_n;
    t.hybrid = (1.0 - cfg.alpha) * t.mse + cfg.alpha * t.rel;

    // Net-force term in F/rho units; the means cancel in the difference of sums.
    {
        const double scale = 1.0 / (3.0 * static_cast<double>(B));
        for (std::size_t i = 0; i < B; ++i)
            for (int c = 0; c < 3; ++c) {
                double diff = 0.0;
                for (std::size_t s = 0; s < K; ++s) {
                    const std::size_t e = (i * K + s) * 3 + c;
                    diff += pred[e] - truth[e];
                }
                const double D = st.sigma_Y[c] * diff;
                t.net += D * D;
                if (grad) {
                    const double g = cfg.lambda_net * 2.0 * scale * D * st.sigma_Y[c];
                    for (std::size_t s = 0; s < K; ++s) grad[(i * K + s) * 3 + c] += g;
                }
            }
        t.net *= scale;
    }

    // Dry-surface penalty on un-normalized predictions.
    if (sub_frac) {
        for (std::size_t p = 0; p < B * K; ++p)
            if (sub_frac[p] < cfg.dry_threshold) ++t.dry;
        if (t.dry > 0) {
            const double scale = 1.0 / (3.0 * static_cast<double>(t.dry));
            for (std::size_t p = 0; p < B * K; ++p) {
                if (!(sub_frac[p] < cfg.dry_threshold)) continue;
                for (int c = 0; c < 3; ++c) {
                    const double y = pred[p * 3 + c] * st.sigma_Y[c] + st.mu_Y[c];
                    t.phys += y * y;
                    if (grad) grad[p * 3 + c] += cfg.lambda_phys * 2.0 * scale * y * st.sigma_Y[c];
                }
            }
            t.phys *= scale;
        }
    }
    t.total = t.hybrid + cfg.lambda_net * t.net + cfg.lambda_phys * t.phys;
    return t;
}

}  // namespace hydrosurr::model
