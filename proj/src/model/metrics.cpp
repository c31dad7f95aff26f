#include "hydrosurr/model/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hydrosurr/core/error.hpp"

namespace hydrosurr::model {

double smape_term(double p, double t, double floor) {
    return 100.0 * std::abs(p - t) / std::max((std::abs(p) + std::abs(t)) / 2.0, floor);
}

ComponentMetrics net_force_metrics(std::span<const Vec3> pred, std::span<const Vec3> truth, double floor) {
    if (pred.size() != truth.size()) throw DataError("prediction and truth counts differ");
    ComponentMetrics m;
    m.n = pred.size();
    if (m.n == 0) return m;
    for (std::size_t i = 0; i < m.n; ++i)
        for (int c = 0; c < 3; ++c) {
            const double e = pred[i][c] - truth[i][c];
            m.mae[c] += std::abs(e);
            m.rmse[c] += e * e;
            m.smape[c] += smape_term(pred[i][c], truth[i][c], floor);
        }
    const double n = static_cast<double>(m.n);
    for (int c = 0; c < 3; ++c) {
        m.mae[c] /= n;
        m.rmse[c] = std::sqrt(m.rmse[c] / n);
        m.smape[c] /= n;
    }
    return m;
}

EvalReport evaluate_metrics(const Surrogate& model, const VehicleBlock& b) {
    EvalReport r;
    r.vehicle = b.vehicle;
    const auto pred = predict_normalized(model, b);
    std::map<geometry::SurfaceType, std::size_t> type_counts;
    for (std::size_t i = 0; i < b.n(); ++i) {
        Vec3 np{}, nt{};
        for (std::size_t s = 0; s < b.K; ++s) {
            double yp[3], yt[3];
            const std::size_t e = (i * b.K + s) * 3;
            model.stats.denormalize_target(&pred[e], yp);
            model.stats.denormalize_target(&b.Y[e], yt);
            auto& slot = r.by_type[b.types[s]];
            for (int c = 0; c < 3; ++c) {
                const double err = b.rho[i] * std::abs(yp[c] - yt[c]);
                r.surface_mae[c] += err;
                slot[c] += err;
                np[c] += yp[c];
                nt[c] += yt[c];
            }
            ++type_counts[b.types[s]];
        }
        r.net_pred.push_back(np * b.rho[i]);
        r.net_true.push_back(nt * b.rho[i]);
    }
    const double pairs = static_cast<double>(b.n() * b.K);
    for (auto& x : r.surface_mae) x = pairs > 0 ? x / pairs : 0.0;
    for (auto& [type, arr] : r.by_type)
        for (auto& x : arr) x /= static_cast<double>(type_counts[type]);
    r.net = net_force_metrics(r.net_pred, r.net_true);
    return r;
}

EvalReport evaluate_net_only(const Surrogate& model, const VehicleBlock& b) {
    if (b.K != 1) throw DataError("net-only evaluation expects a block without a surface axis");
    EvalReport r;
    r.vehicle = b.vehicle;
    const auto pred = predict_normalized(model, b);
    for (std::size_t i = 0; i < b.n(); ++i) {
        double yp[3], yt[3];
        model.stats.denormalize_target(&pred[3 * i], yp);
        model.stats.denormalize_target(&b.Y[3 * i], yt);
        r.net_pred.push_back(Vec3{yp[0], yp[1], yp[2]} * b.rho[i]);
        r.net_true.push_back(Vec3{yt[0], yt[1], yt[2]} * b.rho[i]);
    }
    r.net = net_force_metrics(r.net_pred, r.net_true);
    return r;
}

DrySurfaceStats dry_surface_stats(const Surrogate& model, const FeatureSet& set, double threshold) {
    DrySurfaceStats st;
    for (const auto& b : set.blocks) {
        if (b.sub_frac.empty()) continue;
        const auto pred = predict_normalized(model, b);
        for (std::size_t p = 0; p < b.n() * b.K; ++p) {
            double y[3];
            model.stats.denormalize_target(&pred[3 * p], y);
            const double mag = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
            if (b.sub_frac[p] < threshold) {
                st.dry_mean += mag;
                ++st.dry;
            } else {
                st.wet_mean += mag;
                ++st.wet;
            }
        }
    }
    if (st.dry) st.dry_mean /= static_cast<double>(st.dry);
    if (st.wet) st.wet_mean /= static_cast<double>(st.wet);
    return st;
}

nlohmann::json to_json(const ComponentMetrics& m) {
    return {{"n", m.n}, {"mae", m.mae}, {"rmse", m.rmse}, {"smape", m.smape}};
}

nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json types = nlohmann::json::object();
    for (const auto& [t, v] : r.by_type) types[std::string(geometry::to_string(t))] = v;
    return {{"vehicle", r.vehicle}, {"net", to_json(r.net)}, {"surface_mae", r.surface_mae}, {"surface_mae_by_type", types}};
}

}  // namespace hydrosurr::model
