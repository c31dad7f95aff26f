#include "hydrosurr/dataset/norm_stats.hpp"

#include <cmath>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/log.hpp"

namespace hydrosurr::dataset {

void NormStats::normalize_global(const double* g, double* out) const {
    // A column that was constant in training carries no information the network
    // could have learned; it maps to 0 so unseen values cannot reach it amplified by 1/floor.
    for (std::size_t i = 0; i < mu_G.size(); ++i)
        out[i] = sigma_G[i] <= kSigmaFloor ? 0.0 : (g[i] - mu_G[i]) / sigma_G[i];
}

void NormStats::normalize_target(const double* y, double* out) const {
    for (int c = 0; c < 3; ++c) out[c] = (y[c] - mu_Y[c]) / sigma_Y[c];
}

void NormStats::denormalize_target(const double* y, double* out) const {
    for (int c = 0; c < 3; ++c) out[c] = y[c] * sigma_Y[c] + mu_Y[c];
}

namespace {

double floored(double sigma, const std::string& what) {
    if (sigma >= kSigmaFloor) return sigma;
    log::warn(what + " is constant over the training split; sigma floored to 1e-8");
    return kSigmaFloor;
}

}  // namespace

NormStats fit_norm_stats(const std::vector<std::vector<double>>& globals,
                         const std::vector<const std::vector<double>*>& targets) {
    if (globals.empty() || targets.empty()) throw DataError("cannot fit normalization on an empty training split");
    NormStats st;
    const std::size_t D = globals.front().size();
    st.mu_G.assign(D, 0.0);
    st.sigma_G.assign(D, 0.0);
    for (const auto& g : globals) {
        if (g.size() != D) throw DataError("global feature rows differ in length");
        for (std::size_t i = 0; i < D; ++i) st.mu_G[i] += g[i];
    }
    const double n = static_cast<double>(globals.size());
    for (auto& m : st.mu_G) m /= n;
    for (const auto& g : globals)
        for (std::size_t i = 0; i < D; ++i) st.sigma_G[i] += (g[i] - st.mu_G[i]) * (g[i] - st.mu_G[i]);
    for (std::size_t i = 0; i < D; ++i)
        st.sigma_G[i] = floored(std::sqrt(st.sigma_G[i] / n), "global feature " + std::to_string(i));

    std::array<double, 3> sum{}, sq{};
    std::size_t count = 0;
    for (const auto* t : targets) {
        for (std::size_t k = 0; k + 2 < t->size(); k += 3) {
            for (int c = 0; c < 3; ++c) sum[c] += (*t)[k + c];
            ++count;
        }
    }
    if (count == 0) throw DataError("no force targets in the training split");
    for (int c = 0; c < 3; ++c) st.mu_Y[c] = sum[c] / static_cast<double>(count);
    for (const auto* t : targets)
        for (std::size_t k = 0; k + 2 < t->size(); k += 3)
            for (int c = 0; c < 3; ++c) {
                const double d = (*t)[k + c] - st.mu_Y[c];
                sq[c] += d * d;
            }
    for (int c = 0; c < 3; ++c)
        st.sigma_Y[c] = floored(std::sqrt(sq[c] / static_cast<double>(count)), "force component " + std::to_string(c));
    return st;
}

nlohmann::json to_json(const NormStats& s) {
    return {{"mu_G", s.mu_G}, {"sigma_G", s.sigma_G}, {"mu_Y", s.mu_Y}, {"sigma_Y", s.sigma_Y}};
}

NormStats norm_stats_from_json(const nlohmann::json& j) {
    try {
        NormStats s;
        s.mu_G = j.at("mu_G").get<std::vector<double>>();
        s.sigma_G = j.at("sigma_G").get<std::vector<double>>();
        s.mu_Y = j.at("mu_Y").get<std::array<double, 3>>();
        s.sigma_Y = j.at("sigma_Y").get<std::array<double, 3>>();
        if (s.mu_G.size() != s.sigma_G.size()) throw DataError("norm stats: mu_G and sigma_G lengths differ");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid norm stats: ") + e.what());
    }
}

}  // namespace hydrosurr::dataset
