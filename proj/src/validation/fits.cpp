#include "hydrosurr/validation/fits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/log.hpp"

namespace hydrosurr::validation {
namespace {

constexpr double kDepthTol = 1e-9;

}  // namespace

double r_squared(std::span<const double> y, std::span<const double> yhat) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    return 1.0 - ss_res / ss_tot;
}

FitResult fit_origin(std::span<const double> x, std::span<const double> y, double depth) {
    if (x.size() != y.size()) throw DataError("fit: x and y lengths differ");
    if (x.size() < 2) throw DataError("fit: need at least 2 points");
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    if (sxx == 0.0) throw NumericError("degenerate fit: all x are zero");
    FitResult f;
    f.coef = sxy / sxx;
    f.n = x.size();
    f.depth = depth;
    std::vector<double> yhat(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) yhat[i] = f.coef * x[i];
    f.r2 = r_squared(y, yhat);
    return f;
}

FitResult fit_linear(std::span<const double> x, std::span<const double> y, double depth) {
    if (x.size() != y.size()) throw DataError("fit: x and y lengths differ");
    if (x.size() < 2) throw DataError("fit: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw NumericError("degenerate fit: x has no spread");
    FitResult f;
    f.coef = sxy / sxx;
    f.intercept = my - f.coef * mx;
    f.n = x.size();
    f.depth = depth;
    std::vector<double> yhat(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) yhat[i] = f.intercept + f.coef * x[i];
    f.r2 = r_squared(y, yhat);
    return f;
}

FitResult fit_drag(std::span<const TrialPoint> points) {
    std::vector<double> x, y;
    for (const auto& p : points) {
        x.push_back(p.v2);
        y.push_back(p.fx);
    }
    return fit_origin(x, y, points.empty() ? 0.0 : points.front().depth);
}

double physical_cd(double cd_eff, double rho, double width, double depth) {
    if (depth == 0.0) throw NumericError("physical drag coefficient undefined at zero depth");
    if (!(rho > 0.0) || !(width > 0.0) || !(depth > 0.0)) throw ConfigError("physical_cd needs positive rho, width, depth");
    return cd_eff / (0.5 * rho * width * depth);
}

std::vector<double> depths_of(std::span<const TrialPoint> points) {
    std::vector<double> d;
    for (const auto& p : points)
        if (std::none_of(d.begin(), d.end(), [&](double x) { return std::abs(x - p.depth) <= kDepthTol; }))
            d.push_back(p.depth);
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<TrialPoint> at_depth(std::span<const TrialPoint> points, double depth) {
    std::vector<TrialPoint> out;
    for (const auto& p : points)
        if (std::abs(p.depth - depth) <= kDepthTol) out.push_back(p);
    return out;
}

std::vector<PairRatio> matched_pair_check(std::span<const TrialPoint> points, double speed_tol, double min_speed) {
    const auto depths = depths_of(points);
    std::vector<PairRatio> out;
    if (depths.size() < 2) {
        log::warn("matched-pair check needs at least two depths");
        return out;
    }
    for (std::size_t a = 0; a < depths.size(); ++a)
        for (std::size_t b = a + 1; b < depths.size(); ++b) {
            const auto pa = at_depth(points, depths[a]), pb = at_depth(points, depths[b]);
            PairRatio r;
            r.depth_a = depths[a];
            r.depth_b = depths[b];
            double sum = 0.0;
            for (const auto& i : pa)
                for (const auto& j : pb) {
                    if (i.speed < min_speed || j.speed < min_speed) continue;
                    if (std::abs(i.speed - j.speed) > speed_tol) continue;
                    if (i.v2 <= 0.0 || j.v2 <= 0.0 || i.fx <= 0.0) continue;
                    sum += (j.fx / j.v2) / (i.fx / i.v2);
                    ++r.n_pairs;
                }
            if (r.n_pairs == 0) {
                log::warn("no speed-matched pairs between depths " + std::to_string(depths[a]) + " and " +
                          std::to_string(depths[b]));
                continue;
            }
            r.mean_ratio = sum / static_cast<double>(r.n_pairs);
            r.fit_ratio = fit_drag(pb).coef / fit_drag(pa).coef;
            r.deviation_pct = 100.0 * std::abs(r.mean_ratio - r.fit_ratio) / std::abs(r.fit_ratio);
            out.push_back(r);
        }
    return out;
}

VerticalReport fit_vertical(std::span<const TrialPoint> points, double bin_width) {
    VerticalReport rep;
    const auto depths = depths_of(points);
    for (double d : depths) {
        const auto pts = at_depth(points, d);
        std::vector<double> x, y;
        double mean = 0.0;
        for (const auto& p : pts) {
            x.push_back(p.v2);
            y.push_back(p.fz);
            mean += p.fz;
        }
        rep.per_depth.push_back(fit_linear(x, y, d));
        rep.mean_fz.push_back(mean / static_cast<double>(pts.size()));
    }
    if (depths.size() < 2) {
        log::warn("vertical-force cross-depth checks need at least two depths; skipped");
        return rep;
    }
    rep.cross_checked = true;
    rep.monotonic_mean_fz = std::is_sorted(rep.mean_fz.begin(), rep.mean_fz.end(), std::less_equal<>());
    std::vector<double> f0;
    for (const auto& f : rep.per_depth) f0.push_back(f.intercept);
    rep.monotonic_f0 = std::is_sorted(f0.begin(), f0.end(), std::less_equal<>());
    rep.f0_vs_depth = fit_linear(depths, f0);

    // Speed bins: within each bin, mean F_z must increase with depth.
    std::map<long, std::map<std::size_t, std::pair<double, std::size_t>>> bins;
    for (const auto& p : points) {
        const long bin = static_cast<long>(std::floor(p.speed / bin_width));
        const auto di = static_cast<std::size_t>(
            std::find_if(depths.begin(), depths.end(), [&](double d) { return std::abs(d - p.depth) <= kDepthTol; }) -
            depths.begin());
        auto& acc = bins[bin][di];
        acc.first += p.fz;
        ++acc.second;
    }
    rep.bins_ordered = true;
    for (const auto& [bin, per_depth] : bins) {
        if (per_depth.size() < 2) continue;
        SpeedBinCheck c;
        c.lo = static_cast<double>(bin) * bin_width;
        c.hi = c.lo + bin_width;
        c.depths = per_depth.size();
        double prev = -std::numeric_limits<double>::infinity();
        for (const auto& [di, acc] : per_depth) {
            const double m = acc.first / static_cast<double>(acc.second);
            if (m <= prev) c.ordered = false;
            prev = m;
        }
        rep.bins_ordered = rep.bins_ordered && c.ordered;
        rep.bins.push_back(c);
    }
    return rep;
}

nlohmann::json to_json(const FitResult& f) {
    return {{"coef", f.coef}, {"intercept", f.intercept}, {"r2", f.r2}, {"n", f.n}, {"depth", f.depth}};
}

nlohmann::json to_json(const PairRatio& p) {
    return {{"depth_a", p.depth_a},       {"depth_b", p.depth_b},     {"n_pairs", p.n_pairs},
            {"mean_ratio", p.mean_ratio}, {"fit_ratio", p.fit_ratio}, {"deviation_pct", p.deviation_pct}};
}

nlohmann::json to_json(const VerticalReport& r) {
    nlohmann::json j;
    j["per_depth"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.per_depth.size(); ++i) {
        const auto& f = r.per_depth[i];
        j["per_depth"].push_back({{"depth", f.depth}, {"F0", f.intercept}, {"C_L", f.coef}, {"r2", f.r2}, {"n", f.n},
                                  {"mean_Fz", r.mean_fz[i]}});
    }
    j["cross_checked"] = r.cross_checked;
    if (r.cross_checked) {
        j["monotonic_mean_Fz"] = r.monotonic_mean_fz;
        j["monotonic_F0"] = r.monotonic_f0;
        j["F0_vs_depth"] = {{"slope", r.f0_vs_depth.coef}, {"intercept", r.f0_vs_depth.intercept},
                            {"r2", r.f0_vs_depth.r2}, {"n", r.f0_vs_depth.n}};
        j["speed_bins"] = nlohmann::json::array();
        for (const auto& b : r.bins)
            j["speed_bins"].push_back({{"lo", b.lo}, {"hi", b.hi}, {"depths", b.depths}, {"ordered", b.ordered}});
        j["speed_bins_ordered"] = r.bins_ordered;
    }
    return j;
}

}  // namespace hydrosurr::validation
