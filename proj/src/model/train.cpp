#include "hydrosurr/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/features/features.hpp"
#include "hydrosurr/simd/cpu.hpp"

namespace hydrosurr::model {

std::size_t FeatureSet::samples() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.n();
    return n;
}

dataset::NormStats fit_variant_stats(const dataset::Bundle& bundle, const std::vector<std::size_t>& subset,
                                     const FeatureOptions& opt) {
    if (!opt.global_only) return dataset::fit_stats(bundle, subset, opt.with_dims);
    std::vector<std::vector<double>> globals;
    std::vector<std::vector<double>> nets;
    for (auto i : subset) {
        const auto& s = bundle.samples[i];
        globals.push_back(dataset::sample_global_features(s, bundle.geometry(s.vehicle).spec, opt.with_dims));
        const Vec3 n = s.net_target();
        nets.push_back({n.x, n.y, n.z});
    }
    std::vector<const std::vector<double>*> ptrs;
    for (const auto& n : nets) ptrs.push_back(&n);
    return dataset::fit_norm_stats(globals, ptrs);
}

FeatureSet build_feature_set(const dataset::Bundle& bundle, const std::vector<std::size_t>& subset,
                             const dataset::NormStats& stats, const FeatureOptions& opt) {
    FeatureSet set;
    set.surface_dim = opt.global_only ? 0 : features::kSurfaceDim;
    set.global_dim = opt.with_dims ? features::kGlobalDim : features::kGlobalDimNoDims;
    if (stats.global_dim() != set.global_dim)
        throw ConfigError("normalization stats have " + std::to_string(stats.global_dim()) +
                          " global features, the variant needs " + std::to_string(set.global_dim));
    const std::size_t in = set.in_dim();
    std::vector<double> Gn(set.global_dim);
    for (const auto& [name, geom] : bundle.vehicles) {
        VehicleBlock b;
        b.vehicle = name;
        b.K = opt.global_only ? 1 : geom.K();
        for (const auto& p : geom.patches) b.types.push_back(p.type);
        for (auto i : subset) {
            const auto& s = bundle.samples[i];
            if (s.vehicle != name) continue;
            const auto G = dataset::sample_global_features(s, geom.spec, opt.with_dims);
            stats.normalize_global(G.data(), Gn.data());
            const std::size_t z0 = b.Z.size(), y0 = b.Y.size();
            b.Z.resize(z0 + b.K * in);
            b.Y.resize(y0 + b.K * 3);
            if (opt.global_only) {
                std::copy(Gn.begin(), Gn.end(), b.Z.begin() + static_cast<std::ptrdiff_t>(z0));
                const Vec3 net = s.net_target();
                const double raw[3] = {net.x, net.y, net.z};
                stats.normalize_target(raw, b.Y.data() + y0);
            } else {
                const auto S = dataset::sample_surface_features(s, geom);
                build_inputs(S.data.data(), b.K, set.surface_dim, Gn.data(), set.global_dim, b.Z.data() + z0);
                for (std::size_t k = 0; k < b.K; ++k) stats.normalize_target(&s.targets[3 * k], b.Y.data() + y0 + 3 * k);
                b.sub_frac.insert(b.sub_frac.end(), s.sub_frac.begin(), s.sub_frac.end());
            }
            b.rho.push_back(s.rho);
            b.sample_index.push_back(i);
        }
        if (b.n() > 0) set.blocks.push_back(std::move(b));
    }
    return set;
}

nlohmann::json TrainConfig::to_json() const {
    return {{"alpha", loss.alpha},
            {"eps", loss.eps},
            {"lambda_net", loss.lambda_net},
            {"lambda_phys", loss.lambda_phys},
            {"lambda_F", loss.lambda_F},
            {"dry_threshold", loss.dry_threshold},
            {"batch", batch},
            {"val_batch", val_batch},
            {"lr", lr},
            {"beta1", beta1},
            {"beta2", beta2},
            {"adam_eps", adam_eps},
            {"epochs", epochs},
            {"plateau_factor", plateau_factor},
            {"patience", patience},
            {"improvement_tol", improvement_tol},
            {"seed", seed},
            {"hidden", hidden},
            {"select", select}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j, const TrainConfig& d) {
    TrainConfig c = d;
    try {
        c.loss.alpha = j.value("alpha", d.loss.alpha);
        c.loss.eps = j.value("eps", d.loss.eps);
        c.loss.lambda_net = j.value("lambda_net", d.loss.lambda_net);
        c.loss.lambda_phys = j.value("lambda_phys", d.loss.lambda_phys);
        c.loss.lambda_F = j.value("lambda_F", d.loss.lambda_F);
        c.loss.dry_threshold = j.value("dry_threshold", d.loss.dry_threshold);
        c.batch = j.value("batch", d.batch);
        c.val_batch = j.value("val_batch", d.val_batch);
        c.lr = j.value("lr", d.lr);
        c.beta1 = j.value("beta1", d.beta1);
        c.beta2 = j.value("beta2", d.beta2);
        c.adam_eps = j.value("adam_eps", d.adam_eps);
        c.epochs = j.value("epochs", d.epochs);
        c.plateau_factor = j.value("plateau_factor", d.plateau_factor);
        c.patience = j.value("patience", d.patience);
        c.improvement_tol = j.value("improvement_tol", d.improvement_tol);
        c.seed = j.value("seed", d.seed);
        c.hidden = j.value("hidden", d.hidden);
        c.select = j.value("select", d.select);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid training config: ") + e.what());
    }
    if (!(c.loss.alpha >= 0 && c.loss.alpha <= 1)) throw ConfigError("alpha must lie in [0, 1]");
    if (!(c.loss.eps > 0)) throw ConfigError("eps must be positive");
    if (c.batch == 0 || c.val_batch == 0) throw ConfigError("batch sizes must be positive");
    if (!(c.lr > 0)) throw ConfigError("learning rate must be positive");
    if (c.epochs < 0 || c.patience <= 0) throw ConfigError("epochs must be >= 0 and patience > 0");
    if (c.select != "val_mae" && c.select != "val_loss") throw ConfigError("select must be val_mae or val_loss");
    if (c.loss.lambda_F != 0.0) throw ConfigError("lambda_F has no loss term; it must stay 0");
    return c;
}

bool operator==(const EpochLog& a, const EpochLog& b) {
    auto same = [](const LossTerms& x, const LossTerms& y) {
        return x.total == y.total && x.hybrid == y.hybrid && x.mse == y.mse && x.rel == y.rel && x.net == y.net &&
               x.phys == y.phys && x.dry == y.dry;
    };
    return a.epoch == b.epoch && a.lr == b.lr && same(a.train, b.train) && same(a.val, b.val) && a.val_mae == b.val_mae;
}

Surrogate make_model(const FeatureSet& set, const dataset::NormStats& stats, const TrainConfig& cfg,
                     const std::string& variant) {
    Surrogate m;
    m.variant = variant;
    m.feature_schema = features::kSchemaVersion;
    m.surface_dim = set.surface_dim;
    m.global_dim = set.global_dim;
    m.hidden = cfg.hidden;
    m.stats = stats;
    m.config_fingerprint = cfg.to_json().dump();
    m.init_he_uniform(derive_seed(cfg.seed, 0));
    return m;
}

namespace {

struct Batch {
    std::size_t block;
    std::vector<std::size_t> rows;  // sample positions within the block
};

struct BatchBuffers {
    std::vector<double> Z, Y, sub, grad;
};

void gather(const VehicleBlock& b, const std::vector<std::size_t>& rows, std::size_t in, BatchBuffers& buf) {
    const std::size_t K = b.K;
    buf.Z.resize(rows.size() * K * in);
    buf.Y.resize(rows.size() * K * 3);
    buf.sub.resize(b.sub_frac.empty() ? 0 : rows.size() * K);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t i = rows[r];
        std::copy_n(b.Z.begin() + static_cast<std::ptrdiff_t>(i * K * in), K * in, buf.Z.begin() + static_cast<std::ptrdiff_t>(r * K * in));
        std::copy_n(b.Y.begin() + static_cast<std::ptrdiff_t>(i * K * 3), K * 3, buf.Y.begin() + static_cast<std::ptrdiff_t>(r * K * 3));
        if (!b.sub_frac.empty())
            std::copy_n(b.sub_frac.begin() + static_cast<std::ptrdiff_t>(i * K), K, buf.sub.begin() + static_cast<std::ptrdiff_t>(r * K));
    }
}

void accumulate(LossTerms& acc, const LossTerms& t, double w) {
    acc.total += w * t.total;
    acc.hybrid += w * t.hybrid;
    acc.mse += w * t.mse;
    acc.rel += w * t.rel;
    acc.net += w * t.net;
    acc.phys += w * t.phys;
    acc.dry += t.dry;
}

void scale(LossTerms& t, double s) {
    t.total *= s;
    t.hybrid *= s;
    t.mse *= s;
    t.rel *= s;
    t.net *= s;
    t.phys *= s;
}

}  // namespace

std::vector<double> predict_normalized(const Surrogate& m, const VehicleBlock& b) {
    const std::size_t in = m.in_dim(), rows = b.n() * b.K;
    std::vector<double> out(rows * 3);
    ForwardCache cache;
    constexpr std::size_t chunk = 2048;
    for (std::size_t r0 = 0; r0 < rows; r0 += chunk) {
        const std::size_t n = std::min(chunk, rows - r0);
        forward(m, b.Z.data() + r0 * in, n, cache);
        std::copy(cache.Y.begin(), cache.Y.begin() + static_cast<std::ptrdiff_t>(n * 3),
                  out.begin() + static_cast<std::ptrdiff_t>(r0 * 3));
    }
    return out;
}

double validation_mae(const Surrogate& m, const FeatureSet& set) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& b : set.blocks) {
        const auto pred = predict_normalized(m, b);
        for (std::size_t i = 0; i < b.n(); ++i)
            for (int c = 0; c < 3; ++c) {
                double diff = 0.0;
                for (std::size_t s = 0; s < b.K; ++s) {
                    const std::size_t e = (i * b.K + s) * 3 + c;
                    diff += pred[e] - b.Y[e];
                }
                sum += std::abs(diff * m.stats.sigma_Y[c]);
            }
        count += b.n();
    }
    return count ? sum / (3.0 * static_cast<double>(count)) : 0.0;
}

LossTerms evaluate_loss(const Surrogate& m, const FeatureSet& set, const TrainConfig& cfg) {
    LossTerms acc;
    std::size_t total = 0;
    ForwardCache cache;
    BatchBuffers buf;
    for (std::size_t bi = 0; bi < set.blocks.size(); ++bi) {
        const auto& b = set.blocks[bi];
        for (std::size_t s0 = 0; s0 < b.n(); s0 += cfg.val_batch) {
            std::vector<std::size_t> rows;
            for (std::size_t i = s0; i < std::min(b.n(), s0 + cfg.val_batch); ++i) rows.push_back(i);
            gather(b, rows, m.in_dim(), buf);
            forward(m, buf.Z.data(), rows.size() * b.K, cache);
            const auto t = composite_loss(cache.Y.data(), buf.Y.data(), buf.sub.empty() ? nullptr : buf.sub.data(),
                                          rows.size(), b.K, m.stats, cfg.loss);
            accumulate(acc, t, static_cast<double>(rows.size()));
            total += rows.size();
        }
    }
    if (total) scale(acc, 1.0 / static_cast<double>(total));
    return acc;
}

TrainResult train(const Surrogate& initial, const FeatureSet& tr, const FeatureSet& va, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    initial.check();
    if (tr.in_dim() != initial.in_dim() || va.in_dim() != initial.in_dim())
        throw ConfigError("feature width does not match the model input");
    TrainResult res;
    res.model = initial;
    if (cfg.epochs == 0) return res;
    if (tr.samples() == 0 || va.samples() == 0) throw DataError("training needs non-empty train and val sets");

    // Adam moments of parameters whose gradient has died decay through the
    // subnormal range, which otherwise doubles the epoch time late in training.
    const simd::FlushDenormalsScope ftz;
    Surrogate m = initial;
    Gradients g;
    g.resize_like(m);
    std::vector<std::vector<double>> adam_m, adam_v;
    for (auto s : m.tensor_sizes()) {
        adam_m.emplace_back(s, 0.0);
        adam_v.emplace_back(s, 0.0);
    }
    double lr = cfg.lr;
    std::uint64_t step = 0;
    double best = std::numeric_limits<double>::infinity();
    double best_score = std::numeric_limits<double>::infinity();
    int bad = 0;
    Rng rng(derive_seed(cfg.seed, 1));
    ForwardCache cache;
    BatchBuffers buf;
    const std::size_t in = m.in_dim();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Vehicle-homogeneous batches in a seeded random order.
        std::vector<Batch> batches;
        for (std::size_t bi = 0; bi < tr.blocks.size(); ++bi) {
            std::vector<std::size_t> order(tr.blocks[bi].n());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            shuffle(order.begin(), order.end(), rng);
            for (std::size_t s0 = 0; s0 < order.size(); s0 += cfg.batch)
                batches.push_back({bi, std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(s0),
                                                                order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), s0 + cfg.batch)))});
        }
        shuffle(batches.begin(), batches.end(), rng);

        EpochLog log;
        log.epoch = epoch;
        log.lr = lr;
        std::size_t seen = 0;
        for (std::size_t bid = 0; bid < batches.size(); ++bid) {
            const auto& batch = batches[bid];
            const auto& b = tr.blocks[batch.block];
            const std::size_t B = batch.rows.size();
            gather(b, batch.rows, in, buf);
            forward(m, buf.Z.data(), B * b.K, cache);
            buf.grad.resize(B * b.K * 3);
            const auto t = composite_loss(cache.Y.data(), buf.Y.data(), buf.sub.empty() ? nullptr : buf.sub.data(), B,
                                          b.K, m.stats, cfg.loss, buf.grad.data());
            if (!std::isfinite(t.total))
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(bid) + " (vehicle " + b.vehicle + ", hybrid " +
                                   std::to_string(t.hybrid) + ", net " + std::to_string(t.net) + ", phys " +
                                   std::to_string(t.phys) + ")");
            accumulate(log.train, t, static_cast<double>(B));
            seen += B;

            g.zero();
            backward(m, buf.Z.data(), buf.grad.data(), cache, g);
            ++step;
            const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            auto params = m.tensors();
            auto grads = g.tensors();
            const auto sizes = m.tensor_sizes();
            for (std::size_t ti = 0; ti < params.size(); ++ti) {
                double* p = params[ti];
                const double* gr = grads[ti];
                double* am = adam_m[ti].data();
                double* av = adam_v[ti].data();
                for (std::size_t e = 0; e < sizes[ti]; ++e) {
                    am[e] = cfg.beta1 * am[e] + (1.0 - cfg.beta1) * gr[e];
                    av[e] = cfg.beta2 * av[e] + (1.0 - cfg.beta2) * gr[e] * gr[e];
                    p[e] -= lr * (am[e] / c1) / (std::sqrt(av[e] / c2) + cfg.adam_eps);
                }
            }
        }
        scale(log.train, 1.0 / static_cast<double>(seen));
        log.val = evaluate_loss(m, va, cfg);
        log.val_mae = validation_mae(m, va);
        if (!std::isfinite(log.val.total))
            throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));

        const double score = cfg.select == "val_loss" ? log.val.total : log.val_mae;
        if (score < best_score) {
            best_score = score;
            res.model = m;
            res.best_epoch = epoch;
            res.best_val = log.val.total;
        }
        if (log.val.total < best - cfg.improvement_tol) {
            best = log.val.total;
            bad = 0;
        } else if (++bad >= cfg.patience) {
            lr *= cfg.plateau_factor;
            bad = 0;
        }
        res.history.push_back(log);
        if (on_epoch) on_epoch(log);
    }
    return res;
}

void write_train_log(const std::filesystem::path& path, const std::vector<EpochLog>& history) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "epoch,lr,train_loss,train_mse,train_rel,train_net,train_phys,val_loss,val_mae\n" << std::setprecision(10);
    for (const auto& h : history)
        out << h.epoch << ',' << h.lr << ',' << h.train.total << ',' << h.train.mse << ',' << h.train.rel << ','
            << h.train.net << ',' << h.train.phys << ',' << h.val.total << ',' << h.val_mae << '\n';
}

}  // namespace hydrosurr::model
