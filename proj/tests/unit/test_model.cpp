#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/dataset/bundle.hpp"
#include "hydrosurr/dataset/oracle.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"
#include "hydrosurr/model/ablation.hpp"
#include "hydrosurr/model/inference.hpp"
#include "hydrosurr/model/loss.hpp"
#include "hydrosurr/model/metrics.hpp"
#include "hydrosurr/model/serialize.hpp"
#include "hydrosurr/model/surrogate.hpp"
#include "hydrosurr/model/train.hpp"

using namespace hydrosurr;
using namespace hydrosurr::model;

namespace {

const dataset::Bundle& small_bundle() {
    static const dataset::Bundle b = [] {
        const auto h = geometry::prepare_toy(geometry::mini_husky());
        const auto w = geometry::prepare_toy(geometry::mini_warthog());
        const auto ch = dataset::generate_campaign(h, dataset::default_campaign("mini-husky"), 10, 1);
        const auto cw = dataset::generate_campaign(w, dataset::default_campaign("mini-warthog"), 10, 2);
        dataset::BuildOptions opt;
        opt.n_sections = 4;
        return dataset::build_bundle({h, w}, {ch, cw}, opt);
    }();
    return b;
}

Surrogate random_model(std::size_t hidden, std::uint64_t seed) {
    Surrogate m;
    m.hidden = hidden;
    m.feature_schema = features::kSchemaVersion;
    m.resize();
    m.init_he_uniform(seed);
    Rng r(seed + 1);
    for (auto* t : {&m.b1, &m.b2, &m.b3})
        for (auto& x : *t) x = 0.1 * (uniform01(r) - 0.5);
    m.stats.mu_G.assign(12, 0.0);
    m.stats.sigma_G.assign(12, 1.0);
    m.stats.mu_Y = {0.1, -0.2, 0.3};
    m.stats.sigma_Y = {1.5, 0.7, 2.0};
    return m;
}

}  // namespace

TEST(Loss, HandComputedTerms) {
    dataset::NormStats st;
    st.mu_Y = {0.0, 0.0, 1.0};
    st.sigma_Y = {2.0, 1.0, 1.0};
    // One sample, two surfaces.
    const double pred[6] = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const double truth[6] = {0.5, 0.0, 0.0, 0.0, 0.0, 2.0};
    const double sub[2] = {0.5, 0.0};
    LossConfig cfg;
    const auto t = composite_loss(pred, truth, sub, 1, 2, st, cfg);
    EXPECT_DOUBLE_EQ(t.mse, (0.25 + 4.0) / 6.0);
    EXPECT_DOUBLE_EQ(t.rel, (1.0 + 1.0) / 6.0);
    EXPECT_DOUBLE_EQ(t.hybrid, 0.5 * t.mse + 0.5 * t.rel);
    // Net diff: x 0.5 -> 1.0 in F/rho, z -2 -> -2.
    EXPECT_DOUBLE_EQ(t.net, (1.0 + 0.0 + 4.0) / 3.0);
    // Dry surface 2 predicts (0, 0, 1) after un-normalization.
    EXPECT_EQ(t.dry, 1u);
    EXPECT_DOUBLE_EQ(t.phys, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(t.total, t.hybrid + 0.1 * t.net + 0.5 * t.phys);
}

TEST(Loss, GradientMatchesFiniteDifference) {
    const std::size_t B = 3, K = 4, n = B * K * 3;
    Rng r(2);
    std::vector<double> pred(n), truth(n), sub(B * K), grad(n);
    for (auto& x : pred) x = standard_normal(r);
    for (auto& x : truth) x = standard_normal(r);
    for (std::size_t i = 0; i < sub.size(); ++i) sub[i] = i % 3 == 0 ? 0.0 : 0.5;
    dataset::NormStats st;
    st.mu_Y = {0.3, -0.1, 0.2};
    st.sigma_Y = {1.2, 0.8, 1.7};
    composite_loss(pred.data(), truth.data(), sub.data(), B, K, st, {}, grad.data());
    for (std::size_t e = 0; e < n; ++e) {
        const double h = 1e-6, x0 = pred[e];
        pred[e] = x0 + h;
        const double lp = composite_loss(pred.data(), truth.data(), sub.data(), B, K, st, {}).total;
        pred[e] = x0 - h;
        const double lm = composite_loss(pred.data(), truth.data(), sub.data(), B, K, st, {}).total;
        pred[e] = x0;
        EXPECT_NEAR(grad[e], (lp - lm) / (2 * h), 1e-7 * (1 + std::abs(grad[e])));
    }
}

TEST(Surrogate, BackwardMatchesFiniteDifference) {
    auto m = random_model(16, 3);
    const std::size_t rows = 6;
    Rng r(4);
    std::vector<double> Z(rows * m.in_dim()), dY(rows * 3);
    for (auto& x : Z) x = standard_normal(r);
    for (auto& x : dY) x = standard_normal(r);
    ForwardCache cache;
    Gradients g;
    g.resize_like(m);
    g.zero();
    forward(m, Z.data(), rows, cache);
    backward(m, Z.data(), dY.data(), cache, g);
    auto objective = [&](Surrogate& mm) {
        ForwardCache c;
        forward(mm, Z.data(), rows, c);
        double s = 0;
        for (std::size_t i = 0; i < dY.size(); ++i) s += dY[i] * c.Y[i];
        return s;
    };
    auto params = m.tensors();
    auto grads = g.tensors();
    const auto sizes = m.tensor_sizes();
    for (std::size_t t = 0; t < params.size(); ++t)
        for (std::size_t i = 0; i < sizes[t]; i += 7) {
            const double h = 1e-6, x0 = params[t][i];
            params[t][i] = x0 + h;
            const double fp = objective(m);
            params[t][i] = x0 - h;
            const double fm = objective(m);
            params[t][i] = x0;
            EXPECT_NEAR(grads[t][i], (fp - fm) / (2 * h), 1e-6 * (1 + std::abs(grads[t][i]))) << t << ":" << i;
        }
}

TEST(Surrogate, ForwardScalarMatchesAvx2) {
    if (!simd::isa_supported(simd::Isa::avx2)) GTEST_SKIP();
    auto m = random_model(256, 5);
    const std::size_t rows = 13;
    Rng r(6);
    std::vector<double> Z(rows * m.in_dim());
    for (auto& x : Z) x = standard_normal(r);
    ForwardCache a, b;
    forward(m, Z.data(), rows, a, simd::scalar_kernels());
    forward(m, Z.data(), rows, b, *simd::avx2_kernels());
    for (std::size_t i = 0; i < a.Y.size(); ++i) EXPECT_NEAR(a.Y[i], b.Y[i], 1e-11 * (1 + std::abs(a.Y[i])));
}

TEST(Surrogate, HeInitBoundsAndShapeCheck) {
    Surrogate m;
    m.resize();
    m.init_he_uniform(1);
    const double bound = std::sqrt(6.0 / 27.0);
    for (double w : m.W1) EXPECT_LE(std::abs(w), bound);
    for (double b : m.b1) EXPECT_EQ(b, 0.0);
    EXPECT_EQ(m.parameter_count(), 27u * 256 + 256 + 256u * 256 + 256 + 256u * 3 + 3);
    m.stats.mu_G.assign(12, 0.0);
    m.stats.sigma_G.assign(12, 1.0);
    EXPECT_NO_THROW(m.check());
    m.W2.pop_back();
    EXPECT_THROW(m.check(), ConfigError);
}

TEST(Serialize, RoundTripAndCorruption) {
    auto m = random_model(32, 7);
    m.config_fingerprint = R"({"lr":0.001})";
    const auto bytes = serialize(m);
    const auto r = deserialize(bytes);
    EXPECT_TRUE(same_parameters(r, m));
    EXPECT_TRUE(r.stats == m.stats);
    EXPECT_EQ(r.config_fingerprint, m.config_fingerprint);
    EXPECT_EQ(r.variant, m.variant);
    auto bad = bytes;
    bad[bytes.size() / 2] ^= 0x10;
    EXPECT_THROW(deserialize(bad), DataError);
    auto magic = bytes;
    magic[0] = 'X';
    EXPECT_THROW(deserialize(magic), DataError);
    EXPECT_THROW(deserialize({bytes.begin(), bytes.begin() + 10}), DataError);
    const auto dir = std::filesystem::temp_directory_path() / "hydrosurr_test_model";
    std::filesystem::create_directories(dir);
    save_weights(dir / "m.hsrg", m);
    EXPECT_TRUE(same_parameters(load_weights(dir / "m.hsrg"), m));
    EXPECT_THROW(load_weights(dir / "missing.hsrg"), IoError);
    EXPECT_THROW(check_compatible(m, 15, 9), DataError);
}

TEST(Metrics, SmapeFloorAndComponents) {
    EXPECT_DOUBLE_EQ(smape_term(2.0, 1.0, 1.0), 100.0 * 1.0 / 1.5);
    EXPECT_DOUBLE_EQ(smape_term(0.1, 0.0, 1.0), 10.0);
    EXPECT_DOUBLE_EQ(smape_term(0.0, 0.0, 1.0), 0.0);
    const std::vector<Vec3> p{{1, 0, 10}, {3, 0, 10}}, t{{2, 0, 10}, {2, 0, 12}};
    const auto m = net_force_metrics(p, t);
    EXPECT_EQ(m.n, 2u);
    EXPECT_DOUBLE_EQ(m.mae[0], 1.0);
    EXPECT_DOUBLE_EQ(m.rmse[2], std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(m.smape[2], 0.5 * 100.0 * 2.0 / 11.0);
    EXPECT_EQ(m.mae[1], 0.0);
}

TEST(Training, DeterministicAndImproves) {
    const auto& b = small_bundle();
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.hidden = 32;
    cfg.seed = 5;
    const auto r1 = train_variant(b, Variant::full, cfg);
    const auto r2 = train_variant(b, Variant::full, cfg);
    ASSERT_EQ(r1.result.history.size(), 3u);
    EXPECT_TRUE(r1.result.history == r2.result.history);
    EXPECT_TRUE(same_parameters(r1.result.model, r2.result.model));
    EXPECT_LT(r1.result.history.back().train.total, r1.result.history.front().train.total);
    EXPECT_EQ(r1.result.best_val, r1.result.history[static_cast<std::size_t>(r1.result.best_epoch - 1)].val.total);
}

TEST(Training, RetainsEpochChosenBySelectMetric) {
    const auto& b = small_bundle();
    TrainConfig cfg;
    cfg.epochs = 4;
    cfg.hidden = 16;
    for (const std::string sel : {"val_mae", "val_loss"}) {
        cfg.select = sel;
        const auto r = train_variant(b, Variant::full, cfg).result;
        std::size_t arg = 0;
        for (std::size_t e = 1; e < r.history.size(); ++e) {
            const auto score = [&](std::size_t i) { return sel == "val_mae" ? r.history[i].val_mae : r.history[i].val.total; };
            if (score(e) < score(arg)) arg = e;
        }
        EXPECT_EQ(r.best_epoch, static_cast<int>(arg + 1)) << sel;
    }
    auto j = cfg.to_json();
    j["select"] = "train_loss";
    EXPECT_THROW(TrainConfig::from_json(j, TrainConfig{}), ConfigError);
}

TEST(Training, LambdaFRejected) {
    TrainConfig cfg;
    nlohmann::json j = cfg.to_json();
    j["lambda_F"] = 0.2;
    EXPECT_THROW(TrainConfig::from_json(j, TrainConfig{}), ConfigError);
}

TEST(Ablation, VariantsShapeInputs) {
    const auto& b = small_bundle();
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.hidden = 16;
    const auto nod = train_variant(b, Variant::no_dims, cfg);
    EXPECT_EQ(nod.result.model.global_dim, 9u);
    EXPECT_EQ(nod.result.model.variant, "no_dims");
    const auto go = train_variant(b, Variant::global_only, cfg);
    EXPECT_EQ(go.result.model.surface_dim, 0u);
    for (const auto& blk : go.val_set.blocks) EXPECT_EQ(blk.K, 1u);
    const auto mg = train_variant(b, Variant::merged, cfg);
    for (const auto& blk : mg.val_set.blocks)
        EXPECT_EQ(blk.K, blk.vehicle == "mini-husky" ? 9u : 10u);
    EXPECT_THROW(parse_variant("tiny"), ConfigError);
}

TEST(Ablation, MergeConservesAreaAndTargets) {
    const auto& b = small_bundle();
    const auto& g = b.geometry("mini-husky");
    const auto merged = merge_geometry(g);
    ASSERT_EQ(merged.K(), 9u);
    double a0 = 0, a1 = 0;
    for (const auto& p : g.patches) a0 += p.area;
    for (const auto& p : merged.patches) a1 += p.area;
    EXPECT_NEAR(a0, a1, 1e-12);
    const auto plan = merge_plan(g);
    const auto idx = b.indices_for(b.split.train, "mini-husky");
    const auto& s = b.samples[idx.front()];
    const auto ms = merge_sample(s, g, plan);
    const Vec3 n0 = s.net_target(), n1 = ms.net_target();
    EXPECT_NEAR(n0.x, n1.x, 1e-12);
    EXPECT_NEAR(n0.z, n1.z, 1e-12);
}

TEST(Inference, PipelineMatchesTrainingPath) {
    const auto& b = small_bundle();
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.hidden = 32;
    const auto run = train_variant(b, Variant::full, cfg);
    const auto& m = run.result.model;
    const auto& blk = run.val_set.blocks.back();
    const auto& s = b.samples[blk.sample_index[0]];
    InferencePipeline pipe(m, b.geometry(s.vehicle));
    InferenceInput in;
    in.v = s.v;
    in.rho = s.rho;
    in.depth = s.depth;
    const auto& f = pipe.predict(in);
    const auto Yn = predict_normalized(m, blk);
    for (std::size_t k = 0; k < blk.K; ++k) {
        double y[3];
        m.stats.denormalize_target(&Yn[k * 3], y);
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(f[k][c], y[c] * s.rho, 1e-9 * (1 + std::abs(f[k][c])));
    }
    InferencePipeline p32(m, b.geometry(s.vehicle), Precision::f32);
    const Vec3 n64 = pipe.predict_net(in), n32 = p32.predict_net(in);
    EXPECT_NEAR(n64.x, n32.x, 1e-3 * (1 + std::abs(n64.x)));
    EXPECT_NEAR(n64.z, n32.z, 1e-3 * (1 + std::abs(n64.z)));
    auto wrong = m;
    wrong.global_dim = 10;
    EXPECT_ANY_THROW(InferencePipeline(wrong, b.geometry(s.vehicle)));
}

TEST(Evaluation, DryStatsAndReport) {
    const auto& b = small_bundle();
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.hidden = 16;
    const auto run = train_variant(b, Variant::full, cfg);
    for (const auto& blk : run.val_set.blocks) {
        const auto rep = evaluate_metrics(run.result.model, blk);
        EXPECT_EQ(rep.net.n, blk.n());
        EXPECT_EQ(rep.net_pred.size(), blk.n());
    }
    const auto d = dry_surface_stats(run.result.model, run.val_set);
    EXPECT_GT(d.dry + d.wet, 0u);
}
