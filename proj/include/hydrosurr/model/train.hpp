#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hydrosurr/dataset/bundle.hpp"
#include "hydrosurr/geometry/patches.hpp"
#include "hydrosurr/model/loss.hpp"
#include "hydrosurr/model/surrogate.hpp"

namespace hydrosurr::model {

/// Network-ready tensors for the samples of one vehicle.
struct VehicleBlock {
    std::string vehicle;
    std::size_t K = 0;
    std::vector<double> Z;         // n x K x in_dim, global part already normalized
    std::vector<double> Y;         // n x K x 3, normalized targets
    std::vector<double> sub_frac;  // n x K; empty when the model has no surface axis
    std::vector<double> rho;       // n
    std::vector<std::size_t> sample_index;
    std::vector<geometry::SurfaceType> types;  // K

    std::size_t n() const { return rho.size(); }
};

struct FeatureSet {
    std::size_t surface_dim = 0;
    std::size_t global_dim = 0;
    std::vector<VehicleBlock> blocks;

    std::size_t in_dim() const { return surface_dim + global_dim; }
    std::size_t samples() const;
};

struct FeatureOptions {
    bool with_dims = true;     // false: 9 global features
    bool global_only = false;  // true: no surface axis, net F/rho targets
};

/// Builds blocks for `subset` of the bundle, one per vehicle (bundle order).
FeatureSet build_feature_set(const dataset::Bundle& bundle, const std::vector<std::size_t>& subset,
                             const dataset::NormStats& stats, const FeatureOptions& options);

/// Stats for a variant: global columns per `options`, targets per surface or net.
dataset::NormStats fit_variant_stats(const dataset::Bundle& bundle, const std::vector<std::size_t>& subset,
                                     const FeatureOptions& options);

struct TrainConfig {
    LossConfig loss;
    std::size_t batch = 16;
    std::size_t val_batch = 64;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int epochs = 1000;
    double plateau_factor = 0.5;
    int patience = 20;
    double improvement_tol = 1e-8;
    std::uint64_t seed = 1;
    std::size_t hidden = 256;
    /// Quantity that picks the retained weights: "val_mae" (MAE_net,norm) or
    /// "val_loss". The plateau scheduler always watches the validation loss.
    std::string select = "val_mae";

    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json& j, const TrainConfig& defaults);
};

struct EpochLog {
    int epoch = 0;
    double lr = 0.0;
    LossTerms train;
    LossTerms val;
    double val_mae = 0.0;  // MAE on density-normalized net force
};

bool operator==(const EpochLog& a, const EpochLog& b);

struct TrainResult {
    Surrogate model;  // weights of the epoch chosen by TrainConfig::select
    std::vector<EpochLog> history;
    int best_epoch = 0;
    double best_val = 0.0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Adam with plateau halving on the validation loss; keeps the weights of the
/// epoch with the best `select` score.
/// Throws NumericError naming the batch when the loss turns non-finite.
TrainResult train(const Surrogate& initial, const FeatureSet& train_set, const FeatureSet& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Creates and initializes a model shaped for a feature set.
Surrogate make_model(const FeatureSet& set, const dataset::NormStats& stats, const TrainConfig& config,
                     const std::string& variant);

/// Normalized predictions for a whole block (n x K x 3).
std::vector<double> predict_normalized(const Surrogate& model, const VehicleBlock& block);

/// Mean over samples and components of |sum_s Y^ - sum_s Y| in F/rho units.
double validation_mae(const Surrogate& model, const FeatureSet& set);

/// Sample-weighted mean of the composite loss over batches of config.val_batch.
LossTerms evaluate_loss(const Surrogate& model, const FeatureSet& set, const TrainConfig& config);

/// CSV: epoch,lr,train_loss,train_mse,train_rel,train_net,train_phys,val_loss,val_mae
void write_train_log(const std::filesystem::path& path, const std::vector<EpochLog>& history);

}  // namespace hydrosurr::model
