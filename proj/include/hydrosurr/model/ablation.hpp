#pragma once

#include <string>
#include <vector>

#include "hydrosurr/dataset/bundle.hpp"
#include "hydrosurr/geometry/vehicle.hpp"
#include "hydrosurr/model/train.hpp"

namespace hydrosurr::model {

enum class Variant { full, no_dims, merged, global_only };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

FeatureOptions feature_options(Variant v);

/// Original patch indices behind each merged patch, in output order.
struct MergePlan {
    std::vector<std::vector<std::size_t>> members;
};

MergePlan merge_plan(const geometry::VehicleGeometry& geometry);

/// Coarser tessellation from spec.merge_groups: areas add, centroid and normal
/// are area-weighted, depth samples are drawn from members in proportion to area,
/// and symmetry pairs are rewritten onto the merged names.
geometry::VehicleGeometry merge_geometry(const geometry::VehicleGeometry& geometry);

/// Area-weighted merge of submergence; targets of merged members add.
dataset::Sample merge_sample(const dataset::Sample& sample, const geometry::VehicleGeometry& original,
                             const MergePlan& plan);

/// Applies merge_geometry/merge_sample to every vehicle that declares merge groups.
dataset::Bundle merge_bundle(const dataset::Bundle& bundle);

struct VariantRun {
    Variant variant = Variant::full;
    TrainResult result;
    FeatureSet train_set, val_set;
};

/// Fits variant statistics on the train split, builds features, initializes and
/// trains. The global-only variant trains on net targets with lambda_net = lambda_phys = 0.
VariantRun train_variant(const dataset::Bundle& bundle, Variant variant, const TrainConfig& config,
                         const EpochCallback& on_epoch = {});

}  // namespace hydrosurr::model
