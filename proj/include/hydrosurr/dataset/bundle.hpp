#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "hydrosurr/dataset/case_record.hpp"
#include "hydrosurr/dataset/norm_stats.hpp"
#include "hydrosurr/dataset/sample.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

namespace hydrosurr::dataset {

inline constexpr const char* kBundleSchema = "hydrosurr-bundle/1";

struct BuildOptions {
    double t_cut = kDefaultTransientCut;
    int n_sections = kDefaultSections;
    bool augment = true;
    double train_fraction = 0.8;
    std::uint64_t split_seed = 7;
    unsigned jobs = 1;
};

/// In-memory dataset: prepared geometries, all samples, the grouped split and
/// the training-split normalization statistics for the 12-feature model.
struct Bundle {
    std::map<std::string, geometry::VehicleGeometry> vehicles;
    std::vector<Sample> samples;
    Split split;
    NormStats stats;
    nlohmann::json manifest = nlohmann::json::object();

    const geometry::VehicleGeometry& geometry(const std::string& vehicle) const;
    std::vector<std::size_t> indices_for(const std::vector<std::size_t>& subset, const std::string& vehicle) const;
};

/// Vehicle-frame conversion, sectioning, submergence and (optionally) augmentation of one vehicle's cases.
std::vector<Sample> process_cases(const geometry::VehicleGeometry& geometry, const std::vector<CaseRecord>& cases,
                                  const BuildOptions& options);

NormStats fit_stats(const Bundle& bundle, const std::vector<std::size_t>& subset, bool with_dims);

Bundle build_bundle(const std::vector<geometry::VehicleGeometry>& geometries,
                    const std::vector<std::vector<CaseRecord>>& cases, const BuildOptions& options);

/// Directory layout: manifest.json, samples.jsonl, split.json, norm_stats.json,
/// geometry/<vehicle>.json and, when given, cases/<vehicle>/<case_id>.csv.
void write_bundle(const std::filesystem::path& dir, const Bundle& bundle,
                  const std::vector<std::vector<CaseRecord>>* cases = nullptr);
Bundle read_bundle(const std::filesystem::path& dir);

}  // namespace hydrosurr::dataset
