#include "hydrosurr/dataset/bundle.hpp"

#include <fstream>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/parallel.hpp"
#include "hydrosurr/features/features.hpp"

namespace hydrosurr::dataset {

using nlohmann::json;

const geometry::VehicleGeometry& Bundle::geometry(const std::string& vehicle) const {
    const auto it = vehicles.find(vehicle);
    if (it == vehicles.end()) throw DataError("bundle has no geometry for vehicle '" + vehicle + "'");
    return it->second;
}

std::vector<std::size_t> Bundle::indices_for(const std::vector<std::size_t>& subset, const std::string& vehicle) const {
    std::vector<std::size_t> out;
    for (auto i : subset)
        if (samples[i].vehicle == vehicle) out.push_back(i);
    return out;
}

std::vector<Sample> process_cases(const geometry::VehicleGeometry& g, const std::vector<CaseRecord>& cases,
                                  const BuildOptions& opt) {
    std::vector<std::vector<Sample>> per_case(cases.size());
    parallel_for(cases.size(), opt.jobs, [&](std::size_t i) {
        const CaseRecord& rec = cases[i];
        if (rec.surfaces.size() != g.K())
            throw DataError("case '" + rec.case_id + "' has " + std::to_string(rec.surfaces.size()) +
                            " surfaces, vehicle '" + g.spec.name + "' has " + std::to_string(g.K()));
        for (std::size_t s = 0; s < g.K(); ++s)
            if (rec.surfaces[s] != g.patches[s].name)
                throw DataError("case '" + rec.case_id + "' surface '" + rec.surfaces[s] + "' does not match patch '" +
                                g.patches[s].name + "'");
        const CaseRecord veh = rec.frame == Frame::solver ? to_vehicle_frame(rec) : rec;
        auto base = section_average(veh, opt.t_cut, opt.n_sections);
        for (auto& s : base) {
            s.vehicle = g.spec.name;
            fill_submergence(s, g);
        }
        per_case[i] = opt.augment ? augment(base, g) : std::move(base);
    });
    std::vector<Sample> out;
    for (auto& v : per_case) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    return out;
}

NormStats fit_stats(const Bundle& b, const std::vector<std::size_t>& subset, bool with_dims) {
    std::vector<std::vector<double>> globals;
    std::vector<const std::vector<double>*> targets;
    globals.reserve(subset.size());
    for (auto i : subset) {
        const auto& s = b.samples[i];
        globals.push_back(sample_global_features(s, b.geometry(s.vehicle).spec, with_dims));
        targets.push_back(&s.targets);
    }
    return fit_norm_stats(globals, targets);
}

Bundle build_bundle(const std::vector<geometry::VehicleGeometry>& geometries,
                    const std::vector<std::vector<CaseRecord>>& cases, const BuildOptions& opt) {
    if (geometries.size() != cases.size()) throw ConfigError("one case list per vehicle is required");
    Bundle b;
    json vehicles = json::array();
    for (std::size_t v = 0; v < geometries.size(); ++v) {
        const auto& g = geometries[v];
        if (!b.vehicles.emplace(g.spec.name, g).second) throw ConfigError("vehicle '" + g.spec.name + "' listed twice");
        auto samples = process_cases(g, cases[v], opt);
        vehicles.push_back({{"name", g.spec.name}, {"cases", cases[v].size()}, {"samples", samples.size()},
                            {"mesh_hash", g.mesh_hash}});
        b.samples.insert(b.samples.end(), samples.begin(), samples.end());
    }
    b.split = split_dataset(b.samples, opt.train_fraction, opt.split_seed);
    b.stats = fit_stats(b, b.split.train, true);
    b.manifest = {{"schema", kBundleSchema},
                  {"feature_schema", features::kSchemaVersion},
                  {"vehicles", vehicles},
                  {"t_cut", opt.t_cut},
                  {"n_sections", opt.n_sections},
                  {"augment", opt.augment},
                  {"train_fraction", opt.train_fraction},
                  {"split_seed", opt.split_seed},
                  {"samples", b.samples.size()},
                  {"train_samples", b.split.train.size()},
                  {"val_samples", b.split.val.size()}};
    return b;
}

void write_bundle(const std::filesystem::path& dir, const Bundle& b, const std::vector<std::vector<CaseRecord>>* cases) {
    std::filesystem::create_directories(dir / "geometry");
    geometry::write_json_file(dir / "manifest.json", b.manifest);
    {
        std::ofstream out(dir / "samples.jsonl");
        if (!out) throw IoError("cannot write " + (dir / "samples.jsonl").string());
        for (const auto& s : b.samples) out << to_json(s).dump() << '\n';
        if (!out) throw IoError("error writing samples.jsonl");
    }
    geometry::write_json_file(dir / "split.json", {{"train", b.split.train}, {"val", b.split.val}});
    geometry::write_json_file(dir / "norm_stats.json", to_json(b.stats));
    for (const auto& [name, g] : b.vehicles) geometry::write_vehicle_geometry(dir / "geometry" / (name + ".json"), g);
    if (cases)
        for (const auto& list : *cases)
            for (const auto& rec : list) {
                const auto sub = dir / "cases" / rec.vehicle;
                std::filesystem::create_directories(sub);
                write_case_csv(sub / (rec.case_id + ".csv"), rec);
            }
}

Bundle read_bundle(const std::filesystem::path& dir) {
    Bundle b;
    b.manifest = geometry::read_json_file(dir / "manifest.json");
    if (b.manifest.value("schema", "") != kBundleSchema)
        throw DataError(dir.string() + ": not a " + std::string(kBundleSchema) + " bundle");
    if (b.manifest.value("feature_schema", -1) != features::kSchemaVersion)
        throw DataError(dir.string() + ": feature schema mismatch");
    for (const auto& v : b.manifest.at("vehicles")) {
        const auto name = v.at("name").get<std::string>();
        b.vehicles.emplace(name, geometry::read_vehicle_geometry(dir / "geometry" / (name + ".json")));
    }
    std::ifstream in(dir / "samples.jsonl");
    if (!in) throw IoError("cannot open " + (dir / "samples.jsonl").string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            b.samples.push_back(sample_from_json(json::parse(line)));
        } catch (const json::parse_error& e) {
            throw DataError("samples.jsonl line " + std::to_string(b.samples.size() + 1) + ": " + e.what());
        }
    }
    for (const auto& s : b.samples) (void)b.geometry(s.vehicle);
    const auto split = geometry::read_json_file(dir / "split.json");
    b.split.train = split.at("train").get<std::vector<std::size_t>>();
    b.split.val = split.at("val").get<std::vector<std::size_t>>();
    for (auto i : b.split.train)
        if (i >= b.samples.size()) throw DataError("split index out of range");
    for (auto i : b.split.val)
        if (i >= b.samples.size()) throw DataError("split index out of range");
    b.stats = norm_stats_from_json(geometry::read_json_file(dir / "norm_stats.json"));
    return b;
}

}  // namespace hydrosurr::dataset
