#include "hydrosurr/model/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hydrosurr/core/error.hpp"

namespace hydrosurr::model {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::no_dims: return "no_dims";
        case Variant::merged: return "merged";
        case Variant::global_only: return "global_only";
    }
    return "full";
}

Variant parse_variant(const std::string& name) {
    for (auto v : {Variant::full, Variant::no_dims, Variant::merged, Variant::global_only})
        if (to_string(v) == name) return v;
    throw ConfigError("unknown model variant '" + name + "' (full, no_dims, merged, global_only)");
}

FeatureOptions feature_options(Variant v) {
    FeatureOptions o;
    o.with_dims = v != Variant::no_dims;
    o.global_only = v == Variant::global_only;
    return o;
}

MergePlan merge_plan(const geometry::VehicleGeometry& g) {
    MergePlan plan;
    std::map<std::string, std::size_t> group_of;  // member name -> group position in spec
    for (std::size_t gi = 0; gi < g.spec.merge_groups.size(); ++gi)
        for (const auto& m : g.spec.merge_groups[gi].second) {
            if (!group_of.emplace(m, gi).second) throw DataError("patch '" + m + "' is in two merge groups");
        }
    std::map<std::size_t, std::size_t> emitted;  // group -> output slot
    for (std::size_t s = 0; s < g.K(); ++s) {
        const auto it = group_of.find(g.patches[s].name);
        if (it == group_of.end()) {
            plan.members.push_back({s});
            continue;
        }
        const auto [slot, fresh] = emitted.emplace(it->second, plan.members.size());
        if (fresh) plan.members.emplace_back();
        plan.members[slot->second].push_back(s);
    }
    return plan;
}

namespace {

std::string merged_name(const geometry::VehicleGeometry& g, const std::vector<std::size_t>& members) {
    if (members.size() == 1) return g.patches[members.front()].name;
    for (const auto& [name, list] : g.spec.merge_groups)
        if (std::find(list.begin(), list.end(), g.patches[members.front()].name) != list.end()) return name;
    return g.patches[members.front()].name;
}

}  // namespace

geometry::VehicleGeometry merge_geometry(const geometry::VehicleGeometry& g) {
    const auto plan = merge_plan(g);
    geometry::VehicleGeometry out;
    out.spec = g.spec;
    out.mesh_hash = g.mesh_hash;
    out.ground_z = g.ground_z;
    std::map<std::string, std::string> rename;
    for (const auto& members : plan.members) {
        geometry::SurfacePatch p;
        p.name = merged_name(g, members);
        p.type = g.patches[members.front()].type;
        Vec3 weighted_c{}, weighted_n{};
        for (auto m : members) {
            const auto& src = g.patches[m];
            if (src.type != p.type) throw DataError("merge group '" + p.name + "' mixes surface types");
            rename[src.name] = p.name;
            p.area += src.area;
            weighted_c += src.centroid * src.area;
            weighted_n += src.normal * src.area;
            p.face_ids.insert(p.face_ids.end(), src.face_ids.begin(), src.face_ids.end());
        }
        p.centroid = weighted_c / p.area;
        const double nn = norm(weighted_n);
        p.normal_fallback = nn < geometry::kNormalFallbackThreshold;
        p.normal = p.normal_fallback ? Vec3{1, 0, 0} : weighted_n / nn;
        // Area-proportionate draw from the members' own samples.
        const double total = p.area;
        for (auto m : members) {
            const auto& src = g.patches[m];
            const auto take = std::min<std::size_t>(
                src.depth_samples.size(),
                static_cast<std::size_t>(std::llround(static_cast<double>(g.spec.samples_per_patch) * src.area / total)));
            p.depth_samples.insert(p.depth_samples.end(), src.depth_samples.begin(),
                                   src.depth_samples.begin() + static_cast<std::ptrdiff_t>(take));
            p.sample_normals.insert(p.sample_normals.end(), src.sample_normals.begin(),
                                    src.sample_normals.begin() + static_cast<std::ptrdiff_t>(take));
        }
        if (p.depth_samples.empty()) p.depth_samples = g.patches[members.front()].depth_samples;
        p.sample_seed = g.patches[members.front()].sample_seed;
        out.patches.push_back(std::move(p));
    }

    auto remap_pairs = [&](const std::vector<geometry::NamePair>& pairs) {
        std::vector<geometry::NamePair> res;
        for (const auto& [a, b] : pairs) {
            geometry::NamePair np{rename.at(a), rename.at(b)};
            if (np.first == np.second) continue;
            if (std::find(res.begin(), res.end(), np) == res.end()) res.push_back(np);
        }
        return res;
    };
    out.spec.mirror_pairs = remap_pairs(g.spec.mirror_pairs);
    out.spec.swap_pairs = remap_pairs(g.spec.swap_pairs);
    out.spec.symmetry_plane_patches.clear();
    for (const auto& n : g.spec.symmetry_plane_patches) {
        const auto& r = rename.at(n);
        auto& list = out.spec.symmetry_plane_patches;
        if (std::find(list.begin(), list.end(), r) == list.end()) list.push_back(r);
    }
    out.spec.merge_groups.clear();
    out.spec.patch_count = out.patches.size();
    geometry::validate_spec(out.spec, out.patches);
    return out;
}

dataset::Sample merge_sample(const dataset::Sample& s, const geometry::VehicleGeometry& g, const MergePlan& plan) {
    if (s.K() != g.K()) throw DataError("sample does not match the unmerged vehicle");
    dataset::Sample out = s;
    const std::size_t K = plan.members.size();
    out.sub_frac.assign(K, 0.0);
    out.sub_depth.assign(K, 0.0);
    out.targets.assign(3 * K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        double area = 0.0, wet_area = 0.0, depth_w = 0.0;
        for (auto m : plan.members[k]) {
            const double a = g.patches[m].area;
            area += a;
            wet_area += a * s.sub_frac[m];
            depth_w += a * s.sub_frac[m] * s.sub_depth[m];
            for (int c = 0; c < 3; ++c) out.targets[3 * k + c] += s.targets[3 * m + c];
        }
        out.sub_frac[k] = wet_area / area;
        out.sub_depth[k] = wet_area > 0.0 ? depth_w / wet_area : 0.0;
    }
    return out;
}

dataset::Bundle merge_bundle(const dataset::Bundle& b) {
    dataset::Bundle out;
    out.manifest = b.manifest;
    out.split = b.split;
    std::map<std::string, MergePlan> plans;
    for (const auto& [name, g] : b.vehicles) {
        if (g.spec.merge_groups.empty()) {
            out.vehicles.emplace(name, g);
            continue;
        }
        plans.emplace(name, merge_plan(g));
        out.vehicles.emplace(name, merge_geometry(g));
    }
    out.samples.reserve(b.samples.size());
    for (const auto& s : b.samples) {
        const auto it = plans.find(s.vehicle);
        out.samples.push_back(it == plans.end() ? s : merge_sample(s, b.geometry(s.vehicle), it->second));
    }
    out.stats = dataset::fit_stats(out, out.split.train, true);
    return out;
}

VariantRun train_variant(const dataset::Bundle& bundle, Variant variant, const TrainConfig& config,
                         const EpochCallback& on_epoch) {
    VariantRun run;
    run.variant = variant;
    const dataset::Bundle merged = variant == Variant::merged ? merge_bundle(bundle) : dataset::Bundle{};
    const dataset::Bundle& src = variant == Variant::merged ? merged : bundle;
    const auto opt = feature_options(variant);
    TrainConfig cfg = config;
    if (variant == Variant::global_only) {
        cfg.loss.lambda_net = 0.0;
        cfg.loss.lambda_phys = 0.0;
    }
    const auto stats = fit_variant_stats(src, src.split.train, opt);
    run.train_set = build_feature_set(src, src.split.train, stats, opt);
    run.val_set = build_feature_set(src, src.split.val, stats, opt);
    const Surrogate init = make_model(run.train_set, stats, cfg, to_string(variant));
    run.result = train(init, run.train_set, run.val_set, cfg, on_epoch);
    return run;
}

}  // namespace hydrosurr::model
