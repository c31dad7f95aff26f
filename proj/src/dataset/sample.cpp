#include "hydrosurr/dataset/sample.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"

namespace hydrosurr::dataset {

using nlohmann::json;

std::string augmentation_tag(unsigned bits) {
    switch (bits) {
        case kAugNone: return "none";
        case kAugMirror: return "mirror";
        case kAugReverse: return "reverse";
        case kAugMirror | kAugReverse: return "mirror+reverse";
        default: throw DataError("invalid augmentation bits " + std::to_string(bits));
    }
}

unsigned parse_augmentation_tag(const std::string& tag) {
    for (unsigned b = 0; b < 4; ++b)
        if (augmentation_tag(b) == tag) return b;
    throw DataError("unknown augmentation tag '" + tag + "'");
}

Vec3 Sample::net_target() const {
    Vec3 net{};
    for (std::size_t s = 0; s < K(); ++s) net += target(s);
    return net;
}

bool operator==(const Sample& a, const Sample& b) {
    return a.vehicle == b.vehicle && a.case_id == b.case_id && a.section == b.section &&
           a.augmentation == b.augmentation && a.v == b.v && a.rho == b.rho && a.depth == b.depth &&
           a.gravity == b.gravity && a.sub_frac == b.sub_frac && a.sub_depth == b.sub_depth &&
           a.targets == b.targets;
}

std::vector<Sample> section_average(const CaseRecord& r, double t_cut, int n_sections) {
    if (r.frame != Frame::vehicle) throw DataError("case '" + r.case_id + "' must be converted to the vehicle frame first");
    if (n_sections <= 0) throw ConfigError("section count must be positive");
    const double tol = 1e-9 * std::max(r.dt, 1e-12);
    std::size_t first = 0;
    while (first < r.steps() && r.t[first] <= t_cut + tol) ++first;
    const std::size_t kept = r.steps() - first;
    if (kept == 0 || kept < static_cast<std::size_t>(n_sections))
        throw DataError("case '" + r.case_id + "' is too short: " + std::to_string(kept) + " steps after t > " +
                        std::to_string(t_cut) + " s");
    if (kept % static_cast<std::size_t>(n_sections) != 0)
        throw DataError("case '" + r.case_id + "': " + std::to_string(kept) + " retained steps do not split into " +
                        std::to_string(n_sections) + " equal sections");
    const std::size_t per = kept / static_cast<std::size_t>(n_sections);
    const std::size_t K = r.surfaces.size();

    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(n_sections));
    for (int sec = 0; sec < n_sections; ++sec) {
        Sample s;
        s.vehicle = r.vehicle;
        s.case_id = r.case_id;
        s.section = sec;
        s.v = vehicle_velocity(r.params);
        s.rho = r.params.rho;
        s.depth = r.params.H;
        s.targets.assign(K * 3, 0.0);
        const std::size_t lo = first + static_cast<std::size_t>(sec) * per;
        for (std::size_t k = lo; k < lo + per; ++k)
            for (std::size_t c = 0; c < K * 3; ++c) s.targets[c] += r.forces[k * K * 3 + c];
        for (auto& x : s.targets) x = x / static_cast<double>(per) / r.params.rho;
        out.push_back(std::move(s));
    }
    return out;
}

void fill_submergence(Sample& sample, const geometry::VehicleGeometry& g) {
    const double zw = water_level(g.spec, sample.depth);
    sample.sub_frac.resize(g.K());
    sample.sub_depth.resize(g.K());
    for (std::size_t s = 0; s < g.K(); ++s) {
        const auto m = features::submergence_metrics(g.patches[s].depth_samples, zw, g.spec.H_sub);
        sample.sub_frac[s] = m.sub_frac;
        sample.sub_depth[s] = m.sub_depth_norm;
    }
}

namespace {

SymmetryMap build_map(const geometry::VehicleGeometry& g, const std::vector<geometry::NamePair>& pairs,
                      const char* op) {
    SymmetryMap m;
    constexpr auto unset = static_cast<std::size_t>(-1);
    m.partner.assign(g.K(), unset);
    for (const auto& [a, b] : pairs) {
        const auto ia = g.patch_index(a), ib = g.patch_index(b);
        if (m.partner[ia] != unset || m.partner[ib] != unset)
            throw DataError(std::string(op) + ": patch in more than one pair (" + a + ", " + b + ")");
        m.partner[ia] = ib;
        m.partner[ib] = ia;
    }
    for (std::size_t s = 0; s < g.K(); ++s) {
        if (m.partner[s] != unset) continue;
        const auto& name = g.patches[s].name;
        const auto& plane = g.spec.symmetry_plane_patches;
        if (std::find(plane.begin(), plane.end(), name) == plane.end())
            throw DataError(std::string(op) + ": patch '" + name + "' has no partner and is not on the symmetry plane");
        m.partner[s] = s;
    }
    return m;
}

// Reflects one axis of every vector field and permutes per-surface arrays.
Sample reflect(const Sample& in, const SymmetryMap& map, int axis, unsigned bit) {
    if (in.K() != map.partner.size() || in.targets.size() != 3 * map.partner.size())
        throw DataError("sample surface count does not match the vehicle");
    Sample out = in;
    out.v[axis] = -in.v[axis];
    out.gravity[axis] = -in.gravity[axis];
    for (std::size_t s = 0; s < in.K(); ++s) {
        const std::size_t d = map.partner[s];
        out.sub_frac[d] = in.sub_frac[s];
        out.sub_depth[d] = in.sub_depth[s];
        for (int c = 0; c < 3; ++c) out.targets[3 * d + c] = in.targets[3 * s + c];
        out.targets[3 * d + axis] = -in.targets[3 * s + axis];
    }
    out.augmentation = in.augmentation ^ bit;
    return out;
}

}  // namespace

SymmetryMap mirror_map(const geometry::VehicleGeometry& g) { return build_map(g, g.spec.mirror_pairs, "mirror"); }
SymmetryMap reverse_map(const geometry::VehicleGeometry& g) { return build_map(g, g.spec.swap_pairs, "reverse"); }

Sample mirror_lateral(const Sample& s, const SymmetryMap& m) { return reflect(s, m, 1, kAugMirror); }
Sample reverse_longitudinal(const Sample& s, const SymmetryMap& m) { return reflect(s, m, 0, kAugReverse); }
Sample mirror_lateral(const Sample& s, const geometry::VehicleGeometry& g) { return mirror_lateral(s, mirror_map(g)); }
Sample reverse_longitudinal(const Sample& s, const geometry::VehicleGeometry& g) {
    return reverse_longitudinal(s, reverse_map(g));
}

std::vector<Sample> augment(const std::vector<Sample>& base, const geometry::VehicleGeometry& g) {
    const auto mm = mirror_map(g);
    const auto rm = reverse_map(g);
    std::vector<Sample> out;
    out.reserve(base.size() * 4);
    for (const auto& s : base) {
        out.push_back(s);
        out.push_back(mirror_lateral(s, mm));
        out.push_back(reverse_longitudinal(s, rm));
        out.push_back(reverse_longitudinal(mirror_lateral(s, mm), rm));
    }
    return out;
}

std::vector<double> sample_global_features(const Sample& s, const geometry::VehicleSpec& spec, bool with_dims,
                                           const features::PhysicalConstants& k) {
    features::PhysicalConstants kk = k;
    kk.g = std::abs(s.gravity.z);
    return features::global_features(s.v, s.rho, s.depth, spec, kk).to_vector(with_dims);
}

features::SurfaceTensor sample_surface_features(const Sample& s, const geometry::VehicleGeometry& g) {
    if (s.K() != g.K()) throw DataError("sample for '" + s.vehicle + "' has the wrong surface count");
    features::SurfaceTensor t;
    t.K = g.K();
    t.data.assign(t.K * features::kSurfaceDim, 0.0);
    const double LH = g.spec.L_ref * g.spec.H_ref;
    for (std::size_t p = 0; p < t.K; ++p) {
        double* row = t.row(p);
        features::write_static_block(g.patches[p], g.spec, row);
        row[features::kSubFrac] = s.sub_frac[p];
        row[features::kSubDepth] = s.sub_depth[p];
        row[features::kProjArea] = features::projected_area(g.patches[p].normal, g.patches[p].area, s.v) / LH;
    }
    return t;
}

Split split_dataset(const std::vector<Sample>& samples, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("split fraction must be in (0, 1)");
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& s : samples) keys.emplace(s.vehicle, s.case_id);
    std::vector<std::pair<std::string, std::string>> groups(keys.begin(), keys.end());
    Rng rng(seed);
    shuffle(groups.begin(), groups.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(groups.size())));
    std::set<std::pair<std::string, std::string>> train_keys(groups.begin(),
                                                              groups.begin() + static_cast<std::ptrdiff_t>(n_train));
    Split split;
    for (std::size_t i = 0; i < samples.size(); ++i)
        (train_keys.count({samples[i].vehicle, samples[i].case_id}) ? split.train : split.val).push_back(i);
    return split;
}

json to_json(const Sample& s) {
    return {{"vehicle", s.vehicle},
            {"case_id", s.case_id},
            {"section", s.section},
            {"aug", augmentation_tag(s.augmentation)},
            {"v", {s.v.x, s.v.y, s.v.z}},
            {"rho", s.rho},
            {"depth", s.depth},
            {"gravity", {s.gravity.x, s.gravity.y, s.gravity.z}},
            {"sub_frac", s.sub_frac},
            {"sub_depth", s.sub_depth},
            {"targets", s.targets}};
}

Sample sample_from_json(const json& j) {
    try {
        Sample s;
        s.vehicle = j.at("vehicle").get<std::string>();
        s.case_id = j.at("case_id").get<std::string>();
        s.section = j.at("section").get<int>();
        s.augmentation = parse_augmentation_tag(j.at("aug").get<std::string>());
        const auto v = j.at("v").get<std::vector<double>>();
        const auto g = j.at("gravity").get<std::vector<double>>();
        if (v.size() != 3 || g.size() != 3) throw DataError("sample vectors must have 3 entries");
        s.v = {v[0], v[1], v[2]};
        s.gravity = {g[0], g[1], g[2]};
        s.rho = j.at("rho").get<double>();
        s.depth = j.at("depth").get<double>();
        s.sub_frac = j.at("sub_frac").get<std::vector<double>>();
        s.sub_depth = j.at("sub_depth").get<std::vector<double>>();
        s.targets = j.at("targets").get<std::vector<double>>();
        if (s.sub_depth.size() != s.K() || s.targets.size() != 3 * s.K())
            throw DataError("sample array lengths disagree");
        for (double t : s.targets)
            if (!std::isfinite(t)) throw DataError("non-finite target in sample '" + s.case_id + "'");
        return s;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid sample record: ") + e.what());
    }
}

}  // namespace hydrosurr::dataset
