#include "hydrosurr/geometry/patches.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"

namespace hydrosurr::geometry {

std::string_view to_string(SurfaceType type) {
    switch (type) {
        case SurfaceType::bottom: return "bottom";
        case SurfaceType::front: return "front";
        case SurfaceType::rear: return "rear";
        case SurfaceType::side: return "side";
        case SurfaceType::wheel: return "wheel";
    }
    return "?";
}

SurfaceType parse_surface_type(std::string_view name) {
    for (int i = 0; i < kSurfaceTypeCount; ++i) {
        const auto t = static_cast<SurfaceType>(i);
        if (to_string(t) == name) return t;
    }
    throw DataError("unknown semantic surface type '" + std::string(name) + "'");
}

std::vector<PatchLabel> parse_patch_labels(std::istream& in, const std::string& where) {
    std::vector<PatchLabel> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        PatchLabel label;
        std::string type;
        if (!(fields >> label.name >> type))
            throw DataError(where + ":" + std::to_string(lineno) + ": expected '<name> <type> <faces...>'");
        label.type = parse_surface_type(type);
        long long face = 0;
        while (fields >> face) {
            if (face < 0) throw DataError(where + ":" + std::to_string(lineno) + ": negative face index");
            label.faces.push_back(static_cast<std::uint32_t>(face));
        }
        if (!fields.eof()) throw DataError(where + ":" + std::to_string(lineno) + ": malformed face index");
        if (label.faces.empty())
            throw DataError(where + ":" + std::to_string(lineno) + ": patch '" + label.name + "' has no faces");
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<PatchLabel> read_patch_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open patch labels " + path.string());
    return parse_patch_labels(in, path.string());
}

void write_patch_labels(const std::filesystem::path& path, const std::vector<PatchLabel>& labels) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "# hydrosurr patch labels v1\n# name type face_indices...\n";
    for (const auto& l : labels) {
        out << l.name << ' ' << to_string(l.type);
        for (auto f : l.faces) out << ' ' << f;
        out << '\n';
    }
}

std::vector<SurfacePatch> decompose_patches(const Mesh& mesh, const std::vector<PatchLabel>& labels) {
    std::unordered_map<std::uint32_t, std::size_t> owner;
    std::vector<SurfacePatch> patches;
    patches.reserve(labels.size());
    for (std::size_t p = 0; p < labels.size(); ++p) {
        const auto& label = labels[p];
        for (std::size_t q = 0; q < p; ++q)
            if (labels[q].name == label.name) throw DataError("duplicate patch name '" + label.name + "'");
        SurfacePatch patch;
        patch.name = label.name;
        patch.type = label.type;
        patch.face_ids = label.faces;

        Vec3 weighted_centroid{}, normal_sum{};
        double area = 0.0;
        for (auto f : label.faces) {
            if (f >= mesh.faces.size())
                throw DataError("patch '" + label.name + "' references face " + std::to_string(f) +
                                " but the mesh has " + std::to_string(mesh.faces.size()));
            auto [it, fresh] = owner.try_emplace(f, p);
            if (!fresh)
                throw DataError("face " + std::to_string(f) + " is assigned to both '" +
                                labels[it->second].name + "' and '" + label.name + "'");
            const double a = mesh.face_area(f);
            weighted_centroid += a * mesh.face_centroid(f);
            normal_sum += mesh.face_normal(f);
            area += a;
        }
        patch.area = area;
        patch.centroid = weighted_centroid / area;
        const Vec3 mean_normal = normal_sum / static_cast<double>(label.faces.size());
        const double len = norm(mean_normal);
        if (len < kNormalFallbackThreshold) {
            patch.normal = {1.0, 0.0, 0.0};
            patch.normal_fallback = true;
        } else {
            patch.normal = mean_normal / len;
        }
        patches.push_back(std::move(patch));
    }
    return patches;
}

DepthSamples sample_patch_depths(const SurfacePatch& patch, const Mesh& mesh, std::size_t count,
                                 double ground_z, std::uint64_t seed) {
    if (count < 100) throw ConfigError("depth sample count must be >= 100");
    std::vector<double> cumulative;
    cumulative.reserve(patch.face_ids.size());
    double total = 0.0;
    for (auto f : patch.face_ids) {
        total += mesh.face_area(f);
        cumulative.push_back(total);
    }
    Rng rng(seed);
    DepthSamples out;
    out.z.reserve(count);
    out.normals.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double pick = uniform01(rng) * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        if (it == cumulative.end()) --it;
        const auto f = patch.face_ids[static_cast<std::size_t>(it - cumulative.begin())];
        double u = uniform01(rng), v = uniform01(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const auto t = mesh.triangle(f);
        const Vec3 p = t.a + u * (t.b - t.a) + v * (t.c - t.a);
        if (p.z < ground_z) continue;
        out.z.push_back(p.z);
        out.normals.push_back(mesh.face_normal(f));
    }
    if (out.z.empty()) throw DataError("patch '" + patch.name + "' entirely below ground plane");
    return out;
}

}  // namespace hydrosurr::geometry
