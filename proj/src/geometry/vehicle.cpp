#include "hydrosurr/geometry/vehicle.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"

namespace hydrosurr::geometry {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw DataError("expected a 3-vector, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::vector<NamePair> pairs_from(const json& j) {
    std::vector<NamePair> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) throw DataError("expected a name pair, got " + p.dump());
        out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return out;
}

json pairs_json(const std::vector<NamePair>& pairs) {
    json out = json::array();
    for (const auto& [a, b] : pairs) out.push_back(json::array({a, b}));
    return out;
}

template <class T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

Mat3 solver_to_body_rotation() { return Mat3::from_rows({0, 0, -1}, {-1, 0, 0}, {0, 1, 0}); }

json to_json(const VehicleSpec& s) {
    json j;
    j["name"] = s.name;
    j["patch_count"] = s.patch_count;
    j["L_ref"] = s.L_ref;
    j["W_ref"] = s.W_ref;
    j["H_ref"] = s.H_ref;
    j["H_sub"] = s.H_sub;
    j["z_0"] = s.z_0;
    if (s.ground_z) j["ground_z"] = *s.ground_z;
    j["mirror_pairs"] = pairs_json(s.mirror_pairs);
    j["swap_pairs"] = pairs_json(s.swap_pairs);
    j["symmetry_plane_patches"] = s.symmetry_plane_patches;
    json groups = json::object();
    for (const auto& [name, members] : s.merge_groups) groups[name] = members;
    j["merge_groups"] = groups;
    j["mesh"] = s.mesh_path.generic_string();
    j["labels"] = s.labels_path.generic_string();
    j["load_transform"] = {{"rotation", s.load_transform.rotation.m},
                           {"translation", vec_json(s.load_transform.translation)}};
    j["samples_per_patch"] = s.samples_per_patch;
    j["sample_seed"] = s.sample_seed;
    j["r_cp"] = vec_json(s.r_cp);
    j["marker_to_origin"] = vec_json(s.marker_to_origin);
    return j;
}

VehicleSpec vehicle_spec_from_json(const json& j, const std::filesystem::path& base_dir) {
    VehicleSpec s;
    try {
        s.name = required<std::string>(j, "name");
        s.patch_count = required<std::size_t>(j, "patch_count");
        s.L_ref = required<double>(j, "L_ref");
        s.W_ref = required<double>(j, "W_ref");
        s.H_ref = required<double>(j, "H_ref");
        s.H_sub = required<double>(j, "H_sub");
        s.z_0 = required<double>(j, "z_0");
        if (j.contains("ground_z")) s.ground_z = j.at("ground_z").get<double>();
        if (j.contains("mirror_pairs")) s.mirror_pairs = pairs_from(j.at("mirror_pairs"));
        if (j.contains("swap_pairs")) s.swap_pairs = pairs_from(j.at("swap_pairs"));
        if (j.contains("symmetry_plane_patches"))
            s.symmetry_plane_patches = j.at("symmetry_plane_patches").get<std::vector<std::string>>();
        if (j.contains("merge_groups"))
            for (const auto& [name, members] : j.at("merge_groups").items())
                s.merge_groups.emplace_back(name, members.get<std::vector<std::string>>());
        auto resolve = [&](const std::string& p) {
            std::filesystem::path path(p);
            return path.empty() || path.is_absolute() ? path : base_dir / path;
        };
        if (j.contains("mesh")) s.mesh_path = resolve(j.at("mesh").get<std::string>());
        if (j.contains("labels")) s.labels_path = resolve(j.at("labels").get<std::string>());
        if (j.contains("load_transform")) {
            const auto& t = j.at("load_transform");
            const auto rot = t.at("rotation").get<std::vector<double>>();
            if (rot.size() != 9) throw DataError("load_transform.rotation must have 9 entries");
            std::copy(rot.begin(), rot.end(), s.load_transform.rotation.m.begin());
            s.load_transform.translation = vec_from(t.at("translation"));
        }
        if (j.contains("samples_per_patch")) s.samples_per_patch = j.at("samples_per_patch").get<std::size_t>();
        if (j.contains("sample_seed")) s.sample_seed = j.at("sample_seed").get<std::uint64_t>();
        if (j.contains("r_cp")) s.r_cp = vec_from(j.at("r_cp"));
        if (j.contains("marker_to_origin")) s.marker_to_origin = vec_from(j.at("marker_to_origin"));
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid vehicle spec: ") + e.what());
    }
    if (!(s.L_ref > 0 && s.W_ref > 0 && s.H_ref > 0)) throw ConfigError("vehicle dimensions must be positive");
    if (!(s.H_sub > 0)) throw ConfigError("H_sub must be positive");
    return s;
}

VehicleSpec read_vehicle_spec(const std::filesystem::path& path) {
    return vehicle_spec_from_json(read_json_file(path), path.parent_path());
}

void write_vehicle_spec(const std::filesystem::path& path, const VehicleSpec& spec) {
    write_json_file(path, to_json(spec));
}

std::size_t VehicleGeometry::patch_index(const std::string& name) const {
    for (std::size_t i = 0; i < patches.size(); ++i)
        if (patches[i].name == name) return i;
    throw DataError("vehicle '" + spec.name + "' has no patch named '" + name + "'");
}

bool VehicleGeometry::has_patch(const std::string& name) const {
    return std::any_of(patches.begin(), patches.end(), [&](const auto& p) { return p.name == name; });
}

void validate_spec(const VehicleSpec& spec, const std::vector<SurfacePatch>& patches) {
    if (spec.patch_count != patches.size())
        throw DataError("vehicle '" + spec.name + "' declares K=" + std::to_string(spec.patch_count) +
                        " but labels define " + std::to_string(patches.size()) + " patches");
    if (!(spec.H_sub > 0)) throw ConfigError("H_sub must be positive");
    auto exists = [&](const std::string& n) {
        return std::any_of(patches.begin(), patches.end(), [&](const auto& p) { return p.name == n; });
    };
    for (const auto* list : {&spec.mirror_pairs, &spec.swap_pairs})
        for (const auto& [a, b] : *list)
            if (!exists(a) || !exists(b))
                throw DataError("symmetry pair (" + a + ", " + b + ") references an unknown patch");
    for (const auto& n : spec.symmetry_plane_patches)
        if (!exists(n)) throw DataError("symmetry-plane patch '" + n + "' does not exist");
    for (const auto& [name, members] : spec.merge_groups)
        for (const auto& m : members)
            if (!exists(m)) throw DataError("merge group '" + name + "' references unknown patch '" + m + "'");
}

VehicleGeometry prepare_geometry(const VehicleSpec& spec, const Mesh& mesh,
                                 const std::vector<PatchLabel>& labels) {
    VehicleGeometry g;
    g.spec = spec;
    g.patches = decompose_patches(mesh, labels);
    validate_spec(spec, g.patches);
    g.mesh_hash = mesh_hash(mesh);

    if (spec.ground_z) {
        g.ground_z = *spec.ground_z;
    } else {
        double lowest = std::numeric_limits<double>::infinity();
        for (const auto& p : g.patches)
            if (p.type == SurfaceType::wheel)
                for (auto f : p.face_ids)
                    for (auto v : mesh.faces[f]) lowest = std::min(lowest, mesh.vertices[v].z);
        if (!std::isfinite(lowest)) lowest = mesh.bounds().first.z;
        g.ground_z = lowest;
    }
    for (std::size_t i = 0; i < g.patches.size(); ++i) {
        auto& p = g.patches[i];
        p.sample_seed = derive_seed(spec.sample_seed, i);
        auto samples = sample_patch_depths(p, mesh, spec.samples_per_patch, g.ground_z, p.sample_seed);
        p.depth_samples = std::move(samples.z);
        p.sample_normals = std::move(samples.normals);
    }
    return g;
}

json patch_to_json(const SurfacePatch& p, bool with_samples) {
    json j;
    j["name"] = p.name;
    j["type"] = std::string(to_string(p.type));
    j["centroid"] = vec_json(p.centroid);
    j["normal"] = vec_json(p.normal);
    j["area"] = p.area;
    j["normal_fallback"] = p.normal_fallback;
    j["face_count"] = p.face_ids.size();
    if (with_samples) {
        j["face_ids"] = p.face_ids;
        j["sample_seed"] = p.sample_seed;
        j["depth_samples"] = p.depth_samples;
        json normals = json::array();
        for (const auto& n : p.sample_normals) normals.push_back(vec_json(n));
        j["sample_normals"] = normals;
    }
    return j;
}

SurfacePatch patch_from_json(const json& j) {
    SurfacePatch p;
    p.name = j.at("name").get<std::string>();
    p.type = parse_surface_type(j.at("type").get<std::string>());
    p.centroid = vec_from(j.at("centroid"));
    p.normal = vec_from(j.at("normal"));
    p.area = j.at("area").get<double>();
    p.normal_fallback = j.value("normal_fallback", false);
    if (j.contains("face_ids")) p.face_ids = j.at("face_ids").get<std::vector<std::uint32_t>>();
    p.sample_seed = j.value("sample_seed", std::uint64_t{0});
    if (j.contains("depth_samples")) p.depth_samples = j.at("depth_samples").get<std::vector<double>>();
    if (j.contains("sample_normals"))
        for (const auto& n : j.at("sample_normals")) p.sample_normals.push_back(vec_from(n));
    return p;
}

json to_json(const VehicleGeometry& g) {
    json j;
    j["schema"] = "hydrosurr-geometry/1";
    j["vehicle"] = to_json(g.spec);
    j["mesh_hash"] = g.mesh_hash;
    j["ground_z"] = g.ground_z;
    j["sample_seed"] = g.spec.sample_seed;
    json patches = json::array();
    for (const auto& p : g.patches) patches.push_back(patch_to_json(p, true));
    j["patches"] = patches;
    return j;
}

VehicleGeometry vehicle_geometry_from_json(const json& j) {
    try {
        if (j.value("schema", "") != "hydrosurr-geometry/1")
            throw DataError("unsupported geometry schema '" + j.value("schema", "") + "'");
        VehicleGeometry g;
        g.spec = vehicle_spec_from_json(j.at("vehicle"), {});
        g.mesh_hash = j.at("mesh_hash").get<std::uint32_t>();
        g.ground_z = j.at("ground_z").get<double>();
        for (const auto& p : j.at("patches")) g.patches.push_back(patch_from_json(p));
        for (const auto& p : g.patches)
            if (p.depth_samples.empty()) throw DataError("patch '" + p.name + "' has no depth samples");
        validate_spec(g.spec, g.patches);
        return g;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid geometry file: ") + e.what());
    }
}

VehicleGeometry read_vehicle_geometry(const std::filesystem::path& path) {
    return vehicle_geometry_from_json(read_json_file(path));
}

void write_vehicle_geometry(const std::filesystem::path& path, const VehicleGeometry& g) {
    write_json_file(path, to_json(g));
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("error writing " + path.string());
}

}  // namespace hydrosurr::geometry
