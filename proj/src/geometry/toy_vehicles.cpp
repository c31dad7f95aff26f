#include "hydrosurr/geometry/toy_vehicles.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "hydrosurr/core/error.hpp"

namespace hydrosurr::geometry {

namespace {

// Builds labeled closed components with consistent outward winding.
class Builder {
public:
    void add_triangle(Vec3 a, Vec3 b, Vec3 c, const Vec3& interior, const std::string& label) {
        const Vec3 n = cross(b - a, c - a);
        const Vec3 centroid = (a + b + c) / 3.0;
        if (dot(n, centroid - interior) < 0.0) std::swap(b, c);
        tris_.push_back({a, b, c});
        labels_.push_back(label);
    }

    void add_quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& interior,
                  const std::string& label) {
        add_triangle(a, b, c, interior, label);
        add_triangle(a, c, d, interior, label);
    }

    /// Axis-aligned box whose faces are gridded on the given breakpoints so
    /// neighbouring faces share edges exactly. `label_of(axis, side, cell_center)`
    /// names the patch of each grid cell ("" leaves it unlabeled).
    template <class LabelFn>
    void add_box(const std::array<std::vector<double>, 3>& breaks, LabelFn label_of) {
        const Vec3 interior{(breaks[0].front() + breaks[0].back()) / 2, (breaks[1].front() + breaks[1].back()) / 2,
                            (breaks[2].front() + breaks[2].back()) / 2};
        for (int axis = 0; axis < 3; ++axis) {
            const int u = (axis + 1) % 3;
            const int v = (axis + 2) % 3;
            for (int side = 0; side < 2; ++side) {
                const double w = side == 0 ? breaks[axis].front() : breaks[axis].back();
                const auto& bu = breaks[u];
                const auto& bv = breaks[v];
                for (std::size_t i = 0; i + 1 < bu.size(); ++i)
                    for (std::size_t j = 0; j + 1 < bv.size(); ++j) {
                        auto pt = [&](double pu, double pv) {
                            Vec3 p;
                            p[axis] = w;
                            p[u] = pu;
                            p[v] = pv;
                            return p;
                        };
                        const Vec3 center = pt((bu[i] + bu[i + 1]) / 2, (bv[j] + bv[j + 1]) / 2);
                        add_quad(pt(bu[i], bv[j]), pt(bu[i + 1], bv[j]), pt(bu[i + 1], bv[j + 1]),
                                 pt(bu[i], bv[j + 1]), interior, label_of(axis, side, center));
                    }
            }
        }
    }

    /// Closed cylinder with its axis along body Y.
    void add_wheel(const Vec3& center, double radius, double width, int segments, const std::string& label) {
        const double y0 = center.y - width / 2;
        const double y1 = center.y + width / 2;
        auto rim = [&](int k, double y) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(k % segments) / segments;
            return Vec3{center.x + radius * std::cos(t), y, center.z + radius * std::sin(t)};
        };
        const Vec3 c0{center.x, y0, center.z};
        const Vec3 c1{center.x, y1, center.z};
        for (int k = 0; k < segments; ++k) {
            add_quad(rim(k, y0), rim(k + 1, y0), rim(k + 1, y1), rim(k, y1), center, label);
            add_triangle(c0, rim(k, y0), rim(k + 1, y0), center, label);
            add_triangle(c1, rim(k, y1), rim(k + 1, y1), center, label);
        }
    }

    /// Converts body-frame triangles to the solver frame and groups faces by label.
    void finish(ToyVehicle& out, const std::map<std::string, SurfaceType>& types,
                const std::vector<std::string>& order) const {
        const Mat3 to_solver = solver_to_body_rotation().transposed();
        std::vector<Triangle> solver;
        solver.reserve(tris_.size());
        for (const auto& t : tris_) solver.push_back({to_solver * t.a, to_solver * t.b, to_solver * t.c});
        out.solver_mesh = mesh_from_triangles(solver);
        out.solver_mesh.frame = "solver";
        for (const auto& name : order) {
            PatchLabel label{name, types.at(name), {}};
            for (std::size_t f = 0; f < labels_.size(); ++f)
                if (labels_[f] == name) label.faces.push_back(static_cast<std::uint32_t>(f));
            out.labels.push_back(std::move(label));
        }
    }

    std::pair<Vec3, Vec3> bounds() const {
        Vec3 lo = tris_.front().a, hi = lo;
        for (const auto& t : tris_)
            for (const auto& p : {t.a, t.b, t.c}) {
                lo = cwise_min(lo, p);
                hi = cwise_max(hi, p);
            }
        return {lo, hi};
    }

private:
    std::vector<Triangle> tris_;
    std::vector<std::string> labels_;
};

struct WheelLayout {
    double x, y, z, radius, width;
};

void add_wheels(Builder& b, const WheelLayout& w) {
    b.add_wheel({+w.x, +w.y, w.z}, w.radius, w.width, 24, "wheel_front_left");
    b.add_wheel({+w.x, -w.y, w.z}, w.radius, w.width, 24, "wheel_front_right");
    b.add_wheel({-w.x, +w.y, w.z}, w.radius, w.width, 24, "wheel_rear_left");
    b.add_wheel({-w.x, -w.y, w.z}, w.radius, w.width, 24, "wheel_rear_right");
}

// Centers the body-frame bounding box at the origin after rotation.
void set_load_transform(VehicleSpec& spec, const Builder& b) {
    const auto [lo, hi] = b.bounds();
    spec.load_transform.rotation = solver_to_body_rotation();
    spec.load_transform.translation = -0.5 * (lo + hi);
    spec.z_0 = -0.5 * (lo.z + hi.z);  // ground (z = 0 before centering)
}

const std::vector<NamePair> kWheelMirror{{"wheel_front_left", "wheel_front_right"},
                                         {"wheel_rear_left", "wheel_rear_right"}};
const std::vector<NamePair> kWheelSwap{{"wheel_front_left", "wheel_rear_left"},
                                       {"wheel_front_right", "wheel_rear_right"}};

}  // namespace

ToyVehicle mini_husky() {
    Builder b;
    const std::array<std::vector<double>, 3> breaks{
        std::vector<double>{-0.43, 0.43}, std::vector<double>{-0.21, 0.21},
        std::vector<double>{0.08, 0.16, 0.26, 0.38}};
    b.add_box(breaks, [](int axis, int side, const Vec3& c) -> std::string {
        if (axis == 0) {
            const std::string prefix = side == 1 ? "front_" : "rear_";
            return prefix + (c.z < 0.16 ? "lower" : c.z < 0.26 ? "mid" : "upper");
        }
        if (axis == 1) return side == 1 ? "side_left" : "side_right";
        return side == 0 ? "bottom" : "";
    });
    add_wheels(b, {0.27, 0.265, 0.11, 0.11, 0.07});

    ToyVehicle out;
    const std::vector<std::string> order{"bottom",         "front_lower",      "front_mid",
                                         "front_upper",    "rear_lower",       "rear_mid",
                                         "rear_upper",     "side_left",        "side_right",
                                         "wheel_front_left", "wheel_front_right", "wheel_rear_left",
                                         "wheel_rear_right"};
    std::map<std::string, SurfaceType> types;
    for (const auto& n : order) {
        if (n == "bottom") types[n] = SurfaceType::bottom;
        else if (n.rfind("front", 0) == 0) types[n] = SurfaceType::front;
        else if (n.rfind("rear", 0) == 0) types[n] = SurfaceType::rear;
        else if (n.rfind("side", 0) == 0) types[n] = SurfaceType::side;
        else types[n] = SurfaceType::wheel;
    }
    b.finish(out, types, order);

    auto& s = out.spec;
    s.name = "mini-husky";
    s.patch_count = 13;
    s.L_ref = 0.86;
    s.W_ref = 0.60;
    s.H_ref = 0.38;
    s.H_sub = 0.366;
    s.mirror_pairs = {{"side_left", "side_right"}};
    s.mirror_pairs.insert(s.mirror_pairs.end(), kWheelMirror.begin(), kWheelMirror.end());
    s.swap_pairs = {{"front_lower", "rear_lower"}, {"front_mid", "rear_mid"}, {"front_upper", "rear_upper"}};
    s.swap_pairs.insert(s.swap_pairs.end(), kWheelSwap.begin(), kWheelSwap.end());
    s.symmetry_plane_patches = {"bottom", "front_lower", "front_mid", "front_upper", "rear_lower",
                                "rear_mid", "rear_upper", "side_left", "side_right"};
    s.merge_groups = {{"front", {"front_lower", "front_mid", "front_upper"}},
                      {"rear", {"rear_lower", "rear_mid", "rear_upper"}}};
    s.mesh_path = "mini-husky.stl";
    s.labels_path = "mini-husky.labels";
    s.r_cp = {0.2, 0.0, -0.63};
    s.marker_to_origin = {0.2, 0.0, -0.63};
    set_load_transform(s, b);
    return out;
}

ToyVehicle mini_warthog() {
    Builder b;
    const std::array<std::vector<double>, 3> breaks{std::vector<double>{-0.76, 0.76},
                                                    std::vector<double>{-0.45, 0.0, 0.45},
                                                    std::vector<double>{0.08, 0.50}};
    b.add_box(breaks, [](int axis, int side, const Vec3& c) -> std::string {
        if (axis == 0) return side == 1 ? "front" : "rear";
        if (axis == 1) return side == 1 ? "side_left" : "side_right";
        if (side == 0) return c.y > 0 ? "bottom_left" : "bottom_right";
        return "";
    });
    add_wheels(b, {0.50, 0.555, 0.25, 0.25, 0.15});

    ToyVehicle out;
    const std::vector<std::string> order{"bottom_left",      "bottom_right",      "front",
                                         "rear",             "side_left",         "side_right",
                                         "wheel_front_left", "wheel_front_right", "wheel_rear_left",
                                         "wheel_rear_right"};
    std::map<std::string, SurfaceType> types{{"bottom_left", SurfaceType::bottom},
                                             {"bottom_right", SurfaceType::bottom},
                                             {"front", SurfaceType::front},
                                             {"rear", SurfaceType::rear},
                                             {"side_left", SurfaceType::side},
                                             {"side_right", SurfaceType::side}};
    for (const auto& [a, c] : kWheelMirror) {
        types[a] = SurfaceType::wheel;
        types[c] = SurfaceType::wheel;
    }
    b.finish(out, types, order);

    auto& s = out.spec;
    s.name = "mini-warthog";
    s.patch_count = 10;
    s.L_ref = 1.52;
    s.W_ref = 1.26;
    s.H_ref = 0.50;
    s.H_sub = 0.50;
    s.mirror_pairs = {{"side_left", "side_right"}, {"bottom_left", "bottom_right"}};
    s.mirror_pairs.insert(s.mirror_pairs.end(), kWheelMirror.begin(), kWheelMirror.end());
    s.swap_pairs = {{"front", "rear"}};
    s.swap_pairs.insert(s.swap_pairs.end(), kWheelSwap.begin(), kWheelSwap.end());
    s.symmetry_plane_patches = {"front", "rear", "side_left", "side_right", "bottom_left", "bottom_right"};
    s.mesh_path = "mini-warthog.stl";
    s.labels_path = "mini-warthog.labels";
    s.r_cp = {0.2, 0.0, -0.63};
    s.marker_to_origin = {0.2, 0.0, -0.63};
    set_load_transform(s, b);
    return out;
}

ToyVehicle toy_vehicle(const std::string& name) {
    if (name == "mini-husky") return mini_husky();
    if (name == "mini-warthog") return mini_warthog();
    throw ConfigError("unknown toy vehicle '" + name + "' (expected mini-husky or mini-warthog)");
}

std::filesystem::path write_toy_vehicle(const std::filesystem::path& dir, const ToyVehicle& toy) {
    std::filesystem::create_directories(dir);
    write_stl_binary(dir / toy.spec.mesh_path.filename(), toy.solver_mesh);
    write_patch_labels(dir / toy.spec.labels_path.filename(), toy.labels);
    VehicleSpec spec = toy.spec;
    spec.mesh_path = spec.mesh_path.filename();
    spec.labels_path = spec.labels_path.filename();
    const auto path = dir / (toy.spec.name + ".json");
    write_vehicle_spec(path, spec);
    return path;
}

Mesh body_mesh(const ToyVehicle& toy) {
    Mesh m = transformed(toy.solver_mesh, toy.spec.load_transform, "body");
    validate_watertight(m);
    return m;
}

VehicleGeometry prepare_toy(const ToyVehicle& toy) {
    return prepare_geometry(toy.spec, body_mesh(toy), toy.labels);
}

}  // namespace hydrosurr::geometry
