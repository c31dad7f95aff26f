#include "hydrosurr/geometry/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "hydrosurr/core/checksum.hpp"
#include "hydrosurr/core/error.hpp"

namespace hydrosurr::geometry {

double Mesh::face_area(std::size_t f) const {
    const auto t = triangle(f);
    return 0.5 * norm(cross(t.b - t.a, t.c - t.a));
}

Vec3 Mesh::face_normal(std::size_t f) const {
    const auto t = triangle(f);
    const Vec3 n = cross(t.b - t.a, t.c - t.a);
    const double len = norm(n);
    return len > 0.0 ? n / len : Vec3{};
}

Vec3 Mesh::face_centroid(std::size_t f) const {
    const auto t = triangle(f);
    return (t.a + t.b + t.c) / 3.0;
}

double Mesh::total_area() const {
    double s = 0.0;
    for (std::size_t f = 0; f < faces.size(); ++f) s += face_area(f);
    return s;
}

std::pair<Vec3, Vec3> Mesh::bounds() const {
    if (vertices.empty()) return {};
    Vec3 lo = vertices.front(), hi = vertices.front();
    for (const auto& v : vertices) {
        lo = cwise_min(lo, v);
        hi = cwise_max(hi, v);
    }
    return {lo, hi};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary_edges(const Mesh& mesh) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> uses;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            auto a = f[static_cast<std::size_t>(e)], b = f[static_cast<std::size_t>((e + 1) % 3)];
            if (a > b) std::swap(a, b);
            ++uses[{a, b}];
        }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> bad;
    for (const auto& [edge, n] : uses)
        if (n != 2) bad.push_back(edge);
    return bad;
}

void validate_watertight(const Mesh& mesh) {
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        if (!is_finite(mesh.vertices[i]))
            throw DataError("mesh vertex " + std::to_string(i) + " is not finite");
    if (mesh.faces.empty()) throw DataError("mesh has no faces");
    const auto [lo, hi] = mesh.bounds();
    const double diag = norm(hi - lo);
    const double min_area = 1e-15 * diag * diag;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& idx = mesh.faces[f];
        for (auto i : idx)
            if (i >= mesh.vertices.size())
                throw DataError("face " + std::to_string(f) + " references missing vertex " +
                                std::to_string(i));
        if (!(mesh.face_area(f) > min_area))
            throw DataError("face " + std::to_string(f) + " has zero area");
    }
    const auto open = boundary_edges(mesh);
    if (!open.empty()) {
        std::ostringstream msg;
        msg << "mesh is not watertight: " << open.size() << " boundary edge(s):";
        for (std::size_t i = 0; i < std::min<std::size_t>(open.size(), 16); ++i)
            msg << " (" << open[i].first << "," << open[i].second << ")";
        if (open.size() > 16) msg << " ...";
        throw DataError(msg.str());
    }
}

namespace {

float read_f32_le(const unsigned char* p) {
    std::uint32_t u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
                      std::uint32_t(p[3]) << 24;
    return std::bit_cast<float>(u);
}

void write_u32_le(std::ostream& out, std::uint32_t u) {
    const unsigned char b[4] = {static_cast<unsigned char>(u), static_cast<unsigned char>(u >> 8),
                                static_cast<unsigned char>(u >> 16), static_cast<unsigned char>(u >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::vector<Triangle> parse_ascii_stl(const std::string& text, const std::string& where) {
    std::istringstream in(text);
    std::vector<Triangle> tris;
    std::string token;
    std::vector<Vec3> pending;
    while (in >> token) {
        if (token == "vertex") {
            Vec3 v;
            if (!(in >> v.x >> v.y >> v.z)) throw DataError(where + ": malformed vertex line");
            pending.push_back(v);
        } else if (token == "endfacet") {
            if (pending.size() != 3)
                throw DataError(where + ": facet " + std::to_string(tris.size()) + " has " +
                                std::to_string(pending.size()) + " vertices");
            tris.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
        }
    }
    if (tris.empty()) throw DataError(where + ": no facets found");
    return tris;
}

}  // namespace

std::vector<Triangle> read_stl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open STL file " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading STL file " + path.string());

    // Binary STLs may also start with "solid", so the size equation decides.
    if (data.size() >= 84) {
        const std::uint32_t n = std::uint32_t(static_cast<unsigned char>(data[80])) |
            std::uint32_t(static_cast<unsigned char>(data[81])) << 8 |
            std::uint32_t(static_cast<unsigned char>(data[82])) << 16 |
            std::uint32_t(static_cast<unsigned char>(data[83])) << 24;
        if (data.size() == 84 + 50ull * n && n > 0) {
            std::vector<Triangle> tris(n);
            const auto* p = reinterpret_cast<const unsigned char*>(data.data()) + 84;
            for (std::uint32_t i = 0; i < n; ++i, p += 50) {
                Vec3 v[3];
                for (int k = 0; k < 3; ++k)
                    v[k] = {read_f32_le(p + 12 + 12 * k), read_f32_le(p + 16 + 12 * k),
                            read_f32_le(p + 20 + 12 * k)};
                tris[i] = {v[0], v[1], v[2]};
            }
            return tris;
        }
    }
    if (data.rfind("solid", 0) == 0) return parse_ascii_stl(data, path.string());
    throw DataError(path.string() + " is neither a valid binary nor ASCII STL");
}

void write_stl_ascii(const std::filesystem::path& path, const Mesh& mesh, const std::string& solid_name) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    out << "solid " << solid_name << '\n';
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto n = mesh.face_normal(f);
        const auto t = mesh.triangle(f);
        out << "  facet normal " << n.x << ' ' << n.y << ' ' << n.z << "\n    outer loop\n";
        for (const auto& v : {t.a, t.b, t.c}) out << "      vertex " << v.x << ' ' << v.y << ' ' << v.z << '\n';
        out << "    endloop\n  endfacet\n";
    }
    out << "endsolid " << solid_name << '\n';
}

void write_stl_binary(const std::filesystem::path& path, const Mesh& mesh) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    char header[80] = {};
    std::memcpy(header, "hydrosurr binary stl", 20);
    out.write(header, 80);
    write_u32_le(out, static_cast<std::uint32_t>(mesh.faces.size()));
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto n = mesh.face_normal(f);
        const auto t = mesh.triangle(f);
        for (const auto& v : {n, t.a, t.b, t.c})
            for (int k = 0; k < 3; ++k) write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v[k])));
        const char attr[2] = {0, 0};
        out.write(attr, 2);
    }
}

Mesh mesh_from_triangles(const std::vector<Triangle>& tris) {
    Mesh mesh;
    mesh.frame = "source";
    std::map<std::array<std::uint64_t, 3>, std::uint32_t> index;
    auto vid = [&](const Vec3& v) {
        const std::array<std::uint64_t, 3> key{std::bit_cast<std::uint64_t>(v.x + 0.0),
                                               std::bit_cast<std::uint64_t>(v.y + 0.0),
                                               std::bit_cast<std::uint64_t>(v.z + 0.0)};
        auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
        if (inserted) mesh.vertices.push_back(v);
        return it->second;
    };
    mesh.faces.reserve(tris.size());
    for (const auto& t : tris) mesh.faces.push_back({vid(t.a), vid(t.b), vid(t.c)});
    return mesh;
}

Mesh transformed(const Mesh& mesh, const RigidTransform& transform, std::string frame) {
    Mesh out = mesh;
    for (auto& v : out.vertices) v = transform.apply(v);
    // Reflections flip the winding-derived normals back to outward.
    if (transform.rotation.determinant() < 0.0)
        for (auto& f : out.faces) std::swap(f[1], f[2]);
    out.frame = std::move(frame);
    return out;
}

Mesh load_mesh(const std::filesystem::path& path, const RigidTransform& transform) {
    Mesh mesh = transformed(mesh_from_triangles(read_stl(path)), transform, "body");
    validate_watertight(mesh);
    return mesh;
}

std::uint32_t mesh_hash(const Mesh& mesh) {
    std::uint32_t h = crc32(std::as_bytes(std::span(mesh.vertices.data(), mesh.vertices.size())));
    return crc32(std::as_bytes(std::span(mesh.faces.data(), mesh.faces.size())), h);
}

}  // namespace hydrosurr::geometry
