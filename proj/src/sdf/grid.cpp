#include "hydrosurr/sdf/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/parallel.hpp"
#include "hydrosurr/sdf/distance.hpp"

namespace hydrosurr::sdf {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kEndianTag = 0x01020304;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}
    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void vec(const Vec3& v) {
        f64(v.x);
        f64(v.y);
        f64(v.z);
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    Reader(std::istream& in, const std::filesystem::path& path) : in_(in), path_(path) {}
    std::uint8_t u8() {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) throw DataError(path_.string() + ": truncated SDF grid file");
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    Vec3 vec() {
        const double x = f64(), y = f64();
        return {x, y, f64()};
    }

private:
    std::istream& in_;
    const std::filesystem::path& path_;
};

void check_lattice(const SdfGrid& g, const Vec3& p, double pad) {
    for (int a = 0; a < 3; ++a) {
        const double lo = g.bounds_min[a] + pad;
        const double hi = g.bounds_min[a] + (g.dims[a] - 1) * g.spacing - pad;
        if (!(p[a] >= lo && p[a] <= hi))
            throw NumericError("point outside SDF grid domain on axis " + std::to_string(a));
    }
}

}  // namespace

SdfGrid build_grid(const geometry::Mesh& mesh, double margin, unsigned jobs) {
    if (!(margin >= 0.0)) throw ConfigError("SDF margin must be >= 0");
    geometry::validate_watertight(mesh);

    SdfGrid g;
    const auto [lo, hi] = mesh.bounds();
    const Vec3 pad{margin, margin, margin};
    g.bounds_min = lo - pad;
    g.bounds_max = hi + pad;
    g.margin = margin;
    const Vec3 extent = g.bounds_max - g.bounds_min;
    g.spacing = std::max({extent.x, extent.y, extent.z}) / kGridDivisions;
    for (int a = 0; a < 3; ++a)
        g.dims[a] = static_cast<std::uint32_t>(std::floor(extent[a] / g.spacing)) + 1;
    g.mesh_hash = geometry::mesh_hash(mesh);

    const MeshDistance dist(mesh);
    g.values.resize(static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2]);
    // One task per x-slab keeps the work split independent of thread count.
    parallel_for(g.dims[0], jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t k = 0; k < g.dims[2]; ++k) g.values[g.index(i, j, k)] = dist.signed_distance(g.node(i, j, k));
    });
    g.near_mask.resize(g.values.size());
    for (std::size_t n = 0; n < g.values.size(); ++n)
        g.near_mask[n] = std::abs(g.values[n]) < 2.0 * g.spacing ? 1 : 0;
    return g;
}

double sample_trilinear(const SdfGrid& g, const Vec3& p) {
    check_lattice(g, p, 0.0);
    std::array<std::size_t, 3> i0{};
    std::array<double, 3> f{};
    for (int a = 0; a < 3; ++a) {
        const double u = (p[a] - g.bounds_min[a]) / g.spacing;
        auto cell = static_cast<std::size_t>(std::floor(u));
        if (cell >= g.dims[a] - 1) cell = g.dims[a] - 2;
        i0[a] = cell;
        f[a] = u - static_cast<double>(cell);
    }
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        const std::size_t di = c >> 2 & 1, dj = c >> 1 & 1, dk = c & 1;
        const double w = (di ? f[0] : 1 - f[0]) * (dj ? f[1] : 1 - f[1]) * (dk ? f[2] : 1 - f[2]);
        acc += w * g.at(i0[0] + di, i0[1] + dj, i0[2] + dk);
    }
    return acc;
}

Vec3 sdf_gradient(const SdfGrid& g, const Vec3& p) {
    check_lattice(g, p, g.spacing);
    Vec3 grad;
    for (int a = 0; a < 3; ++a) {
        Vec3 step{};
        step[a] = g.spacing;
        grad[a] = (sample_trilinear(g, p + step) - sample_trilinear(g, p - step)) / (2.0 * g.spacing);
    }
    return grad;
}

void save_grid(const std::filesystem::path& path, const SdfGrid& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    Writer w(out);
    out.write(kMagic, 4);
    w.u32(kVersion);
    w.u32(kEndianTag);
    for (auto d : g.dims) w.u32(d);
    w.vec(g.bounds_min);
    w.vec(g.bounds_max);
    w.f64(g.spacing);
    w.f64(g.margin);
    w.u32(g.mesh_hash);
    w.u64(g.values.size());
    for (double v : g.values) w.f64(v);
    for (std::size_t n = 0; n < g.values.size(); ++n) w.u8(n < g.near_mask.size() ? g.near_mask[n] : 0);
    if (!out) throw IoError("error writing " + path.string());
}

SdfGrid load_grid(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(path.string() + ": not an SDF grid file");
    Reader r(in, path);
    if (const auto v = r.u32(); v != kVersion)
        throw DataError(path.string() + ": unsupported SDF grid version " + std::to_string(v));
    if (r.u32() != kEndianTag) throw DataError(path.string() + ": bad endianness tag");
    SdfGrid g;
    for (auto& d : g.dims) d = r.u32();
    g.bounds_min = r.vec();
    g.bounds_max = r.vec();
    g.spacing = r.f64();
    g.margin = r.f64();
    g.mesh_hash = r.u32();
    const std::uint64_t count = r.u64();
    if (count != static_cast<std::uint64_t>(g.dims[0]) * g.dims[1] * g.dims[2])
        throw DataError(path.string() + ": value count does not match dims");
    g.values.resize(count);
    for (auto& v : g.values) v = r.f64();
    g.near_mask.resize(count);
    for (auto& m : g.near_mask) m = r.u8();
    return g;
}

}  // namespace hydrosurr::sdf
