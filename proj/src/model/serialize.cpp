#include "hydrosurr/model/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hydrosurr/core/checksum.hpp"
#include "hydrosurr/core/error.hpp"
#include "hydrosurr/features/features.hpp"

namespace hydrosurr::model {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'R', 'G'};

struct Out {
    std::vector<unsigned char> b;
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
    void f64(double v) {
        const auto u = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(u >> (8 * i)));
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        b.insert(b.end(), s.begin(), s.end());
    }
    void f64s(const double* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) f64(p[i]);
    }
};

struct In {
    const std::vector<unsigned char>& b;
    std::size_t pos;
    const std::string& where;
    void need(std::size_t n) const {
        if (pos + n > b.size()) throw DataError(where + ": truncated weight file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[pos++]) << (8 * i);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[pos++]) << (8 * i);
        return std::bit_cast<double>(v);
    }
    std::string str() {
        const auto n = u32();
        need(n);
        std::string s(b.begin() + static_cast<std::ptrdiff_t>(pos), b.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
        return s;
    }
};

}  // namespace

std::vector<unsigned char> serialize(const Surrogate& m) {
    m.check();
    Out o;
    o.b.insert(o.b.end(), kMagic, kMagic + 4);
    o.u32(kWeightFileVersion);
    o.u32(static_cast<std::uint32_t>(m.feature_schema));
    o.u32(static_cast<std::uint32_t>(m.surface_dim));
    o.u32(static_cast<std::uint32_t>(m.global_dim));
    o.u32(static_cast<std::uint32_t>(m.hidden));
    o.u32(static_cast<std::uint32_t>(Surrogate::out_dim));
    o.str(m.variant);
    o.str(m.config_fingerprint);
    o.u32(static_cast<std::uint32_t>(m.stats.mu_G.size()));
    o.f64s(m.stats.mu_G.data(), m.stats.mu_G.size());
    o.f64s(m.stats.sigma_G.data(), m.stats.sigma_G.size());
    o.f64s(m.stats.mu_Y.data(), 3);
    o.f64s(m.stats.sigma_Y.data(), 3);
    const auto sizes = m.tensor_sizes();
    const auto ts = m.tensors();
    for (std::size_t i = 0; i < ts.size(); ++i) o.f64s(ts[i], sizes[i]);
    o.u32(crc32(std::span<const std::byte>(reinterpret_cast<const std::byte*>(o.b.data()), o.b.size())));
    return o.b;
}

Surrogate deserialize(const std::vector<unsigned char>& bytes, const std::string& where) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw DataError(where + ": not a weight file");
    const std::size_t body = bytes.size() - 4;
    In tail{bytes, body, where};
    const auto stored = tail.u32();
    const auto actual = crc32(std::span<const std::byte>(reinterpret_cast<const std::byte*>(bytes.data()), body));
    if (stored != actual) throw DataError(where + ": checksum mismatch (file corrupted)");

    In in{bytes, 4, where};
    if (const auto v = in.u32(); v != kWeightFileVersion)
        throw DataError(where + ": unsupported weight file version " + std::to_string(v));
    Surrogate m;
    m.feature_schema = static_cast<int>(in.u32());
    if (m.feature_schema != features::kSchemaVersion)
        throw DataError(where + ": feature schema " + std::to_string(m.feature_schema) + " does not match " +
                        std::to_string(features::kSchemaVersion));
    m.surface_dim = in.u32();
    m.global_dim = in.u32();
    m.hidden = in.u32();
    if (in.u32() != Surrogate::out_dim) throw DataError(where + ": unexpected output width");
    m.variant = in.str();
    m.config_fingerprint = in.str();
    const auto D = in.u32();
    m.stats.mu_G.resize(D);
    m.stats.sigma_G.resize(D);
    for (auto& x : m.stats.mu_G) x = in.f64();
    for (auto& x : m.stats.sigma_G) x = in.f64();
    for (auto& x : m.stats.mu_Y) x = in.f64();
    for (auto& x : m.stats.sigma_Y) x = in.f64();
    if (D != m.global_dim) throw DataError(where + ": normalization stats do not match the global width");
    m.resize();
    const auto sizes = m.tensor_sizes();
    auto ts = m.tensors();
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t e = 0; e < sizes[i]; ++e) ts[i][e] = in.f64();
    if (in.pos != body) throw DataError(where + ": trailing bytes in weight file");
    m.check();
    return m;
}

void save_weights(const std::filesystem::path& path, const Surrogate& m) {
    const auto bytes = serialize(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("error writing " + path.string());
}

Surrogate load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes, path.string());
}

void check_compatible(const Surrogate& m, std::size_t surface_dim, std::size_t global_dim) {
    if (m.surface_dim != surface_dim || m.global_dim != global_dim)
        throw DataError("model expects " + std::to_string(m.surface_dim) + " surface + " +
                        std::to_string(m.global_dim) + " global features, pipeline provides " +
                        std::to_string(surface_dim) + " + " + std::to_string(global_dim));
}

}  // namespace hydrosurr::model
