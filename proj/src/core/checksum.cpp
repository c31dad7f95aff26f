#include "hydrosurr/core/checksum.hpp"

#include <zlib.h>

namespace hydrosurr {

std::uint32_t crc32(std::span<const std::byte> data, std::uint32_t seed) {
    uLong crc = seed;
    const auto* p = reinterpret_cast<const Bytef*>(data.data());
    std::size_t left = data.size();
    while (left > 0) {
        const auto n = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
        crc = ::crc32(crc, p, n);
        p += n;
        left -= n;
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32(std::string_view text, std::uint32_t seed) {
    return crc32(std::as_bytes(std::span(text.data(), text.size())), seed);
}

}  // namespace hydrosurr
