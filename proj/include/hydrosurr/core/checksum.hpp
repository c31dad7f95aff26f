#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace hydrosurr {

/// CRC-32 (zlib polynomial), chainable through `seed`.
std::uint32_t crc32(std::span<const std::byte> data, std::uint32_t seed = 0);
std::uint32_t crc32(std::string_view text, std::uint32_t seed = 0);

}  // namespace hydrosurr
