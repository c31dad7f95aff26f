#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hydrosurr/model/surrogate.hpp"

namespace hydrosurr::model {

inline constexpr std::uint32_t kWeightFileVersion = 1;

/// Little-endian layout (see docs/file_formats.md):
///   "HSRG" u32 version u32 feature_schema u32 surface_dim u32 global_dim u32 hidden u32 out_dim
///   str variant  str config_fingerprint   (str = u32 length + bytes)
///   u32 D  f64 mu_G[D] f64 sigma_G[D] f64 mu_Y[3] f64 sigma_Y[3]
///   f64 W1 b1 W2 b2 W3 b3
///   u32 crc32 of every preceding byte
std::vector<unsigned char> serialize(const Surrogate& model);
/// Throws DataError on checksum, magic or version mismatch.
Surrogate deserialize(const std::vector<unsigned char>& bytes, const std::string& where = "weights");

void save_weights(const std::filesystem::path& path, const Surrogate& model);
Surrogate load_weights(const std::filesystem::path& path);

/// Refuses models whose feature layout differs from what a pipeline will feed.
void check_compatible(const Surrogate& model, std::size_t surface_dim, std::size_t global_dim);

}  // namespace hydrosurr::model
