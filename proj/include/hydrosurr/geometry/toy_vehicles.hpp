#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hydrosurr/geometry/mesh.hpp"
#include "hydrosurr/geometry/patches.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

namespace hydrosurr::geometry {

/// A procedurally built vehicle: mesh in the solver frame (as an STL export
/// would be), its label sidecar and the spec whose load transform maps it to
/// the centered body frame.
struct ToyVehicle {
    Mesh solver_mesh;
    std::vector<PatchLabel> labels;
    VehicleSpec spec;
};

/// Box hull with 3-band front/rear faces and four cylinder wheels (K = 13).
ToyVehicle mini_husky();
/// Flat slab with split underbody and four large wheels (K = 10).
ToyVehicle mini_warthog();
ToyVehicle toy_vehicle(const std::string& name);  // "mini-husky" | "mini-warthog"

/// Writes <dir>/<name>.stl, <name>.labels and <name>.json; returns the spec path.
std::filesystem::path write_toy_vehicle(const std::filesystem::path& dir, const ToyVehicle& toy);

/// Body-frame mesh ready for patch decomposition.
Mesh body_mesh(const ToyVehicle& toy);
VehicleGeometry prepare_toy(const ToyVehicle& toy);

}  // namespace hydrosurr::geometry
