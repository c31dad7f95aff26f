#pragma once

#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/features/features.hpp"
#include "hydrosurr/geometry/vehicle.hpp"
#include "hydrosurr/model/surrogate.hpp"

namespace hydrosurr::model {

enum class Precision { f64, f32 };
std::string_view to_string(Precision p);

struct InferenceInput {
    Vec3 v{};                 // body-frame velocity (m/s)
    double rho = 1000.0;
    double depth = 0.0;       // quiescent depth fed to the global features (m)
    double z_water = std::numeric_limits<double>::quiet_NaN();  // body-frame level; NaN: z_0 + depth
    Vec3 gravity{0.0, 0.0, -9.81};
};

/// Input -> forces path: global features, submergence, surface features,
/// normalization, forward pass, un-normalization and density scaling.
/// Holds scratch buffers, so one instance serves one thread.
class InferencePipeline {
public:
    InferencePipeline(Surrogate model, geometry::VehicleGeometry geometry, Precision precision = Precision::f64,
                      features::PhysicalConstants constants = {});

    /// Per-surface forces (N); a single net row for the global-only variant.
    const std::vector<Vec3>& predict(const InferenceInput& input);
    Vec3 predict_net(const InferenceInput& input);

    std::size_t rows() const { return rows_; }
    const Surrogate& model() const { return model_; }
    const geometry::VehicleGeometry& geometry() const { return geometry_; }
    Precision precision() const { return precision_; }

private:
    Surrogate model_;
    geometry::VehicleGeometry geometry_;
    Precision precision_;
    features::PhysicalConstants constants_;
    std::size_t rows_ = 0;
    bool with_dims_ = true;

    std::vector<double> static_rows_;  // K x 15 with the static block filled in
    std::vector<double> W1t_, W2t_, W3t_, Z_, H1_, H2_, Y_;
    std::vector<float> W1t32_, W2t32_, W3t32_, b1_32_, b2_32_, b3_32_, Z32_, H1_32_, H2_32_, Y32_;
    std::vector<double> G_, Gn_;
    std::vector<Vec3> forces_;
};

}  // namespace hydrosurr::model
