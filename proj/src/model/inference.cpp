#include "hydrosurr/model/inference.hpp"

#include <algorithm>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/dataset/sample.hpp"
#include "hydrosurr/simd/matrix_ops.hpp"

namespace hydrosurr::model {

std::string_view to_string(Precision p) { return p == Precision::f64 ? "f64" : "f32"; }

InferencePipeline::InferencePipeline(Surrogate model, geometry::VehicleGeometry geometry, Precision precision,
                                     features::PhysicalConstants constants)
    : model_(std::move(model)), geometry_(std::move(geometry)), precision_(precision), constants_(constants) {
    model_.check();
    if (model_.feature_schema != features::kSchemaVersion) throw DataError("model feature schema mismatch");
    if (model_.global_dim == features::kGlobalDim) with_dims_ = true;
    else if (model_.global_dim == features::kGlobalDimNoDims) with_dims_ = false;
    else throw DataError("model global width " + std::to_string(model_.global_dim) + " is not a known schema");
    if (model_.surface_dim != 0 && model_.surface_dim != features::kSurfaceDim)
        throw DataError("model surface width " + std::to_string(model_.surface_dim) + " is not a known schema");
    if (model_.stats.global_dim() != model_.global_dim) throw DataError("model lacks matching normalization stats");

    rows_ = model_.surface_dim == 0 ? 1 : geometry_.K();
    static_rows_.assign(geometry_.K() * features::kSurfaceDim, 0.0);
    for (std::size_t s = 0; s < geometry_.K(); ++s)
        features::write_static_block(geometry_.patches[s], geometry_.spec, static_rows_.data() + s * features::kSurfaceDim);

    const std::size_t in = model_.in_dim(), h = model_.hidden, out = Surrogate::out_dim;
    W1t_.resize(in * h);
    W2t_.resize(h * h);
    W3t_.resize(h * out);
    simd::transpose(model_.W1.data(), h, in, W1t_.data());
    simd::transpose(model_.W2.data(), h, h, W2t_.data());
    simd::transpose(model_.W3.data(), out, h, W3t_.data());
    Z_.resize(rows_ * in);
    H1_.resize(rows_ * h);
    H2_.resize(rows_ * h);
    Y_.resize(rows_ * out);
    if (precision_ == Precision::f32) {
        auto cast = [](const std::vector<double>& src, std::vector<float>& dst) {
            dst.resize(src.size());
            std::transform(src.begin(), src.end(), dst.begin(), [](double x) { return static_cast<float>(x); });
        };
        cast(W1t_, W1t32_);
        cast(W2t_, W2t32_);
        cast(W3t_, W3t32_);
        cast(model_.b1, b1_32_);
        cast(model_.b2, b2_32_);
        cast(model_.b3, b3_32_);
        Z32_.resize(Z_.size());
        H1_32_.resize(H1_.size());
        H2_32_.resize(H2_.size());
        Y32_.resize(Y_.size());
    }
    Gn_.resize(model_.global_dim);
    forces_.resize(rows_);
}

const std::vector<Vec3>& InferencePipeline::predict(const InferenceInput& x) {
    const auto& spec = geometry_.spec;
    features::PhysicalConstants k = constants_;
    k.g = std::abs(x.gravity.z);
    G_ = features::global_features(x.v, x.rho, x.depth, spec, k).to_vector(with_dims_);
    model_.stats.normalize_global(G_.data(), Gn_.data());

    const std::size_t in = model_.in_dim(), h = model_.hidden, out = Surrogate::out_dim;
    if (model_.surface_dim == 0) {
        std::copy(Gn_.begin(), Gn_.end(), Z_.begin());
    } else {
        const double zw = std::isnan(x.z_water) ? dataset::water_level(spec, x.depth) : x.z_water;
        for (std::size_t s = 0; s < rows_; ++s) {
            double* row = Z_.data() + s * in;
            std::copy_n(static_rows_.data() + s * features::kSurfaceDim, features::kSurfaceDim, row);
            features::write_dynamic_block(geometry_.patches[s], spec, zw, x.v, row);
            std::copy(Gn_.begin(), Gn_.end(), row + features::kSurfaceDim);
        }
    }

    const auto& kt = simd::active_kernels();
    if (precision_ == Precision::f64) {
        kt.gemm_f64(rows_, h, in, Z_.data(), in, W1t_.data(), h, H1_.data(), h, false);
        kt.bias_act_f64(rows_, h, model_.b1.data(), H1_.data(), h, true);
        kt.gemm_f64(rows_, h, h, H1_.data(), h, W2t_.data(), h, H2_.data(), h, false);
        kt.bias_act_f64(rows_, h, model_.b2.data(), H2_.data(), h, true);
        kt.gemm_f64(rows_, out, h, H2_.data(), h, W3t_.data(), out, Y_.data(), out, false);
        kt.bias_act_f64(rows_, out, model_.b3.data(), Y_.data(), out, false);
    } else {
        std::transform(Z_.begin(), Z_.end(), Z32_.begin(), [](double v) { return static_cast<float>(v); });
        kt.gemm_f32(rows_, h, in, Z32_.data(), in, W1t32_.data(), h, H1_32_.data(), h, false);
        kt.bias_act_f32(rows_, h, b1_32_.data(), H1_32_.data(), h, true);
        kt.gemm_f32(rows_, h, h, H1_32_.data(), h, W2t32_.data(), h, H2_32_.data(), h, false);
        kt.bias_act_f32(rows_, h, b2_32_.data(), H2_32_.data(), h, true);
        kt.gemm_f32(rows_, out, h, H2_32_.data(), h, W3t32_.data(), out, Y32_.data(), out, false);
        kt.bias_act_f32(rows_, out, b3_32_.data(), Y32_.data(), out, false);
        std::copy(Y32_.begin(), Y32_.end(), Y_.begin());
    }

    for (std::size_t s = 0; s < rows_; ++s) {
        double y[3];
        model_.stats.denormalize_target(Y_.data() + s * out, y);
        forces_[s] = Vec3{y[0], y[1], y[2]} * x.rho;
    }
    return forces_;
}

Vec3 InferencePipeline::predict_net(const InferenceInput& x) {
    Vec3 net{};
    for (const auto& f : predict(x)) net += f;
    return net;
}

}  // namespace hydrosurr::model
