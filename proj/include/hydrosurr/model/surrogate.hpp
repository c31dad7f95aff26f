#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hydrosurr/dataset/norm_stats.hpp"
#include "hydrosurr/simd/kernels.hpp"

namespace hydrosurr::model {

/// Shared-weight per-surface MLP: z = [S_s, G~] -> ReLU(256) -> ReLU(256) -> 3.
/// Weights are row-major (out x in), as in W z + b.
struct Surrogate {
    std::string variant = "full";  // full | no_dims | merged | global_only
    int feature_schema = 0;
    std::size_t surface_dim = 15;
    std::size_t global_dim = 12;
    std::size_t hidden = 256;
    static constexpr std::size_t out_dim = 3;

    std::vector<double> W1, b1, W2, b2, W3, b3;
    dataset::NormStats stats;
    std::string config_fingerprint;  // JSON text of the training configuration

    std::size_t in_dim() const { return surface_dim + global_dim; }
    std::size_t parameter_count() const;

    /// Allocates zeroed parameters of the declared shape.
    void resize();
    /// Uniform He initialization, U(-sqrt(6/fan_in), +sqrt(6/fan_in)); biases zero.
    void init_he_uniform(std::uint64_t seed);

    /// Flat views in the fixed order W1, b1, W2, b2, W3, b3.
    std::vector<double*> tensors();
    std::vector<const double*> tensors() const;
    std::vector<std::size_t> tensor_sizes() const;

    /// Throws ConfigError on inconsistent shapes, NumericError on non-finite parameters.
    void check() const;
};

bool same_parameters(const Surrogate& a, const Surrogate& b);

/// Activations kept for the backward pass; buffers are reused across calls.
struct ForwardCache {
    std::size_t rows = 0;
    std::vector<double> W1t, W2t, W3t;  // transposed weights (in x out)
    std::vector<double> H1, H2, Y;      // rows x hidden, rows x hidden, rows x 3
    std::vector<double> dYt, dH, dHt, dH1;  // backward scratch
};

struct Gradients {
    std::vector<double> W1, b1, W2, b2, W3, b3;
    void resize_like(const Surrogate& m);
    void zero();
    std::vector<double*> tensors();
};

/// Y = MLP(Z) for `rows` input rows of width in_dim.
void forward(const Surrogate& m, const double* Z, std::size_t rows, ForwardCache& cache,
             const simd::KernelTable& k = simd::active_kernels());

/// Accumulates parameter gradients for dL/dY (rows x 3) using the cache of the matching forward call.
void backward(const Surrogate& m, const double* Z, const double* dY, ForwardCache& cache, Gradients& g,
              const simd::KernelTable& k = simd::active_kernels());

/// Tiles G~ along the surface axis: row s of the result is [S_s, G~].
void build_inputs(const double* S, std::size_t K, std::size_t surface_dim, const double* G, std::size_t global_dim,
                  double* Z);

}  // namespace hydrosurr::model
