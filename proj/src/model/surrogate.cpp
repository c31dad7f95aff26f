#include "hydrosurr/model/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/simd/matrix_ops.hpp"

namespace hydrosurr::model {

std::size_t Surrogate::parameter_count() const {
    std::size_t n = 0;
    for (auto s : tensor_sizes()) n += s;
    return n;
}

std::vector<std::size_t> Surrogate::tensor_sizes() const {
    return {hidden * in_dim(), hidden, hidden * hidden, hidden, out_dim * hidden, out_dim};
}

void Surrogate::resize() {
    const auto sizes = tensor_sizes();
    auto ts = std::vector<std::vector<double>*>{&W1, &b1, &W2, &b2, &W3, &b3};
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i]->assign(sizes[i], 0.0);
}

void Surrogate::init_he_uniform(std::uint64_t seed) {
    resize();
    Rng rng(seed);
    auto fill = [&](std::vector<double>& w, std::size_t fan_in) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (auto& x : w) x = (2.0 * uniform01(rng) - 1.0) * bound;
    };
    fill(W1, in_dim());
    fill(W2, hidden);
    fill(W3, hidden);
}

std::vector<double*> Surrogate::tensors() { return {W1.data(), b1.data(), W2.data(), b2.data(), W3.data(), b3.data()}; }

std::vector<const double*> Surrogate::tensors() const {
    return {W1.data(), b1.data(), W2.data(), b2.data(), W3.data(), b3.data()};
}

void Surrogate::check() const {
    const auto sizes = tensor_sizes();
    const std::vector<const std::vector<double>*> ts{&W1, &b1, &W2, &b2, &W3, &b3};
    if (in_dim() == 0 || hidden == 0) throw ConfigError("model has an empty layer");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i]->size() != sizes[i]) throw ConfigError("model parameter tensor " + std::to_string(i) + " has the wrong size");
        for (double x : *ts[i])
            if (!std::isfinite(x)) throw NumericError("model parameter tensor " + std::to_string(i) + " is not finite");
    }
}

bool same_parameters(const Surrogate& a, const Surrogate& b) {
    return a.W1 == b.W1 && a.b1 == b.b1 && a.W2 == b.W2 && a.b2 == b.b2 && a.W3 == b.W3 && a.b3 == b.b3;
}

void Gradients::resize_like(const Surrogate& m) {
    const auto sizes = m.tensor_sizes();
    auto ts = std::vector<std::vector<double>*>{&W1, &b1, &W2, &b2, &W3, &b3};
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i]->assign(sizes[i], 0.0);
}

void Gradients::zero() {
    for (auto* v : {&W1, &b1, &W2, &b2, &W3, &b3}) std::fill(v->begin(), v->end(), 0.0);
}

std::vector<double*> Gradients::tensors() { return {W1.data(), b1.data(), W2.data(), b2.data(), W3.data(), b3.data()}; }

void forward(const Surrogate& m, const double* Z, std::size_t rows, ForwardCache& c, const simd::KernelTable& k) {
    const std::size_t in = m.in_dim(), h = m.hidden, out = Surrogate::out_dim;
    c.rows = rows;
    c.W1t.resize(in * h);
    c.W2t.resize(h * h);
    c.W3t.resize(h * out);
    simd::transpose(m.W1.data(), h, in, c.W1t.data());
    simd::transpose(m.W2.data(), h, h, c.W2t.data());
    simd::transpose(m.W3.data(), out, h, c.W3t.data());
    c.H1.resize(rows * h);
    c.H2.resize(rows * h);
    c.Y.resize(rows * out);
    if (rows == 0) return;
    k.gemm_f64(rows, h, in, Z, in, c.W1t.data(), h, c.H1.data(), h, false);
    k.bias_act_f64(rows, h, m.b1.data(), c.H1.data(), h, true);
    k.gemm_f64(rows, h, h, c.H1.data(), h, c.W2t.data(), h, c.H2.data(), h, false);
    k.bias_act_f64(rows, h, m.b2.data(), c.H2.data(), h, true);
    k.gemm_f64(rows, out, h, c.H2.data(), h, c.W3t.data(), out, c.Y.data(), out, false);
    k.bias_act_f64(rows, out, m.b3.data(), c.Y.data(), out, false);
}

void backward(const Surrogate& m, const double* Z, const double* dY, ForwardCache& c, Gradients& g,
              const simd::KernelTable& k) {
    const std::size_t rows = c.rows, in = m.in_dim(), h = m.hidden, out = Surrogate::out_dim;
    if (rows == 0) return;
    auto& dYt = c.dYt;
    auto& dH = c.dH;
    auto& dHt = c.dHt;
    auto& dH1 = c.dH1;
    dYt.resize(out * rows);
    dH.resize(rows * h);
    dHt.resize(h * rows);
    dH1.resize(rows * h);

    // Output layer.
    simd::transpose(dY, rows, out, dYt.data());
    k.gemm_f64(out, h, rows, dYt.data(), rows, c.H2.data(), h, g.W3.data(), h, true);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < out; ++j) g.b3[j] += dY[r * out + j];
    k.gemm_f64(rows, h, out, dY, out, m.W3.data(), h, dH.data(), h, false);

    // Second hidden layer.
    for (std::size_t i = 0; i < rows * h; ++i)
        if (c.H2[i] <= 0.0) dH[i] = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < h; ++j) g.b2[j] += dH[r * h + j];
    simd::transpose(dH.data(), rows, h, dHt.data());
    k.gemm_f64(h, h, rows, dHt.data(), rows, c.H1.data(), h, g.W2.data(), h, true);
    k.gemm_f64(rows, h, h, dH.data(), h, m.W2.data(), h, dH1.data(), h, false);

    // First hidden layer.
    for (std::size_t i = 0; i < rows * h; ++i)
        if (c.H1[i] <= 0.0) dH1[i] = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < h; ++j) g.b1[j] += dH1[r * h + j];
    simd::transpose(dH1.data(), rows, h, dHt.data());
    k.gemm_f64(h, in, rows, dHt.data(), rows, Z, in, g.W1.data(), in, true);
}

void build_inputs(const double* S, std::size_t K, std::size_t sd, const double* G, std::size_t gd, double* Z) {
    for (std::size_t s = 0; s < K; ++s) {
        double* row = Z + s * (sd + gd);
        std::copy(S + s * sd, S + (s + 1) * sd, row);
        std::copy(G, G + gd, row + sd);
    }
}

}  // namespace hydrosurr::model
