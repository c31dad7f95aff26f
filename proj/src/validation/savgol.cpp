#include "hydrosurr/validation/savgol.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <string>

#include "hydrosurr/core/error.hpp"

namespace hydrosurr::validation {
namespace {

/// Weights w with sum_j w_j y_j = d-th derivative at `at` of the degree-p
/// least-squares polynomial through samples at offsets lo..hi.
Eigen::VectorXd sg_weights(int lo, int hi, int at, int p, int deriv, double dt) {
    const int m = hi - lo + 1;
    Eigen::MatrixXd A(m, p + 1);
    for (int r = 0; r < m; ++r) {
        const double x = static_cast<double>(lo + r - at);
        double pw = 1.0;
        for (int c = 0; c <= p; ++c) {
            A(r, c) = pw;
            pw *= x;
        }
    }
    // Row `deriv` of the pseudo-inverse gives the coefficient of x^deriv.
    const Eigen::MatrixXd pinv = A.completeOrthogonalDecomposition().pseudoInverse();
    double fact = 1.0;
    for (int k = 2; k <= deriv; ++k) fact *= k;
    return pinv.row(deriv).transpose() * (fact / std::pow(dt, deriv));
}

}  // namespace

std::vector<double> savgol(std::span<const double> y, int window, int polyorder, int deriv, double dt) {
    if (window < 1 || window % 2 == 0) throw ConfigError("Savitzky-Golay window must be odd, got " + std::to_string(window));
    if (polyorder < 0 || polyorder >= window) throw ConfigError("Savitzky-Golay order must be below the window length");
    if (deriv < 0 || deriv > polyorder) throw ConfigError("Savitzky-Golay derivative order exceeds the polynomial order");
    if (!(dt > 0.0)) throw ConfigError("Savitzky-Golay step must be positive");
    const int n = static_cast<int>(y.size());
    if (n < window) throw DataError("series of length " + std::to_string(n) + " is shorter than the filter window");

    const int h = window / 2;
    std::vector<double> out(static_cast<std::size_t>(n));
    const Eigen::VectorXd center = sg_weights(-h, h, 0, polyorder, deriv, dt);
    auto apply = [&](const Eigen::VectorXd& w, int lo, int i) {
        double s = 0.0;
        for (int j = 0; j < w.size(); ++j) s += w[j] * y[static_cast<std::size_t>(lo + j)];
        out[static_cast<std::size_t>(i)] = s;
    };
    for (int i = h; i < n - h; ++i) apply(center, i - h, i);
    for (int i = 0; i < std::min(h, n); ++i) {
        for (const int idx : {i, n - 1 - i}) {
            if (idx >= h && idx < n - h) continue;
            int lo = std::max(0, idx - h), hi = std::min(n - 1, idx + h);
            while (hi - lo < polyorder) {
                if (lo > 0) --lo;
                else ++hi;
            }
            apply(sg_weights(lo, hi, idx, polyorder, deriv, dt), lo, idx);
        }
    }
    return out;
}

}  // namespace hydrosurr::validation
