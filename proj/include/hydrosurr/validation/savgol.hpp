#pragma once

#include <span>
#include <vector>

namespace hydrosurr::validation {

/// Savitzky-Golay smoothing (deriv 0) or differentiation (deriv >= 1) of a
/// uniformly sampled series. Interior points use the centered window; the
/// first and last (window-1)/2 points fit the polynomial to the truncated
/// window that stays inside the series, with no padding.
std::vector<double> savgol(std::span<const double> series, int window, int polyorder, int deriv, double dt);

inline std::vector<double> savgol_derivative(std::span<const double> series, double dt, int window = 9,
                                             int polyorder = 2) {
    return savgol(series, window, polyorder, 1, dt);
}

}  // namespace hydrosurr::validation
