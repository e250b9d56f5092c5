#pragma once

#include "bcsgap/errors.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bcsgap {

/// Polynomial (Neville) extrapolation of samples v(h_i) to h = 0.
inline double richardson_to_zero(std::span<const double> h, std::span<const double> v) {
    if (h.size() != v.size() || h.empty()) {
        throw Error(ErrorCode::InvalidArgument, "richardson_to_zero needs matching, non-empty samples");
    }
    std::vector<double> p(v.begin(), v.end());
    const std::size_t n = p.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const double hi = h[i];
            const double hj = h[i + level];
            p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
        }
    }
    return p[0];
}

/// Five-point central difference at steps h and 2h combined by one Richardson level.
template <class Fn>
double central_derivative(Fn&& fn, double x, double h) {
    auto stencil = [&](double s) {
        return (fn(x - 2.0 * s) - 8.0 * fn(x - s) + 8.0 * fn(x + s) - fn(x + 2.0 * s)) / (12.0 * s);
    };
    return (16.0 * stencil(h) - stencil(2.0 * h)) / 15.0;
}

}  // namespace bcsgap
