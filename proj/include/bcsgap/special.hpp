#pragma once

// Numerically safe elementary building blocks shared by every integrand.

#include <cmath>

namespace bcsgap {

/// tanh(x)/x, continuous through x = 0.
inline double tanh_over(double x) {
    if (std::abs(x) < 1e-4) {
        const double u = x * x;
        return 1.0 - u / 3.0 + 2.0 * u * u / 15.0;
    }
    return std::tanh(x) / x;
}

/// 1/cosh^2(x) without overflowing cosh.
inline double sech2(double x) {
    const double e = std::exp(-2.0 * std::abs(x));
    const double d = 1.0 + e;
    return 4.0 * e / (d * d);
}

/// 1 - tanh(x) for x >= 0.
inline double one_minus_tanh(double x) {
    const double e = std::exp(-2.0 * x);
    return 2.0 * e / (1.0 + e);
}

/// Fermi occupation 1/(1 + e^x).
inline double fermi(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

/// ln(1 + e^{-x}) for x >= 0.
inline double log1p_exp_neg(double x) { return std::log1p(std::exp(-x)); }

/// e^x / (1 + e^x)^2 = sech^2(x/2) / 4.
inline double fermi_weight(double x) { return 0.25 * sech2(0.5 * x); }

}  // namespace bcsgap
