#pragma once

#include "bcsgap/errors.hpp"
#include "bcsgap/quad.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

namespace bcsgap {

/// Electronic density of states N(xi) on [-mu, inf).
struct DensityOfStates {
    std::function<double(double)> evaluator;
    /// c such that N(xi) <= c * sqrt(xi + mu).
    double growth_bound = 0.0;
    std::string label = "custom";

    double operator()(double xi) const { return evaluator(xi); }
};

/// Free-electron-like band N0 * sqrt((xi + mu) / mu).
inline DensityOfStates default_dos(double n0, double mu) {
    if (!(n0 > 0.0) || !(mu > 0.0)) {
        throw Error(ErrorCode::NonPositiveParameter, "default_dos requires n0>0 and mu>0");
    }
    return DensityOfStates{
        [n0, mu](double xi) { return xi <= -mu ? 0.0 : n0 * std::sqrt((xi + mu) / mu); },
        n0 / std::sqrt(mu),
        "default",
    };
}

/// User-facing inputs before T_c is derived.
struct RawParams {
    double u0n0 = 0.3;
    double hbar_omega_d = 1.0;
    double k_b = 1.0;
    double eps = 0.0;
    double n0 = 1.0;
    double mu = 10.0;
};

/// Validated model; constructed through build_params so t_c is always consistent.
struct ModelParams {
    double u0n0 = 0.0;
    double hbar_omega_d = 0.0;
    double k_b = 0.0;
    double eps = 0.0;
    double n0 = 0.0;
    double mu = 0.0;
    double t_c = 0.0;
    DensityOfStates dos;
    QuadSpec quad;

    RawParams raw() const { return {u0n0, hbar_omega_d, k_b, eps, n0, mu}; }

    /// Lower limit 2 k_B T_c eps of every pairing-shell integral.
    double shell_lower() const { return 2.0 * k_b * t_c * eps; }

    double inverse_coupling() const { return 1.0 / u0n0; }

    /// U0 = (U0 N0) / N0.
    double u0() const { return u0n0 / n0; }
};

inline void check_positive(const RawParams& p) {
    auto require = [](double v, const char* name) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw Error(ErrorCode::NonPositiveParameter, std::string(name) + " must be finite and > 0");
        }
    };
    require(p.u0n0, "u0n0");
    require(p.hbar_omega_d, "hbar_omega_d");
    require(p.k_b, "k_b");
    require(p.n0, "n0");
    require(p.mu, "mu");
    if (!std::isfinite(p.eps) || p.eps < 0.0) {
        throw Error(ErrorCode::NonPositiveParameter, "eps must be finite and >= 0");
    }
}

}  // namespace bcsgap
