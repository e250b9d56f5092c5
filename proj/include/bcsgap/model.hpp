#pragma once

#include "bcsgap/errors.hpp"
#include "bcsgap/params.hpp"
#include "bcsgap/transition.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <utility>

namespace bcsgap {

inline constexpr double kDosMismatchTol = 1e-12;

/// Validates raw inputs, derives T_c and checks both cutoff conditions.
inline ModelParams build_params(const RawParams& raw, DensityOfStates dos, const QuadSpec& quad = {}) {
    check_positive(raw);
    quad.validate();
    if (!dos.evaluator) {
        throw Error(ErrorCode::DosMismatch, "density of states has no evaluator");
    }
    const double n_at_fermi = dos(0.0);
    if (!(std::abs(n_at_fermi - raw.n0) <= kDosMismatchTol * raw.n0)) {
        throw Error(ErrorCode::DosMismatch,
                    "N(0)=" + std::to_string(n_at_fermi) + " differs from n0=" + std::to_string(raw.n0));
    }
    const double t_c = solve_tc(raw, quad);
    check_cutoff(raw, t_c);

    ModelParams p;
    p.u0n0 = raw.u0n0;
    p.hbar_omega_d = raw.hbar_omega_d;
    p.k_b = raw.k_b;
    p.eps = raw.eps;
    p.n0 = raw.n0;
    p.mu = raw.mu;
    p.t_c = t_c;
    p.dos = std::move(dos);
    p.quad = quad;
    return p;
}

inline ModelParams build_params(const RawParams& raw, const QuadSpec& quad = {}) {
    check_positive(raw);
    return build_params(raw, default_dos(raw.n0, raw.mu), quad);
}

/// Strata of the (T, Y) domain on which the gap functional is analysed.
enum class Stratum {
    Interior,         // 0 < T < T_c, 0 < Y < 2 Delta_0^2
    ZeroTemperature,  // T = 0, 0 < Y < 2 Delta_0^2
    ZeroGap,          // 0 < T <= T_c, Y = 0
    Critical,         // T = T_c, 0 < Y < 2 Delta_0^2
    Outside,
};

constexpr std::string_view to_string(Stratum s) noexcept {
    switch (s) {
    case Stratum::Interior: return "W1";
    case Stratum::ZeroTemperature: return "W2";
    case Stratum::ZeroGap: return "W3";
    case Stratum::Critical: return "W4";
    case Stratum::Outside: return "outside";
    }
    return "outside";
}

struct DomainW {
    double t_c = 0.0;
    double y_max = 0.0;  // 2 Delta_0^2, excluded

    Stratum classify(double t, double y) const {
        if (!std::isfinite(t) || !std::isfinite(y)) {
            return Stratum::Outside;
        }
        if (y == 0.0) {
            return (t > 0.0 && t <= t_c) ? Stratum::ZeroGap : Stratum::Outside;
        }
        if (!(y > 0.0 && y < y_max)) {
            return Stratum::Outside;
        }
        if (t == 0.0) {
            return Stratum::ZeroTemperature;
        }
        if (t == t_c) {
            return Stratum::Critical;
        }
        return (t > 0.0 && t < t_c) ? Stratum::Interior : Stratum::Outside;
    }
};

inline DomainW domain_of(const ModelParams& p) {
    const double delta0 = p.hbar_omega_d / std::sinh(1.0 / p.u0n0);
    return {p.t_c, 2.0 * delta0 * delta0};
}

}  // namespace bcsgap
