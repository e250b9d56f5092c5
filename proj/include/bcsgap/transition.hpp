#pragma once

// Transition temperature and the zero-temperature gap closed forms.

#include "bcsgap/errors.hpp"
#include "bcsgap/params.hpp"
#include "bcsgap/quad.hpp"
#include "bcsgap/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bcsgap {

/// Integral of tanh(eta)/eta over [eps, upper]. Beyond eta = 20 the integrand is
/// 1/eta minus an e^{-2 eta} correction, so the far range is done analytically.
inline double tc_integral(double upper, double eps, const QuadSpec& quad = {}) {
    constexpr double split = 20.0;
    if (upper <= eps) {
        return -integrate(tanh_over, upper, eps, quad).value;
    }
    const double mid = std::max(eps, split);
    if (upper <= mid) {
        return integrate(tanh_over, eps, upper, quad).value;
    }
    double value = 0.0;
    if (mid > eps) {
        value += integrate(tanh_over, eps, mid, quad).value;
    }
    // 1 - tanh < 4e-35 past mid + 40; that range cannot move a double result
    const double tail_end = std::min(upper, mid + 40.0);
    const auto tail = integrate([](double x) { return one_minus_tanh(x) / x; }, mid, tail_end, quad);
    return value + std::log(upper / mid) - tail.value;
}

/// Solves 1/(U0 N0) = int_eps^{hbar omega_D/(2 k_B T_c)} tanh(eta)/eta d eta for T_c.
/// The integral grows monotonically in its upper limit L, so the root is unique:
/// bisection in ln L brackets it, Newton (derivative tanh L) polishes it.
inline double solve_tc(const RawParams& raw, const QuadSpec& quad = {}) {
    check_positive(raw);
    const double target = 1.0 / raw.u0n0;
    const double t_scale = raw.hbar_omega_d / raw.k_b;
    const double upper_of_lowest_t = raw.hbar_omega_d / (2.0 * raw.k_b * 1e-8 * t_scale);
    const double upper_of_highest_t = raw.hbar_omega_d / (2.0 * raw.k_b * 1e8 * t_scale);

    auto residual = [&](double log_upper) { return tc_integral(std::exp(log_upper), raw.eps, quad) - target; };

    double lo = std::log(upper_of_highest_t);
    double hi = std::log(upper_of_lowest_t);
    if (residual(lo) > 0.0 || residual(hi) < 0.0) {
        throw Error(ErrorCode::NoBracket, "no T_c in [1e-8, 1e8] * hbar_omega_d / k_b");
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const double r = residual(x);
        if (std::abs(r) <= 2.0 * std::numeric_limits<double>::epsilon() * target) {
            break;
        }
        const double step = r / std::tanh(std::exp(x));
        const double next = std::clamp(x - step, lo, hi);
        if (next == x) {
            break;
        }
        x = next;
    }
    return raw.hbar_omega_d / (2.0 * raw.k_b * std::exp(x));
}

/// Margins of the two cutoff conditions eps < hbar omega_D/(2 k_B T_c) and
/// 2 k_B T_c eps e^{1/(U0 N0)} < hbar omega_D, relative to hbar omega_D.
struct CutoffMargins {
    double shell;
    double radicand;
};

inline CutoffMargins cutoff_margins(const RawParams& raw, double t_c) {
    const double lower = 2.0 * raw.k_b * t_c * raw.eps;
    return {1.0 - lower / raw.hbar_omega_d, 1.0 - lower * std::exp(1.0 / raw.u0n0) / raw.hbar_omega_d};
}

/// Margins below this are not resolvable in double precision.
inline constexpr double kCutoffMarginFloor = 64.0 * std::numeric_limits<double>::epsilon();

inline void check_cutoff(const RawParams& raw, double t_c) {
    const CutoffMargins m = cutoff_margins(raw, t_c);
    if (!(m.shell > kCutoffMarginFloor) || !(m.radicand > kCutoffMarginFloor)) {
        throw Error(ErrorCode::CutoffTooLarge, "eps too large: 2 k_B T_c eps e^{1/(U0 N0)} is not below hbar_omega_d");
    }
}

struct GapClosedForms {
    double delta0;
    double delta;
};

/// Delta_0 = hbar omega_D / sinh(1/(U0 N0)) and the cutoff-corrected zero-temperature gap Delta.
inline GapClosedForms delta_closed_forms(const ModelParams& p) {
    check_cutoff(p.raw(), p.t_c);
    const double s = 1.0 / p.u0n0;
    const double sh = std::sinh(s);
    const double delta0 = p.hbar_omega_d / sh;
    if (p.eps == 0.0) {
        return {delta0, delta0};
    }
    const double a = p.shell_lower();
    const double r1 = p.hbar_omega_d - a * std::exp(s);
    const double r2 = p.hbar_omega_d - a * std::exp(-s);
    return {delta0, std::sqrt(r1 * r2) / sh};
}

}  // namespace bcsgap
