#pragma once

// Solution of the gap equation F(T, f(T)) = 0 on [0, T_c] and the implicit
// derivatives f', f'' including their closed forms at both endpoints.

#include "bcsgap/errors.hpp"
#include "bcsgap/io.hpp"
#include "bcsgap/kernels.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bcsgap {

/// Largest |F(T, f)| accepted as a solved gap point.
inline constexpr double kGapResidualTol = 1e-10;

struct GapPoint {
    double t = 0.0;
    double f = 0.0;
    double f_prime = std::numeric_limits<double>::quiet_NaN();
    double f_second = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;
    /// Delta^2 - f with full relative accuracy, also where f rounds to Delta^2.
    double deficit = 0.0;
};

struct GapCurve {
    std::vector<GapPoint> points;
    ModelParams params;
};

/// Shell integrals I[phi] = int phi(xi / (2 k_B T_c)) d xi at the critical point (T_c, 0).
struct CriticalIntegrals {
    double sech2 = 0.0;
    double g = 0.0;
    double big_g = 0.0;
    double tanh_sech2_over_eta = 0.0;
    double eta_tanh_minus_one_sech2 = 0.0;
};

inline CriticalIntegrals critical_integrals(const ModelParams& p) {
    const double t = p.t_c;
    CriticalIntegrals c;
    c.sech2 = detail::shell_integral(t, 0.0, p, [](double eta) { return sech2(eta); });
    c.g = detail::shell_integral(t, 0.0, p, [](double eta) { return eval_g(eta); });
    c.big_g = detail::shell_integral(t, 0.0, p, [](double eta) { return eval_G(eta); });
    c.tanh_sech2_over_eta =
        detail::shell_integral(t, 0.0, p, [](double eta) { return tanh_over(eta) * sech2(eta); });
    c.eta_tanh_minus_one_sech2 =
        detail::shell_integral(t, 0.0, p, [](double eta) { return (eta * std::tanh(eta) - 1.0) * sech2(eta); });
    return c;
}

/// f'(T_c) = 8 k_B^2 T_c I[sech^2] / I[g] < 0.
inline double f_prime_at_tc(const ModelParams& p, const CriticalIntegrals& c) {
    return 8.0 * p.k_b * p.k_b * p.t_c * c.sech2 / c.g;
}

inline double f_prime_at_tc(const ModelParams& p) { return f_prime_at_tc(p, critical_integrals(p)); }

/// f''(T_c): the implicit second derivative evaluated on the W3/W4 corner.
inline double f_second_at_tc(const ModelParams& p, const CriticalIntegrals& c) {
    const double k2 = p.k_b * p.k_b;
    const double ig = c.g;
    return 16.0 * k2 * c.eta_tanh_minus_one_sech2 / ig -
           32.0 * k2 * c.sech2 * c.tanh_sech2_over_eta / (ig * ig) +
           8.0 * k2 * c.sech2 * c.sech2 * c.big_g / (ig * ig * ig);
}

inline double f_second_at_tc(const ModelParams& p) { return f_second_at_tc(p, critical_integrals(p)); }

namespace detail {

inline double f_y_only(double t, double y, const ModelParams& p) {
    if (t == 0.0) {
        return eval_F_partials(t, y, p).f_y;
    }
    const double two_kt = 2.0 * p.k_b * t;
    return shell_integral(t, y, p, [](double eta) { return eval_g(eta); }) / (2.0 * two_kt * two_kt * two_kt);
}

/// Below this fraction of Delta^2 the deficit Delta^2 - f is recomputed directly.
inline constexpr double kDeficitRefine = 1e-4;

/// Delta^2 - f(T) from the thermal part of the gap equation. With
/// R(Y) = int 2 n(E / k_B T) / E d xi and J(D) = int d xi / (E_f E_0 (E_f + E_0)),
/// E_f = sqrt(xi^2 + Delta^2 - D), E_0 = sqrt(xi^2 + Delta^2), the root satisfies
/// D = R(Delta^2 - D) / J(D); iterated from D = 0, which converges quickly while D << Delta^2.
inline double low_t_deficit(double t, double delta2, const ModelParams& p) {
    const double kt = p.k_b * t;
    auto thermal = [&](double y) {
        return integrate([&](double xi) {
                   const double e = std::sqrt(xi * xi + y);
                   return 2.0 * fermi(e / kt) / e;
               },
                         p.shell_lower(), p.hbar_omega_d, p.quad)
            .value;
    };
    auto coupling = [&](double d) {
        return integrate([&](double xi) {
                   const double ef = std::sqrt(xi * xi + delta2 - d);
                   const double e0 = std::sqrt(xi * xi + delta2);
                   return 1.0 / (ef * e0 * (ef + e0));
               },
                         p.shell_lower(), p.hbar_omega_d, p.quad)
            .value;
    };
    double d = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double next = thermal(delta2 - d) / coupling(d);
        const bool converged = std::abs(next - d) <= 1e-14 * next;
        d = next;
        if (converged) {
            break;
        }
    }
    return d;
}

}  // namespace detail

/// Solves F(T, Y) = 0 for Y = f(T). Endpoints are exact; inside, Y -> F(T, Y) is
/// strictly decreasing, so bisection on [0, 2 Delta_0^2] (optionally narrowed by
/// a hint) followed by a few Newton steps gives the unique root.
inline GapPoint solve_gap_at(double t, const ModelParams& p, std::optional<double> hint = std::nullopt) {
    if (!std::isfinite(t) || t < 0.0 || t > p.t_c) {
        throw Error(ErrorCode::OutsideDomain, "solve_gap_at requires 0 <= T <= T_c, got T=" + std::to_string(t));
    }
    const GapClosedForms forms = delta_closed_forms(p);
    GapPoint gp;
    gp.t = t;
    if (t == 0.0) {
        gp.f = forms.delta * forms.delta;
        gp.residual = std::abs(eval_F(0.0, gp.f, p));
        gp.deficit = 0.0;
        return gp;
    }
    if (t == p.t_c) {
        gp.f = 0.0;
        gp.residual = std::abs(eval_F(t, 0.0, p));
        gp.deficit = forms.delta * forms.delta;
        return gp;
    }

    const double y_max = 2.0 * forms.delta0 * forms.delta0;
    double lo = 0.0;
    double hi = y_max;
    const double f_lo = eval_F(t, lo, p);
    const double f_hi = eval_F(t, hi, p);
    if (f_lo <= 0.0 && f_lo >= -kGapResidualTol) {
        // T within rounding of T_c: Y = 0 already solves the equation to tolerance
        gp.residual = -f_lo;
        gp.deficit = forms.delta * forms.delta;
        return gp;
    }
    if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
        throw Error(ErrorCode::BracketFailure, "F(T,0)=" + std::to_string(f_lo) +
                                                   ", F(T,2 Delta_0^2)=" + std::to_string(f_hi) +
                                                   " do not bracket a root at T=" + std::to_string(t));
    }
    if (hint && *hint > lo && *hint < hi) {
        const double fh = eval_F(t, *hint, p);
        if (fh > 0.0) {
            lo = *hint;
        } else {
            hi = *hint;
        }
    }

    const double width = 1e-14 * forms.delta0 * forms.delta0;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval_F(t, mid, p);
        if (fm > 0.0) {
            lo = mid;
        } else if (fm < 0.0) {
            hi = mid;
        } else {
            lo = hi = mid;
        }
    }

    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 5; ++it) {
        const double fy = eval_F(t, y, p);
        if (fy == 0.0) {
            break;
        }
        const double next = std::clamp(y - fy / detail::f_y_only(t, y, p), 0.0, y_max);
        const bool converged = std::abs(next - y) <= 4.0 * std::numeric_limits<double>::epsilon() * y;
        y = next;
        if (converged) {
            break;
        }
    }
    const double delta2 = forms.delta * forms.delta;
    gp.deficit = delta2 - y;
    if (gp.deficit < detail::kDeficitRefine * delta2) {
        // the root sits within rounding of Delta^2; the deficit form is more accurate
        gp.deficit = detail::low_t_deficit(t, delta2, p);
        y = delta2 - gp.deficit;
    }
    gp.f = y;
    gp.residual = std::abs(eval_F(t, y, p));
    return gp;
}

struct GapDerivatives {
    double first = 0.0;
    double second = 0.0;
};

/// f' and f'' by implicit differentiation of F(T, f(T)) = 0; at T = 0 both vanish
/// and at T = T_c (or wherever f = 0) the closed forms apply.
inline GapDerivatives gap_derivatives_at(double t, const ModelParams& p, const GapPoint& gp) {
    if (gp.t != t || !(gp.residual <= kGapResidualTol)) {
        throw Error(ErrorCode::NotSolved, "gap point at T=" + std::to_string(t) + " is not a solved point");
    }
    if (t == 0.0) {
        return {0.0, 0.0};
    }
    if (t == p.t_c || gp.f == 0.0) {
        // f = 0 below T_c only when T is within rounding of it
        const CriticalIntegrals c = critical_integrals(p);
        return {f_prime_at_tc(p, c), f_second_at_tc(p, c)};
    }
    const KernelPartials k = eval_F_second_partials(t, gp.f, p);
    const double fy2 = k.f_y * k.f_y;
    return {
        -k.f_t / k.f_y,
        (-k.f_tt * fy2 + 2.0 * k.f_ty * k.f_t * k.f_y - k.f_yy * k.f_t * k.f_t) / (fy2 * k.f_y),
    };
}

enum class GridKind { Uniform, Chebyshev };

/// n >= 2 temperatures on [0, T_c], endpoints exact.
inline std::vector<double> temperature_grid(double t_c, std::size_t n, GridKind kind) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "a temperature grid needs at least 2 points");
    }
    std::vector<double> ts(n);
    const double last = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / last;
        ts[i] = kind == GridKind::Uniform ? t_c * s : 0.5 * t_c * (1.0 - std::cos(std::numbers::pi * s));
    }
    ts.front() = 0.0;
    ts.back() = t_c;
    return ts;
}

/// Sweeps the grid in increasing T, feeding each solution to the next solve as a
/// bracket hint (f decreases with T).
inline GapCurve sample_gap_curve(const ModelParams& p, std::size_t n_points, GridKind kind = GridKind::Uniform) {
    GapCurve curve;
    curve.params = p;
    curve.points.reserve(n_points);
    std::optional<double> hint;
    for (double t : temperature_grid(p.t_c, n_points, kind)) {
        GapPoint gp = solve_gap_at(t, p, hint);
        const GapDerivatives d = gap_derivatives_at(t, p, gp);
        gp.f_prime = d.first;
        gp.f_second = d.second;
        hint = gp.f;
        curve.points.push_back(gp);
    }
    return curve;
}

inline void write_csv(std::ostream& os, const GapCurve& curve) {
    os << "T,f,f_prime,f_second,residual\n";
    for (const GapPoint& gp : curve.points) {
        os << format_double(gp.t) << ',' << format_double(gp.f) << ',' << format_double(gp.f_prime) << ','
           << format_double(gp.f_second) << ',' << format_double(gp.residual) << '\n';
    }
}

}  // namespace bcsgap
