#pragma once

// Thermodynamic potential Omega(T) = Omega_S (T <= T_c) or Omega_N (T > T_c),
// with Omega_S = Omega_N + delta, and its first two temperature derivatives.

#include "bcsgap/errors.hpp"
#include "bcsgap/extrapolate.hpp"
#include "bcsgap/gap.hpp"
#include "bcsgap/io.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/quad.hpp"
#include "bcsgap/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace bcsgap {

/// A quantity and its first two T-derivatives; entries above the requested order stay NaN.
struct TDerivatives {
    double value = std::numeric_limits<double>::quiet_NaN();
    double d1 = std::numeric_limits<double>::quiet_NaN();
    double d2 = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void check_order_and_t(double t, int order, const char* who) {
    if (order < 0 || order > 2) {
        throw Error(ErrorCode::InvalidArgument, std::string(who) + ": order must be 0, 1 or 2");
    }
    if (!std::isfinite(t) || !(t > 0.0)) {
        throw Error(ErrorCode::OutsideDomain, std::string(who) + ": requires T > 0");
    }
}

/// Sum over the band regions outside the pairing shell, [-mu, -hbar omega_D] and
/// [hbar omega_D, inf), of N(xi) phi(|xi|). The lower region is empty when mu <= hbar omega_D.
template <class Phi>
double outer_band_integral(const ModelParams& p, double kt, Phi&& phi) {
    double sum = 0.0;
    if (p.mu > p.hbar_omega_d) {
        sum += integrate([&](double xi) { return p.dos(xi) * phi(-xi); }, -p.mu, -p.hbar_omega_d, p.quad).value;
    }
    sum += integrate_semi_infinite([&](double xi) { return p.dos(xi) * phi(xi); }, p.hbar_omega_d, kt, p.quad).value;
    return sum;
}

template <class Phi>
double pairing_shell_integral(const ModelParams& p, Phi&& phi) {
    return integrate(phi, p.shell_lower(), p.hbar_omega_d, p.quad).value;
}

}  // namespace detail

/// T-independent part of V: 2 int_{-mu}^{-hbar omega_D} xi N(xi) d xi.
inline double v_band_constant(const ModelParams& p) {
    if (!(p.mu > p.hbar_omega_d)) {
        return 0.0;
    }
    return 2.0 * integrate([&](double xi) { return xi * p.dos(xi); }, -p.mu, -p.hbar_omega_d, p.quad).value;
}

/// Temperature-dependent part of V and its derivatives.
inline TDerivatives eval_V_thermal(double t, const ModelParams& p, int order = 2) {
    detail::check_order_and_t(t, order, "eval_V");
    const double k = p.k_b;
    const double kt = k * t;
    const double log_part = detail::outer_band_integral(p, kt, [kt](double x) { return log1p_exp_neg(x / kt); });
    TDerivatives r;
    r.value = -2.0 * kt * log_part;
    if (order >= 1) {
        const double occ = detail::outer_band_integral(p, kt, [kt](double x) { return x * fermi(x / kt); });
        r.d1 = -2.0 * k * log_part - 2.0 / t * occ;
    }
    if (order >= 2) {
        const double w = detail::outer_band_integral(p, kt, [kt](double x) { return x * x * fermi_weight(x / kt); });
        r.d2 = -2.0 / (kt * t * t) * w;
    }
    return r;
}

inline TDerivatives eval_V(double t, const ModelParams& p, int order = 2) {
    TDerivatives r = eval_V_thermal(t, p, order);
    r.value += v_band_constant(p);
    return r;
}

/// Normal-state potential Omega_N(T) = -2 N0 int xi - 4 N0 k_B T int ln(1 + e^{-xi/k_B T}) + V(T).
inline TDerivatives eval_omega_n(double t, const ModelParams& p, int order = 2) {
    detail::check_order_and_t(t, order, "eval_omega_n");
    const double k = p.k_b;
    const double kt = k * t;
    const double n0 = p.n0;
    const double a = p.shell_lower();
    const double w = p.hbar_omega_d;
    const TDerivatives v = eval_V(t, p, order);

    const double log_part = detail::pairing_shell_integral(p, [kt](double xi) { return log1p_exp_neg(xi / kt); });
    TDerivatives r;
    r.value = -n0 * (w * w - a * a) - 4.0 * n0 * kt * log_part + v.value;
    if (order >= 1) {
        const double occ = detail::pairing_shell_integral(p, [kt](double xi) { return xi * fermi(xi / kt); });
        r.d1 = -4.0 * n0 * k * log_part - 4.0 * n0 / t * occ + v.d1;
    }
    if (order >= 2) {
        const double fw =
            detail::pairing_shell_integral(p, [kt](double xi) { return xi * xi * fermi_weight(xi / kt); });
        r.d2 = -4.0 * n0 / (kt * t * t) * fw + v.d2;
    }
    return r;
}

struct DeltaPotential {
    TDerivatives d;
    /// |1/U0 - N0 int h d xi| at the solved f(T): the bracket multiplying f' that the
    /// gap equation removes from delta'(T). Kept as a diagnostic only.
    double cancelled_term = 0.0;
};

/// Condensation term delta(T) = Omega_S - Omega_N on (0, T_c] from a solved gap point.
/// order 2 needs gp.f_prime.
inline DeltaPotential eval_delta_pot(double t, const ModelParams& p, const GapPoint& gp, int order = 2) {
    detail::check_order_and_t(t, order, "eval_delta_pot");
    if (t > p.t_c) {
        throw Error(ErrorCode::OutsideDomain, "delta(T) is defined only for T <= T_c");
    }
    if (gp.t != t || !(gp.residual <= kGapResidualTol) || (order >= 2 && !std::isfinite(gp.f_prime))) {
        throw Error(ErrorCode::NotSolved, "eval_delta_pot needs a solved gap point at T=" + std::to_string(t));
    }
    const double k = p.k_b;
    const double kt = k * t;
    const double n0 = p.n0;
    const double f = gp.f;
    auto energy = [f](double xi) { return std::sqrt(xi * xi + f); };

    DeltaPotential out;
    const double log_ratio = detail::pairing_shell_integral(
        p, [&](double xi) {
            const double le = log1p_exp_neg(energy(xi) / kt);
            const double lx = log1p_exp_neg(xi / kt);
            return Sample{le - lx, le + lx};
        });
    // sqrt(xi^2 + f) - xi written as f / (sqrt(xi^2 + f) + xi)
    const double shift =
        f == 0.0 ? 0.0 : detail::pairing_shell_integral(p, [&](double xi) { return f / (energy(xi) + xi); });
    out.d.value = f / p.u0() - 2.0 * n0 * shift - 4.0 * n0 * kt * log_ratio;
    if (order >= 1) {
        const double occ = detail::pairing_shell_integral(p, [&](double xi) {
            const double e = energy(xi);
            const double ox = xi * fermi(xi / kt);
            const double oe = e * fermi(e / kt);
            return Sample{ox - oe, ox + oe};
        });
        out.d.d1 = -4.0 * n0 * k * log_ratio + 4.0 * n0 / t * occ;
    }
    if (order >= 2) {
        const double half_t_fp = 0.5 * t * gp.f_prime;
        const double fw = detail::pairing_shell_integral(p, [&](double xi) {
            const double e2 = xi * xi + f;
            const double wx = xi * xi * fermi_weight(xi / kt);
            const double we = fermi_weight(std::sqrt(e2) / kt) * (e2 - half_t_fp);
            return Sample{wx - we, std::abs(wx) + std::abs(we)};
        });
        out.d.d2 = 4.0 * n0 / (kt * t * t) * fw;
    }
    out.cancelled_term = n0 * std::abs(eval_F(t, f, p));
    return out;
}

enum class Branch { Superconducting, Normal };

constexpr std::string_view to_string(Branch b) noexcept {
    return b == Branch::Superconducting ? "superconducting" : "normal";
}

struct ThermoPoint {
    double t = 0.0;
    double omega = std::numeric_limits<double>::quiet_NaN();
    double omega_t = std::numeric_limits<double>::quiet_NaN();
    double omega_tt = std::numeric_limits<double>::quiet_NaN();
    double entropy = std::numeric_limits<double>::quiet_NaN();
    double c_v = std::numeric_limits<double>::quiet_NaN();
    Branch branch = Branch::Normal;
};

namespace detail {

inline ThermoPoint assemble(double t, const TDerivatives& d, Branch branch) {
    ThermoPoint tp;
    tp.t = t;
    tp.omega = d.value;
    tp.omega_t = d.d1;
    tp.omega_tt = d.d2;
    tp.entropy = -d.d1;
    tp.c_v = -t * d.d2;
    tp.branch = branch;
    return tp;
}

}  // namespace detail

/// Omega at T using an already solved gap point (ignored above T_c).
inline ThermoPoint eval_omega(double t, const ModelParams& p, int order, const GapPoint& gp) {
    TDerivatives d = eval_omega_n(t, p, order);
    if (t > p.t_c) {
        return detail::assemble(t, d, Branch::Normal);
    }
    const DeltaPotential delta = eval_delta_pot(t, p, gp, order);
    d.value += delta.d.value;
    d.d1 += delta.d.d1;
    d.d2 += delta.d.d2;
    return detail::assemble(t, d, Branch::Superconducting);
}

/// Solves the gap equation at T <= T_c as needed.
inline ThermoPoint eval_omega(double t, const ModelParams& p, int order = 2,
                              std::optional<double> hint = std::nullopt) {
    if (!(t <= p.t_c)) {
        return detail::assemble(t, eval_omega_n(t, p, order), Branch::Normal);
    }
    detail::check_order_and_t(t, order, "eval_omega");
    GapPoint gp = solve_gap_at(t, p, hint);
    if (order >= 2) {
        gp.f_prime = gap_derivatives_at(t, p, gp).first;
    }
    return eval_omega(t, p, order, gp);
}

/// lim_{T -> T_c-} Omega'' - lim_{T -> T_c+} Omega''
///   = (2 N0 f'(T_c) / T_c) (1/(1 + e^{2 eps}) - 1/(1 + e^{hbar omega_D / k_B T_c})).
inline double omega_second_jump(const ModelParams& p) {
    const double bracket = fermi(2.0 * p.eps) - fermi(p.hbar_omega_d / (p.k_b * p.t_c));
    return 2.0 * p.n0 * f_prime_at_tc(p) / p.t_c * bracket;
}

/// Specific-heat gap C_V(T_c-) - C_V(T_c+) = -N0 f'(T_c) tanh(hbar omega_D / (2 k_B T_c)); eps = 0 only.
inline double delta_cv(const ModelParams& p) {
    if (p.eps != 0.0) {
        throw Error(ErrorCode::CutoffNotZero, "the specific-heat gap closed form holds for eps = 0");
    }
    return -p.n0 * f_prime_at_tc(p) * std::tanh(p.hbar_omega_d / (2.0 * p.k_b * p.t_c));
}

struct OneSidedLimits {
    double below = 0.0;
    double above = 0.0;

    double jump() const { return below - above; }
};

/// Offsets T_c * 10^{-k}, k = 3..6, used for one-sided limits at T_c.
inline std::array<double, 4> limit_offsets(double t_c) {
    return {t_c * 1e-3, t_c * 1e-4, t_c * 1e-5, t_c * 1e-6};
}

namespace detail {

/// One-sided limits at T_c of q(T), Richardson-extrapolated from T_c (1 -+ 10^{-k}).
template <class Q>
OneSidedLimits one_sided_limits(const ModelParams& p, Q&& q) {
    const auto h = limit_offsets(p.t_c);
    std::array<double, 4> below{};
    std::array<double, 4> above{};
    for (std::size_t i = 0; i < h.size(); ++i) {
        below[i] = q(p.t_c - h[i]);
        above[i] = q(p.t_c + h[i]);
    }
    return {richardson_to_zero(h, below), richardson_to_zero(h, above)};
}

}  // namespace detail

/// One-sided limits of Omega at T_c (continuity of the potential).
inline OneSidedLimits measure_omega_limits(const ModelParams& p) {
    return detail::one_sided_limits(p, [&](double t) { return eval_omega(t, p, 0).omega; });
}

/// One-sided limits of the analytic Omega' at T_c (entropy continuity).
inline OneSidedLimits measure_omega_t_limits(const ModelParams& p) {
    return detail::one_sided_limits(p, [&](double t) { return eval_omega(t, p, 1).omega_t; });
}

/// One-sided limits of the analytic Omega'' at T_c.
inline OneSidedLimits measure_omega_tt_limits(const ModelParams& p) {
    return detail::one_sided_limits(p, [&](double t) { return eval_omega(t, p, 2).omega_tt; });
}

/// One-sided limits of Omega'' from difference quotients of the analytic Omega'
/// (no second-derivative formula involved), Richardson-extrapolated.
inline OneSidedLimits measure_omega_tt_limits_fd(const ModelParams& p) {
    const double at_tc = eval_omega(p.t_c, p, 1).omega_t;
    return detail::one_sided_limits(p, [&](double t) { return (eval_omega(t, p, 1).omega_t - at_tc) / (t - p.t_c); });
}

/// Uniform table on [t_min, t_max], t_min > 0. Superconducting points reuse the
/// previous gap solution as a bracket hint.
inline std::vector<ThermoPoint> thermo_table(const ModelParams& p, double t_min, double t_max, std::size_t n) {
    if (n < 2 || !(t_min > 0.0) || !(t_max > t_min)) {
        throw Error(ErrorCode::InvalidArgument, "thermo table needs 0 < tmin < tmax and at least 2 points");
    }
    std::vector<ThermoPoint> rows;
    rows.reserve(n);
    std::optional<double> hint;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i + 1 == n ? t_max : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        if (t <= p.t_c) {
            GapPoint gp = solve_gap_at(t, p, hint);
            gp.f_prime = gap_derivatives_at(t, p, gp).first;
            hint = gp.f;
            rows.push_back(eval_omega(t, p, 2, gp));
        } else {
            rows.push_back(eval_omega(t, p, 2));
        }
    }
    return rows;
}

inline void write_csv(std::ostream& os, const std::vector<ThermoPoint>& rows) {
    os << "T,omega,omega_t,omega_tt,entropy,c_v,branch\n";
    for (const ThermoPoint& r : rows) {
        os << format_double(r.t) << ',' << format_double(r.omega) << ',' << format_double(r.omega_t) << ','
           << format_double(r.omega_tt) << ',' << format_double(r.entropy) << ',' << format_double(r.c_v) << ','
           << to_string(r.branch) << '\n';
    }
}

}  // namespace bcsgap
