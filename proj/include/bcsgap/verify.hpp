#pragma once

// Deterministic numerical certificate for a parameter set: the gap curve, its
// derivatives, the endpoint closed forms and the second-order transition at T_c.

#include "bcsgap/errors.hpp"
#include "bcsgap/extrapolate.hpp"
#include "bcsgap/gap.hpp"
#include "bcsgap/kernels.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/thermo.hpp"
#include "bcsgap/transition.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace bcsgap {

struct Tolerances {
    double closed_form = 1e-10;
    double fd_first = 1e-6;
    double fd_second = 1e-3;
};

struct Check {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<Check> checks;
    RawParams params;
    double t_c = 0.0;
    std::string dos_label;
    std::size_t grid_size = 0;
    Tolerances tolerances;
    double wall_time = 0.0;  // seconds; not serialized

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    const Check* find(const std::string& name) const {
        for (const Check& c : checks) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }
};

/// Step used by the finite-difference oracles, relative to T_c.
inline constexpr double kFdStepFraction = 1e-5;

/// Floor of the f' comparison scale, as a fraction of Delta^2 / T_c: f' is
/// exponentially small near T = 0, where only absolute agreement is meaningful.
inline constexpr double kSlopeFloor = 1e-3;

namespace detail {

class CheckList {
public:
    /// |measured - expected| <= tol * |expected|, or |measured| <= tol when expected is 0.
    void relative(std::string name, double measured, double expected, double tol) {
        const double scale = expected == 0.0 ? 1.0 : std::abs(expected);
        add({std::move(name), measured, expected, tol, std::abs(measured - expected) <= tol * scale});
    }

    /// measured <= bound.
    void at_most(std::string name, double measured, double bound) {
        add({std::move(name), measured, 0.0, bound, measured <= bound});
    }

    void negative(std::string name, double measured) {
        add({std::move(name), measured, 0.0, 0.0, measured < 0.0});
    }

    void positive(std::string name, double measured) {
        add({std::move(name), measured, 0.0, 0.0, measured > 0.0});
    }

    std::vector<Check> take() {
        std::sort(checks_.begin(), checks_.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
        return std::move(checks_);
    }

private:
    void add(Check c) {
        if (!names_.insert(c.name).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate check name " + c.name);
        }
        checks_.push_back(std::move(c));
    }

    std::vector<Check> checks_;
    std::set<std::string> names_;
};

inline double relative_gap(double a, double b, double scale) { return std::abs(a - b) / scale; }

inline void gap_checks(CheckList& out, const ModelParams& p, const GapCurve& curve, const Tolerances& tol) {
    const GapClosedForms forms = delta_closed_forms(p);
    const double delta2 = forms.delta * forms.delta;
    const std::vector<GapPoint>& pts = curve.points;

    std::size_t rises = 0;
    double max_residual = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // f = Delta^2 - deficit; f alone rounds to Delta^2 at the lowest temperatures
        if (i > 0 && !(pts[i].f <= pts[i - 1].f && pts[i].deficit > pts[i - 1].deficit)) {
            ++rises;
        }
        max_residual = std::max(max_residual, pts[i].residual);
    }
    out.at_most("gap.curve.non_decreasing_steps", static_cast<double>(rises), 0.0);
    out.at_most("gap.curve.max_residual", max_residual, kGapResidualTol);
    out.relative("gap.f0.equals_delta_squared", pts.front().f, delta2, tol.closed_form);
    out.relative("gap.f_tc.equals_zero", pts.back().f, 0.0, tol.closed_form);
    out.at_most("gap.F_at_zero_T", std::abs(eval_F(0.0, delta2, p)), tol.closed_form);
    out.at_most("gap.F_at_tc", std::abs(eval_F(p.t_c, 0.0, p)), tol.closed_form);

    const double h = kFdStepFraction * p.t_c;
    const double slope_scale = kSlopeFloor * delta2 / p.t_c;
    auto f_of = [&](double t) { return solve_gap_at(t, p).f; };
    auto fp_of = [&](double t) { return gap_derivatives_at(t, p, solve_gap_at(t, p)).first; };
    double worst_first = 0.0;
    double worst_second = 0.0;
    std::size_t compared = 0;
    for (const GapPoint& gp : pts) {
        if (!(gp.t - 4.0 * h > 0.0 && gp.t + 4.0 * h < p.t_c)) {
            continue;
        }
        ++compared;
        worst_first = std::max(worst_first, relative_gap(central_derivative(f_of, gp.t, h), gp.f_prime,
                                                         std::max(std::abs(gp.f_prime), slope_scale)));
        worst_second = std::max(worst_second, relative_gap(central_derivative(fp_of, gp.t, h), gp.f_second,
                                                           std::max(std::abs(gp.f_second), slope_scale / p.t_c)));
    }
    if (compared == 0) {
        worst_first = worst_second = std::numeric_limits<double>::quiet_NaN();
    }
    out.at_most("gap.f_prime.vs_fd", worst_first, tol.fd_first);
    out.at_most("gap.f_second.vs_fd", worst_second, tol.fd_second);

    // interior formulas approaching T_c
    const CriticalIntegrals ci = critical_integrals(p);
    const double fp_tc = f_prime_at_tc(p, ci);
    const double fpp_tc = f_second_at_tc(p, ci);
    const auto offsets = limit_offsets(p.t_c);
    std::array<double, 4> first{};
    std::array<double, 4> second{};
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double t = p.t_c - offsets[i];
        const GapDerivatives d = gap_derivatives_at(t, p, solve_gap_at(t, p));
        first[i] = d.first;
        second[i] = d.second;
    }
    out.negative("gap.f_prime_tc.negative", fp_tc);
    out.relative("gap.f_prime_tc.interior_limit", richardson_to_zero(offsets, first), fp_tc, tol.fd_first);
    out.relative("gap.f_second_tc.interior_limit", richardson_to_zero(offsets, second), fpp_tc, tol.fd_second);
}

inline void kernel_checks(CheckList& out, const ModelParams& p, const GapCurve& curve, const Tolerances& tol) {
    out.relative("kernels.g_at_zero", eval_g(0.0), -2.0 / 3.0, tol.closed_form);
    out.relative("kernels.G_at_zero", eval_G(0.0), -16.0 / 15.0, tol.closed_form);

    double worst = 0.0;
    for (int j = 0; j < 40; ++j) {
        const double eta = 0.01 * std::pow(3000.0, j / 39.0);
        const double fd = central_derivative([](double x) { return eval_g(x); }, eta, 1e-3 * std::min(eta, 1.0));
        const double exact = -eta * eval_G(eta);
        worst = std::max(worst, relative_gap(fd, exact, std::abs(exact)));
    }
    out.at_most("kernels.g_derivative_identity", worst, tol.fd_first);

    std::size_t non_negative = 0;
    for (int j = 0; j <= 1000; ++j) {
        if (!(eval_g(0.05 * j) < 0.0)) {
            ++non_negative;
        }
    }
    out.at_most("kernels.g_non_negative_samples", static_cast<double>(non_negative), 0.0);

    const double y_max = 2.0 * std::pow(delta_closed_forms(p).delta0, 2);
    std::size_t sign_violations = 0;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const KernelPartials k = eval_F_partials(p.t_c * i / 10.0, y_max * j / 10.0, p);
            if (!(k.f_t < 0.0) || !(k.f_y < 0.0)) {
                ++sign_violations;
            }
        }
    }
    out.at_most("kernels.partials_sign_violations", static_cast<double>(sign_violations), 0.0);

    // mixed partials at an interior point of the domain
    const double t0 = 0.6 * p.t_c;
    const double y0 = 0.5 * curve.points.front().f;
    const double ht = 1e-4 * p.t_c;
    const double hy = 1e-4 * y0;
    const double dt_fy = central_derivative([&](double t) { return eval_F_partials(t, y0, p).f_y; }, t0, ht);
    const double dy_ft = central_derivative([&](double y) { return eval_F_partials(t0, y, p).f_t; }, y0, hy);
    out.relative("kernels.mixed_partial_symmetry", dt_fy, dy_ft, tol.fd_second);
    out.relative("kernels.F_ty.vs_fd", eval_F_second_partials(t0, y0, p).f_ty, dt_fy, tol.fd_second);
}

inline void thermo_checks(CheckList& out, const ModelParams& p, const GapCurve& curve, const Tolerances& tol) {
    const double tc = p.t_c;
    const double h = kFdStepFraction * tc;

    // V and Omega_N against difference quotients
    auto v_of = [&](double t) { return eval_V_thermal(t, p, 0).value; };
    auto v_prime_of = [&](double t) { return eval_V_thermal(t, p, 1).d1; };
    const TDerivatives v_tc = eval_V_thermal(tc, p, 2);
    out.relative("thermo.V_t.vs_fd", v_tc.d1, central_derivative(v_of, tc, h), tol.fd_first);
    out.relative("thermo.V_tt.vs_fd", v_tc.d2, central_derivative(v_prime_of, tc, h), tol.fd_second);

    const double t_normal = 1.5 * tc;
    const TDerivatives on = eval_omega_n(t_normal, p, 2);
    out.relative("thermo.omega_n_t.vs_fd", on.d1,
                 central_derivative([&](double t) { return eval_omega_n(t, p, 0).value; }, t_normal, h),
                 tol.fd_first);
    out.relative("thermo.omega_n_tt.vs_fd", on.d2,
                 central_derivative([&](double t) { return eval_omega_n(t, p, 1).d1; }, t_normal, h),
                 tol.fd_second);
    out.relative("thermo.omega_n_tt.continuity", eval_omega_n(tc * (1.0 - 1e-6), p, 2).d2,
                 eval_omega_n(tc * (1.0 + 1e-6), p, 2).d2, tol.fd_second);

    // delta away from T_c
    const double t_sc = 0.7 * tc;
    auto delta_of = [&](double t, int order) {
        GapPoint gp = solve_gap_at(t, p);
        if (order >= 2) {
            gp.f_prime = gap_derivatives_at(t, p, gp).first;
        }
        return eval_delta_pot(t, p, gp, order).d;
    };
    const TDerivatives d_sc = delta_of(t_sc, 2);
    out.relative("thermo.delta_t.vs_fd", d_sc.d1,
                 central_derivative([&](double t) { return delta_of(t, 0).value; }, t_sc, h), tol.fd_first);
    out.relative("thermo.delta_tt.vs_fd", d_sc.d2,
                 central_derivative([&](double t) { return delta_of(t, 1).d1; }, t_sc, h), tol.fd_second);

    double worst_cancelled = 0.0;
    for (const GapPoint& gp : curve.points) {
        if (gp.t > 0.0) {
            worst_cancelled = std::max(worst_cancelled, eval_delta_pot(gp.t, p, gp, 0).cancelled_term);
        }
    }
    out.at_most("thermo.delta.cancelled_term", worst_cancelled, 1e-8 / p.u0());

    // the transition
    GapPoint at_tc = curve.points.back();
    at_tc.f_prime = f_prime_at_tc(p);
    const TDerivatives delta_tc = eval_delta_pot(tc, p, at_tc, 2).d;
    const ThermoPoint omega_tc = eval_omega(tc, p, 2, at_tc);
    out.relative("thermo.delta_at_tc", delta_tc.value / std::abs(omega_tc.omega), 0.0, tol.closed_form);
    out.relative("thermo.delta_t_at_tc", delta_tc.d1 / std::abs(omega_tc.omega_t), 0.0, tol.closed_form);

    const OneSidedLimits value = measure_omega_limits(p);
    out.relative("thermo.omega.continuity", value.below, value.above, tol.closed_form);

    const OneSidedLimits entropy = measure_omega_t_limits(p);
    out.relative("thermo.omega_t.continuity", entropy.below, entropy.above, tol.fd_first);

    const double jump = omega_second_jump(p);
    out.relative("thermo.omega_tt_jump.equals_delta_tt", delta_tc.d2, jump, tol.closed_form);
    out.relative("thermo.omega_tt_jump.analytic_limits", measure_omega_tt_limits(p).jump(), jump, tol.fd_second);
    const OneSidedLimits fd = measure_omega_tt_limits_fd(p);
    out.relative("thermo.omega_tt_jump.fd_limits", fd.jump(), jump, tol.fd_second);

    if (p.eps == 0.0) {
        const double dcv = delta_cv(p);
        out.positive("thermo.delta_cv.positive", dcv);
        out.relative("thermo.delta_cv.equals_minus_tc_jump", dcv, -tc * jump, tol.closed_form);
        out.relative("thermo.delta_cv.fd_limits", -tc * fd.jump(), dcv, tol.fd_second);
    }
}

}  // namespace detail

/// Runs every check on a grid_size-point uniform gap curve. Failing checks are
/// report entries; errors of the underlying solvers propagate.
inline VerificationReport run_suite(const ModelParams& p, std::size_t grid_size = 201, const Tolerances& tol = {}) {
    const auto start = std::chrono::steady_clock::now();
    const GapCurve curve = sample_gap_curve(p, grid_size, GridKind::Uniform);

    detail::CheckList checks;
    detail::gap_checks(checks, p, curve, tol);
    detail::kernel_checks(checks, p, curve, tol);
    detail::thermo_checks(checks, p, curve, tol);

    VerificationReport report;
    report.checks = checks.take();
    report.params = p.raw();
    report.t_c = p.t_c;
    report.dos_label = p.dos.label;
    report.grid_size = grid_size;
    report.tolerances = tol;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// Wall time is left out so that the document is reproducible.
inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["params"] = {
        {"u0n0", r.params.u0n0}, {"hbar_omega_d", r.params.hbar_omega_d},
        {"k_b", r.params.k_b},   {"eps", r.params.eps},
        {"n0", r.params.n0},     {"mu", r.params.mu},
        {"dos", r.dos_label},    {"t_c", r.t_c},
    };
    j["grid"] = {{"points", r.grid_size}, {"kind", "uniform"}};
    j["tolerances"] = {
        {"closed_form", r.tolerances.closed_form},
        {"fd_first", r.tolerances.fd_first},
        {"fd_second", r.tolerances.fd_second},
    };
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const Check& c : r.checks) {
        checks.push_back({
            {"name", c.name},
            {"measured", c.measured},
            {"expected", c.expected},
            {"tolerance", c.tolerance},
            {"pass", c.pass},
        });
    }
    j["checks"] = std::move(checks);
    j["pass"] = r.pass();
    return j;
}

}  // namespace bcsgap
