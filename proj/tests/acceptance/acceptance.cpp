// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "bcsgap/bcsgap.hpp"
#include "oracles/oracles.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace bcsgap;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    /// Records one sub-check; details of every sub-check are kept for the log line.
    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [failed]");
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

ModelParams with_eps(double eps) {
    RawParams r;
    r.eps = eps;
    return build_params(r);
}

const std::vector<ModelParams>& both_cutoffs() {
    static const std::vector<ModelParams> ps{with_eps(0.0), with_eps(1e-3)};
    return ps;
}

std::string tag(const ModelParams& p) { return p.eps == 0.0 ? "eps=0" : "eps=1e-3"; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome ac1_tc_residual() {
    Outcome o;
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> coupling(0.15, 0.6);
    std::uniform_real_distribution<double> energy(0.5, 3.0);
    std::uniform_real_distribution<double> boltzmann(0.5, 2.0);
    std::uniform_real_distribution<double> cutoff(0.0, 0.01);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        RawParams r;
        r.u0n0 = coupling(rng);
        r.hbar_omega_d = energy(rng);
        r.k_b = boltzmann(rng);
        r.eps = trial % 4 == 0 ? 0.0 : cutoff(rng);
        const double t_c = solve_tc(r);
        const long double upper = r.hbar_omega_d / (2.0L * r.k_b * t_c);
        const double integral = static_cast<double>(oracle::tanh_over_integral(r.eps, upper));
        worst = std::max(worst, rel(integral, 1.0 / r.u0n0));
    }
    o.require(worst < 1e-12, fmt("20 sets, worst relative residual %.2e (tol 1e-12)", worst));
    return o;
}

Outcome ac2_anchors() {
    Outcome o;
    for (const ModelParams& p : both_cutoffs()) {
        const double d = delta_closed_forms(p).delta;
        const double at_zero = std::abs(eval_F(0.0, d * d, p));
        const double at_tc = std::abs(eval_F(p.t_c, 0.0, p));
        o.require(at_zero < 1e-10 && at_tc < 1e-10, tag(p) + fmt(" |F(0,D^2)|=%.2e |F(T_c,0)|=%.2e", at_zero, at_tc));
    }
    return o;
}

Outcome ac3_gap_curve() {
    Outcome o;
    for (const ModelParams& p : both_cutoffs()) {
        const GapCurve c = sample_gap_curve(p, 201);
        const double d2 = std::pow(delta_closed_forms(p).delta, 2);
        std::size_t violations = 0;
        std::size_t rounded_ties = 0;
        double worst_residual = 0.0;
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            const GapPoint& a = c.points[i - 1];
            const GapPoint& b = c.points[i];
            // f = Delta^2 - deficit; near T = 0 the decrease is below one ulp of f
            if (!(b.f <= a.f) || !(b.deficit > a.deficit)) {
                ++violations;
            }
            rounded_ties += b.f == a.f ? 1 : 0;
        }
        for (const GapPoint& gp : c.points) {
            worst_residual = std::max(worst_residual, gp.residual);
        }
        const double f0_err = rel(c.points.front().f, d2);
        const double ftc = std::abs(c.points.back().f);
        o.require(violations == 0, tag(p) + fmt(" decreasing: %.0f violations (%.0f steps below one ulp of f)",
                                                static_cast<double>(violations), static_cast<double>(rounded_ties)));
        o.require(f0_err <= 1e-10 && ftc <= 1e-10 * d2, tag(p) + fmt(" endpoints %.1e %.1e", f0_err, ftc));
        o.require(worst_residual < 1e-10, tag(p) + fmt(" max residual %.2e", worst_residual));
    }
    return o;
}

Outcome ac4_derivatives() {
    Outcome o;
    for (const ModelParams& p : both_cutoffs()) {
        const GapCurve c = sample_gap_curve(p, 201);
        const double d2 = c.points.front().f;
        const double h = 1e-5 * p.t_c;
        // f' decays like e^{-Delta/kT} toward T = 0; relative error is taken against
        // max(|f'|, 1e-3 Delta^2 / T_c) there
        const double slope_floor = 1e-3 * d2 / p.t_c;
        auto f_of = [&](double t) { return solve_gap_at(t, p).f; };
        auto fp_of = [&](double t) { return gap_derivatives_at(t, p, solve_gap_at(t, p)).first; };
        double worst1 = 0.0;
        double worst2 = 0.0;
        for (std::size_t i = 1; i + 1 < c.points.size(); ++i) {
            const GapPoint& gp = c.points[i];
            const double fd1 = oracle::fd5_richardson(f_of, gp.t, h);
            const double fd2 = oracle::fd5_richardson(fp_of, gp.t, h);
            worst1 = std::max(worst1, std::abs(gp.f_prime - fd1) / std::max(std::abs(gp.f_prime), slope_floor));
            worst2 = std::max(worst2,
                              std::abs(gp.f_second - fd2) / std::max(std::abs(gp.f_second), slope_floor / p.t_c));
        }
        o.require(worst1 < 1e-6, tag(p) + fmt(" f' vs FD %.2e (tol 1e-6)", worst1));
        o.require(worst2 < 1e-5, tag(p) + fmt(" f'' vs FD %.2e (tol 1e-5)", worst2));

        // one-sided quotients at T = 0 under refinement
        const GapDerivatives at_zero = gap_derivatives_at(0.0, p, solve_gap_at(0.0, p));
        double prev1 = HUGE_VAL;
        double prev2 = HUGE_VAL;
        bool trending = at_zero.first == 0.0 && at_zero.second == 0.0;
        for (int j = 0; j < 6; ++j) {
            const double step = p.t_c / 5.0 * std::ldexp(1.0, -j);
            const GapPoint gp = solve_gap_at(step, p);
            // f itself rounds to Delta^2 here; the deficit Delta^2 - f keeps full precision
            const double q1 = gp.deficit / step;
            const double q2 = std::abs(gap_derivatives_at(step, p, gp).first / step);
            trending = trending && q1 < prev1 && q2 < prev2;
            prev1 = q1;
            prev2 = q2;
        }
        o.require(trending, tag(p) + fmt(" one-sided quotients at 0 fall to %.1e, %.1e", prev1, prev2));
    }
    return o;
}

Outcome ac5_endpoint_limits() {
    Outcome o;
    for (const ModelParams& p : both_cutoffs()) {
        std::vector<double> offsets;
        std::vector<double> first;
        std::vector<double> second;
        for (int k = 3; k <= 6; ++k) {
            const double h = p.t_c * std::pow(10.0, -k);
            const double t = p.t_c - h;
            const GapDerivatives d = gap_derivatives_at(t, p, solve_gap_at(t, p));
            offsets.push_back(h);
            first.push_back(d.first);
            second.push_back(d.second);
        }
        const double fp = f_prime_at_tc(p);
        const double fpp = f_second_at_tc(p);
        const double e1 = rel(oracle::neville_at_zero(offsets, first), fp);
        const double e2 = rel(oracle::neville_at_zero(offsets, second), fpp);
        o.require(e1 < 1e-4 && e2 < 1e-4, tag(p) + fmt(" limits of f', f'' off by %.1e, %.1e", e1, e2));
        o.require(fp < 0.0, tag(p) + fmt(" f'(T_c)=%.6g", fp));
    }
    return o;
}

/// One-sided limits at T_c of q(T) sampled at T_c (1 -+ 10^{-k}), k = 3..6.
std::pair<double, double> one_sided(const ModelParams& p, const std::function<double(double)>& q) {
    std::vector<double> offsets;
    std::vector<double> below;
    std::vector<double> above;
    for (int k = 3; k <= 6; ++k) {
        const double h = p.t_c * std::pow(10.0, -k);
        offsets.push_back(h);
        below.push_back(q(p.t_c - h));
        above.push_back(q(p.t_c + h));
    }
    return {oracle::neville_at_zero(offsets, below), oracle::neville_at_zero(offsets, above)};
}

Outcome ac6_transition() {
    Outcome o;
    for (const ModelParams& p : both_cutoffs()) {
        const ThermoPoint s = eval_omega(p.t_c, p);
        const double omega_n = eval_omega_n(p.t_c, p).value;
        const double value_gap = std::abs(s.omega - omega_n) / std::abs(s.omega);
        o.require(value_gap < 1e-10, tag(p) + fmt(" |Omega_S-Omega_N|/|Omega| = %.1e", value_gap));

        const auto [t_below, t_above] = one_sided(p, [&](double t) { return eval_omega(t, p, 1).omega_t; });
        const double slope_gap = rel(t_below, t_above);
        o.require(slope_gap < 1e-6, tag(p) + fmt(" Omega_T limits differ by %.1e", slope_gap));

        const double jump = omega_second_jump(p);
        const auto [tt_below, tt_above] = one_sided(p, [&](double t) { return eval_omega(t, p, 2).omega_tt; });
        const double jump_err = rel(tt_below - tt_above, jump);
        o.require(jump_err < 1e-3, tag(p) + fmt(" Omega_TT jump %.9g vs closed form, rel %.1e", tt_below - tt_above, jump_err));

        GapPoint gp = solve_gap_at(p.t_c, p);
        gp.f_prime = f_prime_at_tc(p);
        const double delta_tt = eval_delta_pot(p.t_c, p, gp).d.d2;
        const double same = rel(delta_tt, jump);
        o.require(same < 1e-10, tag(p) + fmt(" delta''(T_c) vs closed form %.1e", same));
    }
    return o;
}

Outcome ac7_specific_heat() {
    Outcome o;
    const ModelParams& p = both_cutoffs().front();
    const double dcv = delta_cv(p);
    o.require(dcv > 0.0, fmt("Delta C_V = %.9g", dcv));
    const double vs_jump = rel(dcv, -p.t_c * omega_second_jump(p));
    o.require(vs_jump < 1e-10, fmt("vs -T_c jump %.1e", vs_jump));
    // C_V = -T Omega'' measured from difference quotients of Omega'
    const double slope_tc = eval_omega(p.t_c, p, 1).omega_t;
    const auto [below, above] = one_sided(p, [&](double t) {
        const double w = eval_omega(t, p, 1).omega_t;
        return (w - slope_tc) / (t - p.t_c);
    });
    const double measured = -p.t_c * (below - above);
    const double fd_err = rel(measured, dcv);
    o.require(fd_err < 1e-3, fmt("FD-measured %.9g, rel %.1e", measured, fd_err));
    return o;
}

Outcome ac8_kernels() {
    Outcome o;
    o.require(eval_g(0.0) == -2.0 / 3.0 && eval_G(0.0) == -16.0 / 15.0, "g(0), G(0) exact");

    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> log_eta(std::log(1e-3), std::log(50.0));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double eta = std::exp(log_eta(rng));
        const double fd = oracle::fd5_richardson([](double x) { return eval_g(x); }, eta, 1e-3 * std::min(eta, 1.0));
        worst = std::max(worst, rel(fd, -eta * eval_G(eta)));
    }
    o.require(worst < 1e-7, fmt("g' = -eta G at 100 random eta, worst %.1e", worst));

    std::size_t non_negative = 0;
    for (int j = 0; j <= 4000; ++j) {
        const double eta = 1e-8 * std::pow(1e14, j / 4000.0);
        non_negative += eval_g(eta) < 0.0 ? 0 : 1;
    }
    o.require(non_negative == 0, fmt("g<0 at 4001 samples on [1e-8, 1e6], %.0f violations", static_cast<double>(non_negative)));

    for (const ModelParams& p : both_cutoffs()) {
        const double t0 = 0.6 * p.t_c;
        const double y0 = 0.5 * std::pow(delta_closed_forms(p).delta, 2);
        const double dt_fy =
            oracle::fd5_richardson([&](double t) { return eval_F_partials(t, y0, p).f_y; }, t0, 1e-4 * p.t_c);
        const double dy_ft =
            oracle::fd5_richardson([&](double y) { return eval_F_partials(t0, y, p).f_t; }, y0, 1e-4 * y0);
        const double sym = rel(dt_fy, dy_ft);
        o.require(sym < 1e-5, tag(p) + fmt(" mixed partials differ by %.1e", sym));
    }
    return o;
}

Outcome ac9_signs() {
    Outcome o;
    for (const ModelParams& p : both_cutoffs()) {
        const double y_max = 2.0 * std::pow(delta_closed_forms(p).delta0, 2);
        std::size_t bad = 0;
        // T in (0, T_c], Y in [0, y_max): the domain without its T = 0 edge
        for (int i = 1; i <= 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const KernelPartials k = eval_F_partials(p.t_c * i / 50.0, y_max * j / 50.0, p);
                bad += (k.f_t < 0.0 && k.f_y < 0.0) ? 0 : 1;
            }
        }
        o.require(bad == 0, tag(p) + fmt(" %.0f sign violations of 2500", static_cast<double>(bad)));
    }
    return o;
}

Outcome ac10_weak_coupling() {
    Outcome o;
    const oracle::hp limit = 2 * exp(oracle::hp(boost::math::constants::euler<oracle::hp>())) /
                             boost::math::constants::pi<oracle::hp>();
    const double asymptote = limit.convert_to<double>();
    double prev_distance = HUGE_VAL;
    bool monotone = true;
    for (const double u : {0.12, 0.10, 0.08}) {
        RawParams r;
        r.u0n0 = u;
        const double scale = std::exp(-1.0 / u);
        const double ratio = r.k_b * solve_tc(r) / (r.hbar_omega_d * scale);
        const double ref = oracle::tc_bisection(u, 1.0, 1.0, 0.0) / scale;
        const double agree = rel(ratio, ref);
        o.require(agree < 1e-8, fmt("u0n0=%.2f ratio vs oracle %.1e", u, agree));
        // the approach to the limit is O(e^{-1/u0n0}); allow rounding-level wobble
        const double distance = std::abs(ratio - asymptote);
        monotone = monotone && distance <= prev_distance + 1e-12;
        prev_distance = distance;
    }
    o.require(monotone, fmt("monotone approach to 2e^gamma/pi = %.16f, final distance %.1e", asymptote, prev_distance));
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"AC1", "T_c residual", ac1_tc_residual},
        {"AC2", "gap equation anchors", ac2_anchors},
        {"AC3", "gap curve", ac3_gap_curve},
        {"AC4", "derivative consistency", ac4_derivatives},
        {"AC5", "endpoint closed forms", ac5_endpoint_limits},
        {"AC6", "second-order transition", ac6_transition},
        {"AC7", "specific-heat gap", ac7_specific_heat},
        {"AC8", "kernel identities", ac8_kernels},
        {"AC9", "partial derivative signs", ac9_signs},
        {"AC10", "weak coupling", ac10_weak_coupling},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
