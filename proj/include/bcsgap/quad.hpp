#pragma once

// Adaptive quadrature on finite and exponentially decaying semi-infinite
// ranges. Panels use the 21-point Gauss-Kronrod rule (nodes from Boost.Math);
// the driver is globally adaptive: it always bisects the panel with the
// largest error estimate until the requested tolerance is met.

#include "bcsgap/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

namespace bcsgap {

struct QuadSpec {
    double rel_tol = 1e-12;
    double abs_tol = 1e-30;
    std::size_t max_subdivisions = std::size_t{1} << 15;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1) {
            throw Error(ErrorCode::InvalidArgument, "QuadSpec requires rel_tol>0, abs_tol>=0, max_subdivisions>=1");
        }
    }
};

/// Integrand sample for differences of nearly equal terms: `magnitude` is the size
/// of the terms before cancellation and sets the rounding floor of a panel.
struct Sample {
    double value = 0.0;
    double magnitude = 0.0;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
};

namespace detail {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;
    // panel error already at the rounding level of its own integrand
    bool saturated;

    bool operator<(const Panel& other) const { return error < other.error; }
};

inline std::string format_err(double error, double value) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "estimate %.3e for value %.6e", error, value);
    return buf;
}

template <class F>
Sample checked_eval(F& f, double x) {
    Sample s;
    if constexpr (std::is_same_v<std::decay_t<decltype(f(x))>, Sample>) {
        s = f(x);
    } else {
        s.value = f(x);
        s.magnitude = std::abs(s.value);
    }
    if (!std::isfinite(s.value) || !std::isfinite(s.magnitude)) {
        throw Error(ErrorCode::NonFiniteIntegrand, "integrand is not finite at x=" + std::to_string(x));
    }
    return s;
}

template <class F>
Panel gauss_kronrod_panel(F& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // x[0] = 0 is a Kronrod-only node; odd indices are shared with the 10-point Gauss rule.
    const Sample s0 = checked_eval(f, mid);
    double k = s0.value * wk[0];
    double g = 0.0;
    double l1 = s0.magnitude * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const Sample sp = checked_eval(f, mid + half * x[i]);
        const Sample sm = checked_eval(f, mid - half * x[i]);
        k += (sp.value + sm.value) * wk[i];
        l1 += (sp.magnitude + sm.magnitude) * wk[i];
        if (i % 2 == 1) {
            g += (sp.value + sm.value) * wg[i / 2];
        }
    }
    Panel p{a, b, k * half, std::abs(k - g) * half, l1 * std::abs(half), false};
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * p.l1;
    if (p.error <= roundoff) {
        p.error = roundoff;
        p.saturated = true;
    }
    return p;
}

}  // namespace detail

/// Integrates f over [a, b]. Stops when the summed Kronrod-Gauss error estimate
/// is below max(rel_tol*|value|, abs_tol), or when the worst panel is already at
/// its rounding floor (heavily cancelling integrands).
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadSpec& spec = {}) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorCode::InvalidArgument, "integrate requires finite limits");
    }
    if (a == b) {
        return {};
    }
    if (a > b) {
        QuadResult r = integrate(f, b, a, spec);
        r.value = -r.value;
        return r;
    }

    std::priority_queue<detail::Panel> heap;
    heap.push(detail::gauss_kronrod_panel(f, a, b));
    double value = heap.top().value;
    double error = heap.top().error;
    std::size_t subdivisions = 0;

    auto target = [&] { return std::max(spec.rel_tol * std::abs(value), spec.abs_tol); };

    while (error > target()) {
        const detail::Panel worst = heap.top();
        if (worst.saturated) {
            break;
        }
        if (subdivisions + 1 >= spec.max_subdivisions) {
            throw Error(ErrorCode::ToleranceNotMet,
                        "subdivision limit reached on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "], error " + detail::format_err(error, value));
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw Error(ErrorCode::ToleranceNotMet, "panel width reached machine resolution");
        }
        detail::Panel left = detail::gauss_kronrod_panel(f, worst.a, mid);
        detail::Panel right = detail::gauss_kronrod_panel(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum to drop the drift of the incremental updates.
    value = 0.0;
    error = 0.0;
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    // smallest contributions first
    for (auto it = panels.rbegin(); it != panels.rend(); ++it) {
        value += it->value;
        error += it->error;
    }
    return {value, error};
}

/// Upper truncation point used by integrate_semi_infinite.
inline double semi_infinite_cutoff(double a, double decay_scale, const QuadSpec& spec = {}) {
    const double safety = 10.0 * std::log(2.0 + std::abs(a) / decay_scale);
    return a + decay_scale * (std::log(1.0 / spec.rel_tol) + safety);
}

/// Integrates f over [a, inf) for integrands bounded by C*sqrt(x+mu)*exp(-x/decay_scale),
/// truncating where the exponential has decayed far below rel_tol.
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, double decay_scale, const QuadSpec& spec = {}) {
    spec.validate();
    if (!std::isfinite(a) || !(decay_scale > 0.0) || !std::isfinite(decay_scale)) {
        throw Error(ErrorCode::InvalidArgument, "integrate_semi_infinite requires finite a and decay_scale>0");
    }
    return integrate(f, a, semi_infinite_cutoff(a, decay_scale, spec), spec);
}

}  // namespace bcsgap
