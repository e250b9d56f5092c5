#pragma once

// The special functions g and G and the gap functional
//   F(T, Y) = int_{2 k_B T_c eps}^{hbar omega_D} h(T, Y, xi) d xi - 1/(U0 N0)
// together with its first and second partial derivatives.

#include "bcsgap/errors.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/quad.hpp"
#include "bcsgap/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace bcsgap {

namespace detail {

// Taylor coefficients in u = eta^2. With tanh(eta)/eta = sum_n a_n eta^{2n-2},
// a_n = 2^{2n} (2^{2n} - 1) B_{2n} / (2n)!, one gets
//   g = sum_{n>=2} (2n-2) a_n eta^{2n-4},  G = -sum_{n>=3} (2n-2)(2n-4) a_n eta^{2n-6}.
// Thirty terms reach full double precision up to the switchover at eta = 0.7,
// where the direct formulas have lost less than 4e-15 to cancellation.
inline constexpr double kSeriesSwitch = 0.7;

inline constexpr std::array<double, 30> kGSeries{
    -6.6666666666666667e-1,
    5.3333333333333333e-1,
    -3.2380952380952381e-1,
    1.7495590828924162e-1,
    -8.8632355299021966e-2,
    4.3105536438869772e-2,
    -2.0381681418718456e-2,
    9.4404390551293757e-3,
    -4.3043240563839447e-3,
    1.9383075913858901e-3,
    -8.6412312543297035e-4,
    3.8205372166389515e-4,
    -1.677439196070412e-4,
    7.3213592236141128e-5,
    -3.1791804960313963e-5,
    1.3743715450476179e-5,
    -5.9182504476143602e-6,
    2.5396693007043486e-6,
    -1.0864719316759965e-6,
    4.6350577731195409e-7,
    -1.9724440672569787e-7,
    8.3746820692976141e-8,
    -3.5484094722651687e-8,
    1.5006429820282018e-8,
    -6.3352884651527005e-9,
    2.6702995321804712e-9,
    -1.1238559308558256e-9,
    4.7235134346928294e-10,
    -1.9827381703504704e-10,
    8.3128294457690814e-11,
};

inline constexpr std::array<double, 30> kBigGSeries{
    -1.0666666666666667,
    1.2952380952380952,
    -1.0497354497354497,
    7.0905884239217573e-1,
    -4.3105536438869772e-1,
    2.4458017702462147e-1,
    -1.3216614677181126e-1,
    6.8869184902143115e-2,
    -3.4889536644946021e-2,
    1.7282462508659407e-2,
    -8.4051818766056934e-3,
    4.0258540705689888e-3,
    -1.9035533981396693e-3,
    8.9017053888879097e-4,
    -4.1231146351428536e-4,
    1.8938401432365953e-4,
    -8.6348756223947852e-5,
    3.9112989540335873e-5,
    -1.7613219537854255e-5,
    7.8897762690279147e-6,
    -3.5173664691049979e-6,
    1.5613001677966742e-6,
    -6.9029577173297282e-7,
    3.0409384632732963e-7,
    -1.3351497660902356e-7,
    5.8440508404502932e-8,
    -2.5506972547341279e-8,
    1.1103333753962634e-8,
    -4.8214410785460672e-9,
    2.088818982778261e-9,
};

template <std::size_t N>
double horner(const std::array<double, N>& c, double u) {
    double s = 0.0;
    for (std::size_t k = N; k-- > 0;) {
        s = s * u + c[k];
    }
    return s;
}

inline void require_eta(double eta, const char* who) {
    if (!std::isfinite(eta)) {
        throw Error(ErrorCode::NonFiniteInput, std::string(who) + ": eta is not finite");
    }
    if (eta < 0.0) {
        throw Error(ErrorCode::OutsideDomain, std::string(who) + ": eta must be >= 0");
    }
}

}  // namespace detail

/// g(eta) = (sech^2 eta - tanh(eta)/eta) / eta^2, with g(0) = -2/3. Strictly negative.
inline double eval_g(double eta) {
    detail::require_eta(eta, "eval_g");
    if (eta < detail::kSeriesSwitch) {
        return detail::horner(detail::kGSeries, eta * eta);
    }
    return (sech2(eta) - std::tanh(eta) / eta) / (eta * eta);
}

/// G(eta) = (3 g(eta) + 2 tanh(eta) / (eta cosh^2 eta)) / eta^2, with G(0) = -16/15.
/// Satisfies g'(eta) = -eta G(eta).
inline double eval_G(double eta) {
    detail::require_eta(eta, "eval_G");
    if (eta < detail::kSeriesSwitch) {
        return detail::horner(detail::kBigGSeries, eta * eta);
    }
    return (3.0 * eval_g(eta) + 2.0 * std::tanh(eta) * sech2(eta) / eta) / (eta * eta);
}

/// F and its partials at one point. Second-order members stay NaN unless
/// eval_F_second_partials filled them.
struct KernelPartials {
    double t = 0.0;
    double y = 0.0;
    double f_val = 0.0;
    double f_t = 0.0;
    double f_y = 0.0;
    double f_tt = std::numeric_limits<double>::quiet_NaN();
    double f_ty = std::numeric_limits<double>::quiet_NaN();
    double f_yy = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void require_closure(double t, double y, const ModelParams& p) {
    if (!std::isfinite(t) || !std::isfinite(y)) {
        throw Error(ErrorCode::NonFiniteInput, "F: non-finite (T, Y)");
    }
    const DomainW w = domain_of(p);
    if (t < 0.0 || t > p.t_c || y < 0.0 || y > w.y_max) {
        throw Error(ErrorCode::OutsideDomain,
                    "F: (T, Y) = (" + std::to_string(t) + ", " + std::to_string(y) + ") outside closure of W");
    }
    if (t == 0.0 && y == 0.0) {
        throw Error(ErrorCode::ZeroGapAtZeroT, "F is undefined at T = 0, Y = 0");
    }
}

/// int_{a}^{hbar omega_D} phi(eta(xi)) d xi, eta = sqrt(xi^2 + Y) / (2 k_B T).
template <class Phi>
double shell_integral(double t, double y, const ModelParams& p, Phi&& phi) {
    const double two_kt = 2.0 * p.k_b * t;
    auto integrand = [&](double xi) { return phi(std::sqrt(xi * xi + y) / two_kt); };
    return integrate(integrand, p.shell_lower(), p.hbar_omega_d, p.quad).value;
}

}  // namespace detail

/// F(T, Y). The T = 0 branch uses the exact antiderivative of 1/sqrt(xi^2 + Y).
inline double eval_F(double t, double y, const ModelParams& p) {
    detail::require_closure(t, y, p);
    if (t == 0.0) {
        const double a = p.shell_lower();
        const double w = p.hbar_omega_d;
        return std::log((w + std::sqrt(w * w + y)) / (a + std::sqrt(a * a + y))) - p.inverse_coupling();
    }
    const double two_kt = 2.0 * p.k_b * t;
    return detail::shell_integral(t, y, p, [](double eta) { return tanh_over(eta); }) / two_kt -
           p.inverse_coupling();
}

/// F with F_T and F_Y. Both partials are strictly negative away from T = 0.
inline KernelPartials eval_F_partials(double t, double y, const ModelParams& p) {
    KernelPartials k;
    k.t = t;
    k.y = y;
    k.f_val = eval_F(t, y, p);
    if (t == 0.0) {
        const double a = p.shell_lower();
        const double w = p.hbar_omega_d;
        auto antiderivative = [y](double xi) { return xi / (y * std::sqrt(xi * xi + y)); };
        k.f_t = 0.0;
        k.f_y = -0.5 * (antiderivative(w) - antiderivative(a));
        return k;
    }
    const double kt = p.k_b * t;
    const double two_kt = 2.0 * kt;
    k.f_t = -detail::shell_integral(t, y, p, [](double eta) { return sech2(eta); }) / (2.0 * kt * t);
    k.f_y = detail::shell_integral(t, y, p, [](double eta) { return eval_g(eta); }) /
            (2.0 * two_kt * two_kt * two_kt);
    return k;
}

/// All first and second partials; only defined on the open interior W1.
inline KernelPartials eval_F_second_partials(double t, double y, const ModelParams& p) {
    const Stratum s = domain_of(p).classify(t, y);
    if (s != Stratum::Interior) {
        throw Error(ErrorCode::OutsideDomain, "second partials of F exist only on W1; (T, Y) is in " +
                                                  std::string(to_string(s)));
    }
    KernelPartials k = eval_F_partials(t, y, p);
    const double kt = p.k_b * t;
    const double two_kt = 2.0 * kt;
    const double two_kt3 = two_kt * two_kt * two_kt;
    k.f_tt = detail::shell_integral(t, y, p,
                                    [](double eta) { return sech2(eta) * (1.0 - eta * std::tanh(eta)); }) /
             (kt * t * t);
    k.f_ty = detail::shell_integral(t, y, p, [](double eta) { return tanh_over(eta) * sech2(eta); }) /
             (two_kt3 * t);
    k.f_yy = -detail::shell_integral(t, y, p, [](double eta) { return eval_G(eta); }) /
             (4.0 * two_kt3 * two_kt * two_kt);
    return k;
}

}  // namespace bcsgap
