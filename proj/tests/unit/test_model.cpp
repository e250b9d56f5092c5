#include "bcsgap/model.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bcsgap;

TEST(BuildParams, DefaultsMatchBisectionOracle) {
    const ModelParams p = build_params(RawParams{});
    EXPECT_GT(p.t_c, 0.0);
    const double ref = oracle::tc_bisection(0.3, 1.0, 1.0, 0.0);
    EXPECT_NEAR(p.t_c, ref, 1e-10 * ref);
    EXPECT_EQ(p.dos.label, "default");
    EXPECT_DOUBLE_EQ(p.u0(), 0.3);
}

TEST(BuildParams, RejectsNonPositiveInputs) {
    auto with = [](auto mutate) {
        RawParams r;
        mutate(r);
        return r;
    };
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.u0n0 = -1.0; })); });
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.hbar_omega_d = 0.0; })); });
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.k_b = -2.0; })); });
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.n0 = 0.0; })); });
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.mu = -3.0; })); });
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.eps = -1e-3; })); });
    expect_code(ErrorCode::NonPositiveParameter, [&] { build_params(with([](RawParams& r) { r.u0n0 = NAN; })); });
}

TEST(BuildParams, CutoffTooLarge) {
    // the second derived inequality fails at the resolution of a double
    RawParams r;
    r.eps = 25.0;
    expect_code(ErrorCode::CutoffTooLarge, [&] { build_params(r); });
}

TEST(BuildParams, HugeCutoffHasNoTransition) {
    RawParams r;
    r.eps = 1e9;
    try {
        build_params(r);
        ADD_FAILURE() << "expected an error";
    } catch (const Error& e) {
        EXPECT_TRUE(e.code() == ErrorCode::NoBracket || e.code() == ErrorCode::CutoffTooLarge) << e.what();
    }
}

TEST(BuildParams, DerivedInvariantsHoldForAcceptedParams) {
    for (const double eps : {0.0, 1e-3, 0.1, 1.0, 5.0}) {
        RawParams r;
        r.eps = eps;
        const ModelParams p = build_params(r);
        EXPECT_LT(eps, p.hbar_omega_d / (2.0 * p.k_b * p.t_c));
        EXPECT_LT(2.0 * p.k_b * p.t_c * eps * std::exp(1.0 / p.u0n0), p.hbar_omega_d);
    }
}

TEST(BuildParams, DosMismatch) {
    DensityOfStates dos{[](double xi) { return 1.1 * std::sqrt((xi + 10.0) / 10.0); }, 1.0};
    expect_code(ErrorCode::DosMismatch, [&] { build_params(RawParams{}, dos); });
    expect_code(ErrorCode::DosMismatch, [&] { build_params(RawParams{}, DensityOfStates{}); });
}

TEST(BuildParams, TcResidualOnRandomParameters) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> coupling(0.15, 0.6);
    std::uniform_real_distribution<double> energy(0.5, 3.0);
    std::uniform_real_distribution<double> boltzmann(0.5, 2.0);
    std::uniform_real_distribution<double> cutoff(0.0, 0.01);
    for (int trial = 0; trial < 5; ++trial) {
        RawParams r;
        r.u0n0 = coupling(rng);
        r.hbar_omega_d = energy(rng);
        r.k_b = boltzmann(rng);
        r.eps = cutoff(rng);
        const ModelParams p = build_params(r);
        const long double upper = r.hbar_omega_d / (2.0L * r.k_b * p.t_c);
        const double integral = static_cast<double>(oracle::tanh_over_integral(r.eps, upper));
        EXPECT_NEAR(integral, 1.0 / r.u0n0, 1e-12 / r.u0n0) << "trial " << trial;
    }
}

TEST(DefaultDos, Values) {
    const DensityOfStates dos = default_dos(2.0, 10.0);
    EXPECT_DOUBLE_EQ(dos(0.0), 2.0);
    EXPECT_DOUBLE_EQ(dos(30.0), 4.0);
    EXPECT_EQ(dos(-10.0), 0.0);
    EXPECT_EQ(dos(-20.0), 0.0);
    for (double xi = -10.0; xi < 1e4; xi = 2.0 * xi + 11.0) {
        EXPECT_GE(dos(xi), 0.0);
        EXPECT_LE(dos(xi), dos.growth_bound * std::sqrt(xi + 10.0) * (1.0 + 1e-15));
    }
}

TEST(DefaultDos, RejectsNonPositive) {
    expect_code(ErrorCode::NonPositiveParameter, [] { default_dos(0.0, 1.0); });
    expect_code(ErrorCode::NonPositiveParameter, [] { default_dos(1.0, -1.0); });
}

TEST(DomainW, Strata) {
    const ModelParams p = build_params(RawParams{});
    const DomainW w = domain_of(p);
    const double y = 0.5 * w.y_max;
    EXPECT_EQ(w.classify(0.5 * p.t_c, y), Stratum::Interior);
    EXPECT_EQ(w.classify(0.0, y), Stratum::ZeroTemperature);
    EXPECT_EQ(w.classify(0.5 * p.t_c, 0.0), Stratum::ZeroGap);
    EXPECT_EQ(w.classify(p.t_c, 0.0), Stratum::ZeroGap);
    EXPECT_EQ(w.classify(p.t_c, y), Stratum::Critical);
    EXPECT_EQ(w.classify(0.0, 0.0), Stratum::Outside);
    EXPECT_EQ(w.classify(1.5 * p.t_c, y), Stratum::Outside);
    EXPECT_EQ(w.classify(0.5 * p.t_c, w.y_max), Stratum::Outside);
    EXPECT_EQ(w.classify(0.5 * p.t_c, -y), Stratum::Outside);
    EXPECT_EQ(w.classify(NAN, y), Stratum::Outside);
    EXPECT_EQ(to_string(Stratum::Interior), "W1");
    EXPECT_EQ(to_string(Stratum::Critical), "W4");
}

TEST(DomainW, InteriorRequiresOpenRanges) {
    const ModelParams p = build_params(RawParams{});
    const DomainW w = domain_of(p);
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double t = p.t_c * i / 20.0;
            const double y = w.y_max * j / 20.0;
            const Stratum s = w.classify(t, y);
            const bool interior = t > 0.0 && t < p.t_c && y > 0.0 && y < w.y_max;
            EXPECT_EQ(s == Stratum::Interior, interior) << t << ' ' << y;
        }
    }
}
