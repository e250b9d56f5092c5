#pragma once

// Command-line front end. run_cli is the whole program; tools/bcsgap.cpp only
// forwards argv so that tests can drive it in-process.

#include "bcsgap/errors.hpp"
#include "bcsgap/gap.hpp"
#include "bcsgap/io.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/thermo.hpp"
#include "bcsgap/transition.hpp"
#include "bcsgap/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace bcsgap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitVerifyFailed = 2;

inline constexpr const char* kQuadRelTolEnv = "BCSGAP_QUAD_RELTOL";

enum class OutputFormat { Csv, Json };

struct CliConfig {
    std::string subcommand;
    RawParams raw;
    std::optional<std::string> out_path;
    OutputFormat format = OutputFormat::Csv;
    std::size_t points = 0;  // 0: subcommand default
    std::optional<double> t_min;
    std::optional<double> t_max;
};

namespace detail {

/// rel_tol override from the environment; absent or empty leaves the default.
inline QuadSpec quad_from_env() {
    QuadSpec q;
    const char* raw = std::getenv(kQuadRelTolEnv);
    if (raw == nullptr || *raw == '\0') {
        return q;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || raw[used] != '\0' || !(v > 0.0) || !(v < 1.0)) {
        throw Error(ErrorCode::ConfigError, std::string(kQuadRelTolEnv) + " must be a number in (0, 1), got '" + raw + "'");
    }
    q.rel_tol = v;
    return q;
}

inline nlohmann::ordered_json params_json(const ModelParams& p) {
    return {
        {"u0n0", p.u0n0}, {"hbar_omega_d", p.hbar_omega_d}, {"k_b", p.k_b}, {"eps", p.eps},
        {"n0", p.n0},     {"mu", p.mu},                     {"t_c", p.t_c},
    };
}

inline void print_labeled(std::ostream& os, const char* label, double v) {
    os << label << " = " << format_double(v) << '\n';
}

inline int cmd_tc(const CliConfig& cfg, const ModelParams& p, std::ostream& os) {
    const GapClosedForms forms = delta_closed_forms(p);
    const double fp = f_prime_at_tc(p);
    if (cfg.format == OutputFormat::Json) {
        nlohmann::ordered_json j = {
            {"t_c", p.t_c}, {"delta0", forms.delta0}, {"delta", forms.delta}, {"f_prime_tc", fp}};
        os << j.dump(2) << '\n';
        return kExitOk;
    }
    print_labeled(os, "T_c", p.t_c);
    print_labeled(os, "Delta_0", forms.delta0);
    print_labeled(os, "Delta", forms.delta);
    print_labeled(os, "f_prime_T_c", fp);
    return kExitOk;
}

inline int cmd_gap_curve(const CliConfig& cfg, const ModelParams& p, std::ostream& os) {
    const GapCurve curve = sample_gap_curve(p, cfg.points == 0 ? 201 : cfg.points);
    if (cfg.format == OutputFormat::Csv) {
        write_csv(os, curve);
        return kExitOk;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const GapPoint& gp : curve.points) {
        rows.push_back({{"T", gp.t},
                        {"f", gp.f},
                        {"f_prime", gp.f_prime},
                        {"f_second", gp.f_second},
                        {"residual", gp.residual}});
    }
    os << nlohmann::ordered_json{{"params", params_json(p)}, {"points", rows}}.dump(2) << '\n';
    return kExitOk;
}

inline int cmd_thermo(const CliConfig& cfg, const ModelParams& p, std::ostream& os, std::ostream& err) {
    const double t_min = cfg.t_min.value_or(0.5 * p.t_c);
    const double t_max = cfg.t_max.value_or(1.5 * p.t_c);
    if (!(t_min < p.t_c && p.t_c < t_max)) {
        err << "note: [" << format_double(t_min) << ", " << format_double(t_max)
            << "] does not straddle T_c = " << format_double(p.t_c) << "; no C_V jump in range\n";
    }
    const auto rows = thermo_table(p, t_min, t_max, cfg.points == 0 ? 101 : cfg.points);
    if (cfg.format == OutputFormat::Csv) {
        write_csv(os, rows);
        return kExitOk;
    }
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const ThermoPoint& tp : rows) {
        out.push_back({{"T", tp.t},
                       {"omega", tp.omega},
                       {"omega_t", tp.omega_t},
                       {"omega_tt", tp.omega_tt},
                       {"entropy", tp.entropy},
                       {"c_v", tp.c_v},
                       {"branch", std::string(to_string(tp.branch))}});
    }
    os << nlohmann::ordered_json{{"params", params_json(p)}, {"points", out}}.dump(2) << '\n';
    return kExitOk;
}

inline int cmd_jump(const CliConfig& cfg, const ModelParams& p, std::ostream& os) {
    const double closed = omega_second_jump(p);
    const double measured = measure_omega_tt_limits_fd(p).jump();
    std::optional<double> dcv;
    if (p.eps == 0.0) {
        dcv = delta_cv(p);
    }
    if (cfg.format == OutputFormat::Json) {
        nlohmann::ordered_json j = {{"omega_tt_jump", closed}, {"omega_tt_jump_fd", measured}};
        j["delta_cv"] = dcv ? nlohmann::ordered_json(*dcv) : nlohmann::ordered_json(nullptr);
        os << j.dump(2) << '\n';
        return kExitOk;
    }
    print_labeled(os, "omega_tt_jump", closed);
    print_labeled(os, "omega_tt_jump_fd", measured);
    if (dcv) {
        print_labeled(os, "delta_C_V", *dcv);
    }
    return kExitOk;
}

inline int cmd_verify(const CliConfig& cfg, const ModelParams& p, std::ostream& os) {
    const VerificationReport report = run_suite(p, cfg.points == 0 ? 201 : cfg.points);
    if (cfg.format == OutputFormat::Json) {
        os << to_json(report).dump(2) << '\n';
    } else {
        os << "name,measured,expected,tolerance,pass\n";
        for (const Check& c : report.checks) {
            os << c.name << ',' << format_double(c.measured) << ',' << format_double(c.expected) << ','
               << format_double(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
        }
    }
    return report.pass() ? kExitOk : kExitVerifyFailed;
}

inline int dispatch(const CliConfig& cfg, std::ostream& os, std::ostream& err) {
    const ModelParams p = build_params(cfg.raw, quad_from_env());
    if (cfg.subcommand == "tc") {
        return cmd_tc(cfg, p, os);
    }
    if (cfg.subcommand == "gap-curve") {
        return cmd_gap_curve(cfg, p, os);
    }
    if (cfg.subcommand == "thermo") {
        return cmd_thermo(cfg, p, os, err);
    }
    if (cfg.subcommand == "jump") {
        return cmd_jump(cfg, p, os);
    }
    return cmd_verify(cfg, p, os);
}

}  // namespace detail

/// Parses argv, runs one subcommand and returns the process exit code:
/// 0 success or help, 1 invalid input, 2 failed verification.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliConfig cfg;
    CLI::App app{"BCS gap equation solver and second-order transition checks", "bcsgap"};
    app.require_subcommand(1, 1);
    // config keys use the underscore spellings (hbar_omega_d, k_b); unknown keys are errors
    app.set_config("--config", "", "key = value file with parameter values; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    app.add_option("--u0n0", cfg.raw.u0n0, "dimensionless coupling U0 N0")->capture_default_str();
    app.add_option("--hbar-omega-d,--hbar_omega_d", cfg.raw.hbar_omega_d, "Debye energy")->capture_default_str();
    app.add_option("--k-b,--k_b", cfg.raw.k_b, "Boltzmann constant in chosen units")->capture_default_str();
    app.add_option("--eps", cfg.raw.eps, "lower cutoff of the shell integrals")->capture_default_str();
    app.add_option("--n0", cfg.raw.n0, "density of states at the Fermi level")->capture_default_str();
    app.add_option("--mu", cfg.raw.mu, "chemical potential (band depth)")->capture_default_str();
    std::string dos_name = "default";
    app.add_option("--dos", dos_name, "density of states model")->check(CLI::IsMember({"default"}))->capture_default_str();
    app.add_option("--out", cfg.out_path, "write output to this file instead of stdout");
    std::string format_name = "csv";
    app.add_option("--format", format_name, "output format")
        ->transform(CLI::IsMember({"csv", "json"}, CLI::ignore_case))
        ->capture_default_str();

    app.add_subcommand("tc", "T_c, Delta_0, Delta and f'(T_c)")->fallthrough();
    auto* gap = app.add_subcommand("gap-curve", "sampled f(T) = Delta(T)^2 on [0, T_c]")->fallthrough();
    gap->add_option("--points", cfg.points, "grid points (>= 2, default 201)")->check(CLI::Range(2ul, 1000000ul));
    auto* thermo = app.add_subcommand("thermo", "Omega and its T-derivatives on [tmin, tmax]")->fallthrough();
    thermo->add_option("--points", cfg.points, "grid points (>= 2, default 101)")->check(CLI::Range(2ul, 1000000ul));
    thermo->add_option("--tmin", cfg.t_min, "lowest temperature (default 0.5 T_c)");
    thermo->add_option("--tmax", cfg.t_max, "highest temperature (default 1.5 T_c)");
    app.add_subcommand("jump", "jump of Omega'' at T_c and the specific-heat gap")->fallthrough();
    auto* verify = app.add_subcommand("verify", "run the verification suite")->fallthrough();
    verify->add_option("--points,--grid", cfg.points, "gap-curve grid size (default 201)")
        ->check(CLI::Range(2ul, 1000000ul));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = format_name == "json" ? OutputFormat::Json : OutputFormat::Csv;

    try {
        if (!cfg.out_path) {
            return detail::dispatch(cfg, out, err);
        }
        std::ostringstream buffer;
        const int code = detail::dispatch(cfg, buffer, err);
        std::ofstream file(*cfg.out_path, std::ios::binary);
        if (!(file << buffer.str()) || !file.flush()) {
            err << "error: cannot write " << *cfg.out_path << '\n';
            return kExitInvalid;
        }
        return code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace bcsgap
