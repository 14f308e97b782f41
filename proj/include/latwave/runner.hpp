#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "latwave/config.hpp"
#include "latwave/mollifier.hpp"
#include "latwave/semiclassical.hpp"
#include "latwave/wave.hpp"

namespace latwave {

inline constexpr int kExitOk = 0;         // run finished, every mathematical gate held
inline constexpr int kExitContract = 1;   // a certificate, monotonicity, or order gate failed
inline constexpr int kExitConfig = 2;     // configuration rejected before any solve
inline constexpr int kExitNumerical = 3;  // integrator failure or non-finite values

struct RunOptions {
    bool sabotage_halve_k = false;  // debug hook: halve the certificate rate constant
};

/// Everything a run produces. Artifacts are (filename, body) pairs in a fixed
/// order; identical config and worker count give byte-identical bodies.
struct RunOutcome {
    int exit_code = kExitOk;
    std::vector<std::pair<std::string, std::string>> artifacts;
    std::string log;
};

namespace detail {

inline CoefficientProfile build_a_profile(const CoeffConfig& c, double T) {
    if (c.kind == "constant") return make_lipschitz("constant", c.c0, 0.0, 0.0, T);
    if (c.kind == "linear") return make_lipschitz("linear", c.c0, c.c1, 0.0, T);
    if (c.kind == "abs_sin") return make_lipschitz("abs_sin", c.c0, c.c1, c.omega, T);
    if (c.kind == "weierstrass") return make_weierstrass(c.alpha, c.depth, c.floor_value, T);
    if (c.kind == "degenerate_smooth") return make_degenerate_smooth(c.m, c.l, T);
    throw std::invalid_argument("[a] unknown kind '" + c.kind + "'");
}

/// b is a nonnegative constant; tagged weak-Holder so a zero value passes the
/// profile's own positivity checks.
inline CoefficientProfile build_b_profile(double c0, double T) {
    CoefficientProfile p;
    p.eval = [c0](double) { return c0; };
    p.deriv = [](double) { return 0.0; };
    p.case_tag = CoeffCase::HolderWeak;
    p.alpha = 1.0;
    p.T = T;
    p.a0 = c0;
    p.a1 = c0;
    p.holder_seminorm = 0.0;
    p.seminorm_analytic = true;
    p.deriv_sup = 0.0;
    return p;
}

inline std::array<int, 3> first_axis_mode(int m) { return {m, 0, 0}; }

/// Expand the data block into band-limited series for u0 and u1. The delta
/// preset is grid-sized, not band-limited, and is handled separately.
inline void build_data_series(const ExperimentConfig& cfg, FourierSeries& u0, FourierSeries& u1) {
    u0.n = u1.n = cfg.n;
    u0.L = u1.L = cfg.L;
    const DataConfig& d = cfg.data;
    if (d.preset == "single_mode") {
        const cdouble zero{0.0, 0.0};
        if (d.u0_amp != zero) u0.terms.push_back({first_axis_mode(d.m), d.u0_amp});
        if (d.u1_amp != zero) u1.terms.push_back({first_axis_mode(d.m), d.u1_amp});
    } else if (d.preset == "gaussian_series") {
        // smooth positive bump in frequency: coefficients exp(-1.5 |m|^2)
        std::array<int, 3> m{0, 0, 0};
        std::function<void(int)> walk = [&](int axis) {
            if (axis == cfg.n) {
                double msq = 0.0;
                for (int j = 0; j < cfg.n; ++j) msq += static_cast<double>(m[j]) * m[j];
                u0.terms.push_back({m, cdouble{std::exp(-1.5 * msq), 0.0}});
                return;
            }
            for (int v = -d.band; v <= d.band; ++v) {
                m[static_cast<std::size_t>(axis)] = v;
                walk(axis + 1);
            }
        };
        walk(0);
    } else if (d.preset == "series") {
        u0.terms = d.u0_terms;
        u1.terms = d.u1_terms;
    } else if (d.preset != "delta") {
        throw std::invalid_argument("[data] unknown preset '" + d.preset + "'");
    }
}

inline int series_band(const FourierSeries& s) {
    int band = 0;
    for (const auto& [m, c] : s.terms)
        for (int j = 0; j < s.n; ++j) band = std::max(band, std::abs(m[j]));
    return band;
}

struct BuiltForcing {
    std::function<double(double)> g;  // null for kind zero
    FourierSeries F;
};

inline BuiltForcing build_forcing(const ExperimentConfig& cfg) {
    BuiltForcing f;
    f.F.n = cfg.n;
    f.F.L = cfg.L;
    if (cfg.forcing.kind == "zero") return f;
    f.F.terms.push_back({first_axis_mode(cfg.forcing.m), cfg.forcing.amp});
    if (cfg.forcing.kind == "one") {
        f.g = [](double) { return 1.0; };
    } else if (cfg.forcing.kind == "cosine") {
        const double omega = cfg.forcing.omega;
        f.g = [omega](double t) { return std::cos(omega * t); };
    } else {
        throw std::invalid_argument("[forcing] unknown kind '" + cfg.forcing.kind + "'");
    }
    return f;
}

/// Lattice problem for solve and verify runs.
inline CauchySpec build_cauchy_spec(const ExperimentConfig& cfg) {
    const LatticeGrid grid = LatticeGrid::make(cfg.n, cfg.N, cfg.hbar());
    CauchySpec spec;
    spec.grid = grid;
    spec.a = build_a_profile(cfg.a, cfg.T);
    spec.b = build_b_profile(cfg.b.c0, cfg.T);
    spec.T = cfg.T;
    spec.ode_tol = cfg.ode_tol;
    if (cfg.data.preset == "delta") {
        spec.u0 = GridField::zeros(grid);
        spec.u1 = GridField::zeros(grid);
        spec.u0.values[0] = {1.0, 0.0};
    } else {
        FourierSeries u0, u1;
        build_data_series(cfg, u0, u1);
        const int band = std::max(series_band(u0), series_band(u1));
        if (2 * band > cfg.N)
            throw std::invalid_argument("[data] mode " + std::to_string(band) + " exceeds the grid Nyquist index " + std::to_string(cfg.N / 2));
        spec.u0 = u0.terms.empty() ? GridField::zeros(grid) : u0.sample(grid);
        spec.u1 = u1.terms.empty() ? GridField::zeros(grid) : u1.sample(grid);
    }
    const BuiltForcing f = build_forcing(cfg);
    if (f.g) {
        if (2 * series_band(f.F) > cfg.N)
            throw std::invalid_argument("[forcing] mode " + std::to_string(series_band(f.F)) + " exceeds the grid Nyquist index " + std::to_string(cfg.N / 2));
        spec.forcing_g = f.g;
        spec.forcing_F = f.F.sample(grid);
    }
    return spec;
}

/// Continuum reference problem for converge runs.
inline ContinuumSpec build_continuum_spec(const ExperimentConfig& cfg) {
    ContinuumSpec spec;
    spec.n = cfg.n;
    spec.L = cfg.L;
    spec.T = cfg.T;
    spec.ode_tol = cfg.ode_tol;
    spec.a = build_a_profile(cfg.a, cfg.T);
    spec.b = build_b_profile(cfg.b.c0, cfg.T);
    if (cfg.data.preset == "delta") throw std::invalid_argument("[data] preset delta does not apply to converge");
    FourierSeries u0, u1;
    build_data_series(cfg, u0, u1);
    spec.u0 = u0;
    spec.u1 = u1;
    int band = std::max(series_band(u0), series_band(u1));
    const BuiltForcing f = build_forcing(cfg);
    if (f.g) {
        spec.forcing_g = f.g;
        spec.forcing_F = f.F;
        band = std::max(band, series_band(f.F));
    }
    spec.M = std::max(1, band);
    return spec;
}

inline int effective_workers(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("LATWAVE_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
    }
    return cfg.workers;
}

/// Certificate bound at horizon t, in the aggregate's counting scale.
inline double bound_term_at(const EnergyCertificate& cert, double beta2, double data, double t) {
    if (!(data > 0.0)) return 0.0;
    const double t_eff = cert.k_includes_time ? 1.0 : t;
    const double rate = cert.K * t_eff * std::pow(bracket_sq(beta2), cert.exponent / 2.0);
    return std::exp(std::log(cert.C) + rate + std::log(data));
}

inline void csv_row(std::string& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
}

}  // namespace detail

/// Deterministic library sanity checks used by the selftest mode: each pins an
/// independently known answer (closed forms, exact identities) against the
/// code paths the pipelines rely on.
inline std::vector<std::pair<std::string, bool>> run_selftest_checks() {
    std::vector<std::pair<std::string, bool>> out;
    auto add = [&](const char* name, auto&& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (...) {
            ok = false;
        }
        out.emplace_back(name, ok);
    };

    const LatticeGrid g16 = LatticeGrid::make(1, 16, 0.25);
    GridField noise = GridField::zeros(g16);
    {
        std::mt19937 rng(20240816u);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (auto& v : noise.values) v = {dist(rng), dist(rng)};
    }

    add("dft_round_trip", [&] {
        const GridField back = inverse_dft(forward_dft(noise));
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < noise.values.size(); ++i) {
            num += std::norm(back.values[i] - noise.values[i]);
            den += std::norm(noise.values[i]);
        }
        return std::sqrt(num / den) <= 1e-12;
    });

    add("plancherel", [&] {
        const SpectralField hat = forward_dft(noise);
        double grid_sum = 0.0, spec_sum = 0.0;
        for (const auto& v : noise.values) grid_sum += std::norm(v);
        for (const auto& v : hat.coeffs) spec_sum += std::norm(v);
        spec_sum /= static_cast<double>(g16.size());
        return std::abs(grid_sum - spec_sum) <= 1e-12 * grid_sum;
    });

    add("stencil_matches_symbol", [&] {
        const GridField applied = apply_lattice_laplacian(noise);
        SpectralField hat = forward_dft(noise);
        for (std::size_t i = 0; i < hat.coeffs.size(); ++i) hat.coeffs[i] *= laplacian_symbol(g16, g16.theta(g16.unravel(i)));
        const GridField via_symbol = inverse_dft(hat);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < applied.values.size(); ++i) {
            worst = std::max(worst, std::abs(applied.values[i] - via_symbol.values[i]));
            scale = std::max(scale, std::abs(applied.values[i]));
        }
        return worst <= 1e-11 * std::max(scale, 1.0);
    });

    const CoefficientProfile unit_a = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    const CoefficientProfile zero_b = detail::build_b_profile(0.0, 1.0);

    add("oscillator_cosine", [&] {
        ModeProblem p;
        p.beta2 = 4.0;
        p.a = unit_a;
        p.b = zero_b;
        p.v0 = {1.0, 0.0};
        p.v1 = {0.0, 0.0};
        p.T = 1.0;
        const ModeTrajectory traj = integrate_mode(p, 1e-10);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            worst = std::max(worst, std::abs(traj.v[i] - cdouble{std::cos(2.0 * traj.t[i]), 0.0}));
            worst = std::max(worst, std::abs(traj.dv[i] - cdouble{-2.0 * std::sin(2.0 * traj.t[i]), 0.0}));
        }
        return worst <= 1e-8;
    });

    add("oscillator_forced", [&] {
        ModeProblem p;
        p.beta2 = 4.0;
        p.a = unit_a;
        p.b = zero_b;
        p.v0 = {0.0, 0.0};
        p.v1 = {0.0, 0.0};
        p.T = 1.0;
        p.g = [](double) { return cdouble{1.0, 0.0}; };
        const ModeTrajectory traj = integrate_mode(p, 1e-10);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.t.size(); ++i)
            worst = std::max(worst, std::abs(traj.v[i] - cdouble{0.25 * (1.0 - std::cos(2.0 * traj.t[i])), 0.0}));
        return worst <= 1e-8;
    });

    add("shifted_eigenvalue_identities", [&] {
        const CoefficientProfile rough = make_weierstrass(0.5, 8, 0.0, 1.0);
        const double eps = 1.0 / 16.0;
        const RegularizedEigenvalues eigs = regularized_eigenvalues(rough, eps, true, 0.25);
        const double shift = std::pow(eps, 0.25);
        for (double t : {0.1, 0.5, 0.9}) {
            if (std::abs(eigs.lam2(t) + eigs.lam1(t) - 3.0 * shift) > 1e-12) return false;
            if (eigs.lam2(t) - eigs.lam1(t) < shift - 1e-12) return false;
        }
        return true;
    });

    add("gronwall_rate", [&] {
        const CoefficientProfile a2 = make_lipschitz("constant", 2.0, 0.0, 0.0, 1.0);
        const CoefficientProfile b2 = detail::build_b_profile(0.5, 1.0);
        ModeProblem p;
        p.beta2 = 9.0;
        p.a = a2;
        p.b = b2;
        p.v0 = {1.0, 0.0};
        p.v1 = {0.0, 1.0};
        p.T = 1.0;
        const ModeTrajectory traj = integrate_mode(p, 1e-10);
        const std::vector<double> E = symmetriser_energy(a2, traj);
        return gronwall_ratio(E, traj.t, case1_kappa(a2, b2, 9.0)) <= 1.0 + 1e-6;
    });

    add("central_difference_residual", [&] {
        auto phi = [](double x) { return std::sin(x); };
        auto phi_dd = [](double x) { return -std::sin(x); };
        return central_difference_identity_check(phi, phi_dd, 0.7, 1.0) <= 1.0 / 12.0 + 1e-12;
    });

    add("constant_certificate_passes", [&] {
        ExperimentConfig cfg;
        cfg.mode = RunMode::Verify;
        cfg.n = 1;
        cfg.N = 8;
        cfg.hbars = {0.25};
        cfg.L = 2.0;
        cfg.a = {.kind = "constant", .c0 = 1.0};
        cfg.b = {.kind = "constant", .c0 = 0.0};
        cfg.data.preset = "single_mode";
        cfg.data.m = 1;
        const CauchySpec spec = detail::build_cauchy_spec(cfg);
        WaveSolution sol = solve_cauchy(spec, 1);
        const auto certs = certify_solution(sol, spec);
        for (const auto& c : certs)
            if (!c.pass) return false;
        return true;
    });

    return out;
}

namespace detail {

inline RunOutcome run_selftest() {
    RunOutcome out;
    const auto checks = run_selftest_checks();
    int passed = 0;
    for (const auto& [name, ok] : checks) {
        out.log += (ok ? "ok " : "FAIL ") + name + "\n";
        if (ok) ++passed;
    }
    out.log += "selftest: " + std::to_string(passed) + "/" + std::to_string(checks.size()) + " passed\n";
    out.exit_code = passed == static_cast<int>(checks.size()) ? kExitOk : kExitContract;
    return out;
}

inline RunOutcome run_solve(const ExperimentConfig& cfg) {
    RunOutcome out;
    const CauchySpec spec = build_cauchy_spec(cfg);
    const WaveSolution sol = solve_cauchy(spec, effective_workers(cfg));
    const double inv_points = 1.0 / static_cast<double>(sol.grid.size());

    std::string solution = "t,l2_u,l2_du\n";
    double l2u_final = 0.0, l2du_final = 0.0;
    for (std::size_t s = 0; s < sol.sample_times.size(); ++s) {
        double l2u = 0.0, l2du = 0.0;
        for (const auto& traj : sol.per_mode) {
            l2u += std::norm(traj.v[s]);
            l2du += std::norm(traj.dv[s]);
        }
        l2u *= inv_points;
        l2du *= inv_points;
        csv_row(solution, {format_double(sol.sample_times[s]), format_double(l2u), format_double(l2du)});
        if (s + 1 == sol.sample_times.size()) {
            l2u_final = l2u;
            l2du_final = l2du;
        }
    }

    std::string final_state = "k,re_u,im_u,re_du,im_du\n";
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
        const cdouble u = sol.u.back().values[k];
        const cdouble du = sol.du.back().values[k];
        csv_row(final_state, {std::to_string(k), format_double(u.real()), format_double(u.imag()), format_double(du.real()), format_double(du.imag())});
    }

    out.log += "mode: solve\n";
    out.log += "grid: n=" + std::to_string(cfg.n) + " N=" + std::to_string(cfg.N) + " hbar=" + format_double(cfg.hbar()) + " L=" + format_double(cfg.L) + "\n";
    out.log += "T: " + format_double(cfg.T) + "\n";
    out.log += "samples: " + std::to_string(sol.sample_times.size()) + "\n";
    out.log += "l2_u(T): " + format_double(l2u_final) + "\n";
    out.log += "l2_du(T): " + format_double(l2du_final) + "\n";
    out.artifacts.emplace_back("solution.csv", std::move(solution));
    out.artifacts.emplace_back("final_state.csv", std::move(final_state));
    return out;
}

inline RunOutcome run_verify(const ExperimentConfig& cfg, const RunOptions& opts) {
    RunOutcome out;
    if (cfg.forcing.kind != "zero") throw std::invalid_argument("verify covers the homogeneous problem only; remove the [forcing] block");
    const CauchySpec spec = build_cauchy_spec(cfg);
    const int workers = effective_workers(cfg);
    WaveSolution sol = solve_cauchy(spec, workers);

    EnergyCertificate base = regime_certificate(spec.a, spec.b, spec.T, cfg.s, cfg.l);
    if (opts.sabotage_halve_k) base.K *= 0.5;
    const auto certs = certify_solution(sol, spec, base, workers);

    std::string modes = "m,beta2,C,K,exponent,realized_ratio,pass\n";
    bool all_pass = true;
    double max_ratio = 0.0;
    int inflated = 0;
    for (std::size_t k = 0; k < certs.size(); ++k) {
        const EnergyCertificate& c = certs[k];
        all_pass = all_pass && c.pass;
        if (std::isfinite(c.realized_ratio)) max_ratio = std::max(max_ratio, c.realized_ratio);
        if (c.cprime_inflation > 1.0) ++inflated;
        csv_row(modes, {std::to_string(k), format_double(sol.beta2[k]), format_double(c.C), format_double(c.K), format_double(c.exponent),
                        format_double(c.realized_ratio), c.pass ? "1" : "0"});
    }

    const double inv_points = 1.0 / static_cast<double>(sol.grid.size());
    std::vector<double> data(sol.per_mode.size());
    for (std::size_t k = 0; k < sol.per_mode.size(); ++k) data[k] = std::norm(sol.per_mode[k].v[0]) + std::norm(sol.per_mode[k].dv[0]);

    std::string aggregate = "t,l2_u,l2_du,bound,ratio\n";
    for (std::size_t s = 0; s < sol.sample_times.size(); ++s) {
        const double t = sol.sample_times[s];
        double l2u = 0.0, l2du = 0.0, bound = 0.0;
        for (std::size_t k = 0; k < sol.per_mode.size(); ++k) {
            l2u += std::norm(sol.per_mode[k].v[s]);
            l2du += std::norm(sol.per_mode[k].dv[s]);
            bound += bound_term_at(certs[k], sol.beta2[k], data[k], t);
        }
        l2u *= inv_points;
        l2du *= inv_points;
        bound *= inv_points;
        const double ratio = bound > 0.0 ? (l2u + l2du) / bound : 0.0;
        csv_row(aggregate, {format_double(t), format_double(l2u), format_double(l2du), format_double(bound), format_double(ratio)});
    }

    std::string final_state = "k,re_u,im_u,re_du,im_du\n";
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
        const cdouble u = sol.u.back().values[k];
        const cdouble du = sol.du.back().values[k];
        csv_row(final_state, {std::to_string(k), format_double(u.real()), format_double(u.imag()), format_double(du.real()), format_double(du.imag())});
    }

    const WellposednessReport rep = wellposedness_report(sol, spec);
    out.log += "mode: verify\n";
    out.log += "grid: n=" + std::to_string(cfg.n) + " N=" + std::to_string(cfg.N) + " hbar=" + format_double(cfg.hbar()) + " L=" + format_double(cfg.L) + "\n";
    out.log += "regime: " + std::string(to_string(spec.a.case_tag)) + "\n";
    out.log += "certificate: C=" + format_double(base.C) + " K=" + format_double(base.K) + " exponent=" + format_double(base.exponent) + "\n";
    out.log += "modes: " + std::to_string(certs.size()) + "\n";
    out.log += "all_pass: " + std::string(all_pass ? "yes" : "no") + "\n";
    out.log += "max_realized_ratio: " + format_double(max_ratio) + "\n";
    out.log += "inflated_modes: " + std::to_string(inflated) + "\n";
    out.log += "realized_constant: " + format_double(rep.realized_constant) + "\n";
    out.artifacts.emplace_back("modes.csv", std::move(modes));
    out.artifacts.emplace_back("aggregate.csv", std::move(aggregate));
    out.artifacts.emplace_back("final_state.csv", std::move(final_state));
    out.exit_code = all_pass ? kExitOk : kExitContract;
    return out;
}

inline RunOutcome run_converge(const ExperimentConfig& cfg) {
    RunOutcome out;
    const ContinuumSpec spec = build_continuum_spec(cfg);
    const ConvergenceResult res = convergence_study(spec, cfg.hbars, effective_workers(cfg));

    std::string converge = "hbar,err_l2,derr_l2\n";
    for (std::size_t i = 0; i < res.hbars.size(); ++i)
        csv_row(converge, {format_double(res.hbars[i]), format_double(res.errors[i]), format_double(res.derrors[i])});
    converge += "# fitted_order=" + format_double(res.fitted_order) + ",fit_residual=" + format_double(res.fit_residual) + "\n";

    const bool order_ok = std::isfinite(res.fitted_order) && res.fitted_order >= 1.8;
    out.log += "mode: converge\n";
    out.log += "rungs: " + std::to_string(res.hbars.size()) + "\n";
    out.log += "fitted_order: " + format_double(res.fitted_order) + "\n";
    out.log += "fitted_order_d: " + format_double(res.fitted_order_d) + "\n";
    out.log += "fit_residual: " + format_double(res.fit_residual) + "\n";
    out.log += "monotone: " + std::string(res.monotone ? "yes" : "no") + "\n";
    if (!res.diagnostics.empty()) {
        out.log += res.diagnostics;
        if (out.log.back() != '\n') out.log += '\n';
    }
    out.log += "smoothness_note: " + res.sobolev.statement + "\n";
    out.artifacts.emplace_back("converge.csv", std::move(converge));
    out.exit_code = order_ok ? kExitOk : kExitContract;
    return out;
}

}  // namespace detail

/// Execute one experiment. Never throws: failures are reported through the
/// exit code, with the reason appended to the log.
inline RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
    RunOutcome out;
    try {
        switch (cfg.mode) {
            case RunMode::Selftest:
                out = detail::run_selftest();
                break;
            case RunMode::Solve:
                out = detail::run_solve(cfg);
                break;
            case RunMode::Verify:
                out = detail::run_verify(cfg, opts);
                break;
            case RunMode::Converge:
                out = detail::run_converge(cfg);
                break;
        }
    } catch (const ConfigError& e) {
        out.artifacts.clear();
        out.log += std::string(e.what()) + "\n";
        out.exit_code = kExitConfig;
    } catch (const std::invalid_argument& e) {
        out.artifacts.clear();
        out.log += std::string("configuration invalid: ") + e.what() + "\n";
        out.exit_code = kExitConfig;
    } catch (const std::exception& e) {
        out.artifacts.clear();
        out.log += std::string("numerical failure: ") + e.what() + "\n";
        out.exit_code = kExitNumerical;
    }
    out.log += "exit: " + std::to_string(out.exit_code) + "\n";
    out.artifacts.emplace_back("summary.txt", out.log);
    return out;
}

/// Write the artifacts under dir, creating it as needed.
inline void write_artifacts(const RunOutcome& out, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& [name, body] : out.artifacts) {
        std::ofstream file(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        file.write(body.data(), static_cast<std::streamsize>(body.size()));
    }
}

}  // namespace latwave
