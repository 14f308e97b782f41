#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "latwave/energy.hpp"
#include "latwave/fourier.hpp"
#include "latwave/lattice.hpp"
#include "latwave/mode_ode.hpp"

namespace latwave {

/// Full lattice Cauchy problem
///   d2u/dt2 - hbar^{-2} a(t) L u + b(t) u = g(t) F,  u(0)=u0, du(0)=u1,
/// periodic on the N^n grid. Forcing is the separable product g(t)*F; a null g
/// means homogeneous.
struct CauchySpec {
    LatticeGrid grid;
    CoefficientProfile a;
    CoefficientProfile b;
    GridField u0;
    GridField u1;
    std::function<double(double)> forcing_g;
    GridField forcing_F;
    double T = 1.0;
    double ode_tol = 1e-10;

    void check() const {
        a.check();
        b.check();
        u0.check();
        u1.check();
        if (!(u0.grid == grid) || !(u1.grid == grid)) throw std::invalid_argument("CauchySpec: data fields do not share the grid");
        if (forcing_g) {
            forcing_F.check();
            if (!(forcing_F.grid == grid)) throw std::invalid_argument("CauchySpec: forcing field does not share the grid");
        }
        if (!(T > 0.0)) throw std::invalid_argument("CauchySpec: T must be positive");
        if (a.T < T || b.T < T) throw std::invalid_argument("CauchySpec: coefficient profiles do not cover [0,T]");
        if (b.a0 < 0.0) throw std::invalid_argument("CauchySpec: b must be nonnegative");
        check_tol(ode_tol);
        // regime preconditions beyond the profile's own checks
        if ((a.case_tag == CoeffCase::Lip || a.case_tag == CoeffCase::HolderStrict) && !(a.a0 > 0.0))
            throw std::invalid_argument("CauchySpec: this regime requires inf a > 0");
        if (a.case_tag == CoeffCase::Lip && !std::isfinite(a.deriv_sup)) throw std::invalid_argument("CauchySpec: Lipschitz regime requires ||a'||");
    }

    /// beta^2 at the extreme grid frequency (all axes at theta = 1/2).
    double beta2_max() const { return 4.0 * grid.n / (grid.hbar * grid.hbar); }

    /// Dense sample count shared by every mode: the worst mode's requirement.
    int shared_sample_count() const {
        const double omega = std::sqrt(beta2_max() * std::max(a.a1, 0.0) + std::max(b.a1, 0.0));
        return std::max(512, 8 * static_cast<int>(std::ceil(T * omega)));
    }
};

struct WaveSolution {
    LatticeGrid grid;
    std::vector<double> sample_times;
    std::vector<GridField> u;
    std::vector<GridField> du;
    std::vector<ModeTrajectory> per_mode;  // flat grid-index order
    std::vector<double> beta2;             // per mode
    std::vector<EnergyCertificate> certificates;  // filled by certify_solution
};

/// Worker count: explicit request wins, then the LATWAVE_WORKERS environment
/// variable, then hardware concurrency. Always at least 1.
inline int resolve_workers(int requested = 0) {
    if (requested > 0) return std::min(requested, 256);
    if (const char* env = std::getenv("LATWAVE_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(std::min(hc, 256u)) : 1;
}

namespace detail {

/// Parallel map over [0, count) in contiguous chunks. Each worker writes only
/// its own indices, so results are independent of the worker count. The first
/// failing index (by position) wins error reporting.
template <class Fn>
void chunked_parallel_for(std::size_t count, int workers, Fn&& fn, const char* who) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(count ? count : 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                throw NumericalError(std::string(who) + ": mode " + std::to_string(i) + ": " + e.what());
            }
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::string> errors(static_cast<std::size_t>(workers));
    std::vector<std::size_t> error_index(static_cast<std::size_t>(workers), count);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(w)] = e.what();
                    error_index[static_cast<std::size_t>(w)] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    std::size_t first = count;
    int owner = -1;
    for (int w = 0; w < workers; ++w) {
        if (error_index[static_cast<std::size_t>(w)] < first) {
            first = error_index[static_cast<std::size_t>(w)];
            owner = w;
        }
    }
    if (owner >= 0) throw NumericalError(std::string(who) + ": mode " + std::to_string(first) + ": " + errors[static_cast<std::size_t>(owner)]);
}

}  // namespace detail

/// Spectral solve with caller-supplied Fourier data: integrate every mode ODE
/// on a shared uniform time grid, transform back per sample. Sample 0 carries
/// the spec's physical data verbatim; reassembly round-trip error belongs to
/// later samples only. Modes whose data and forcing coefficients are exactly
/// zero stay identically zero without an integrator run.
inline WaveSolution solve_cauchy_spectral(const CauchySpec& spec, const SpectralField& u0_hat, const SpectralField& u1_hat,
                                          const SpectralField* f_hat, int workers = 0) {
    spec.check();
    const LatticeGrid& g = spec.grid;
    const std::size_t modes = g.size();
    if (!(u0_hat.grid == g) || !(u1_hat.grid == g) || (f_hat && !(f_hat->grid == g)))
        throw std::invalid_argument("solve_cauchy_spectral: spectral data does not share the grid");
    u0_hat.check();
    u1_hat.check();
    if (spec.forcing_g && !f_hat) throw std::invalid_argument("solve_cauchy_spectral: forcing requires spectral forcing coefficients");

    const int samples = spec.shared_sample_count();
    WaveSolution sol;
    sol.grid = g;
    sol.per_mode.resize(modes);
    sol.beta2.resize(modes);
    for (std::size_t idx = 0; idx < modes; ++idx) sol.beta2[idx] = beta_squared(g, g.theta(g.unravel(idx)));

    const cdouble zero{0.0, 0.0};
    const int nworkers = resolve_workers(workers);
    detail::chunked_parallel_for(
        modes, nworkers,
        [&](std::size_t idx) {
            const cdouble v0 = u0_hat.coeffs[idx];
            const cdouble v1 = u1_hat.coeffs[idx];
            const cdouble fc = (spec.forcing_g && f_hat) ? f_hat->coeffs[idx] : zero;
            if (v0 == zero && v1 == zero && fc == zero) {
                // the zero trajectory solves this mode exactly
                ModeTrajectory& traj = sol.per_mode[idx];
                traj.t.resize(static_cast<std::size_t>(samples) + 1);
                for (int i = 0; i <= samples; ++i) traj.t[static_cast<std::size_t>(i)] = spec.T * static_cast<double>(i) / samples;
                traj.v.assign(traj.t.size(), zero);
                traj.dv.assign(traj.t.size(), zero);
                return;
            }
            ModeProblem p;
            p.beta2 = sol.beta2[idx];
            p.a = spec.a;
            p.b = spec.b;
            p.v0 = v0;
            p.v1 = v1;
            p.T = spec.T;
            p.sample_override = samples;
            if (spec.forcing_g) {
                auto gt = spec.forcing_g;
                const cdouble coeff = fc;
                p.g = [gt, coeff](double t) { return gt(t) * coeff; };
            }
            sol.per_mode[idx] = integrate_mode(p, spec.ode_tol);
        },
        "solve_cauchy");

    sol.sample_times = sol.per_mode[0].t;
    sol.u.resize(sol.sample_times.size());
    sol.du.resize(sol.sample_times.size());
    for (std::size_t s = 0; s < sol.sample_times.size(); ++s) {
        SpectralField vs = SpectralField::zeros(g);
        SpectralField dvs = SpectralField::zeros(g);
        for (std::size_t idx = 0; idx < modes; ++idx) {
            vs.coeffs[idx] = sol.per_mode[idx].v[s];
            dvs.coeffs[idx] = sol.per_mode[idx].dv[s];
        }
        sol.u[s] = inverse_dft(vs);
        sol.du[s] = inverse_dft(dvs);
    }
    sol.u[0] = spec.u0;
    sol.du[0] = spec.u1;
    return sol;
}

/// Spectral solve from physical data: transform, integrate, transform back.
inline WaveSolution solve_cauchy(const CauchySpec& spec, int workers = 0) {
    spec.check();
    const SpectralField u0_hat = forward_dft(spec.u0);
    const SpectralField u1_hat = forward_dft(spec.u1);
    if (spec.forcing_g) {
        const SpectralField f_hat = forward_dft(spec.forcing_F);
        return solve_cauchy_spectral(spec, u0_hat, u1_hat, &f_hat, workers);
    }
    return solve_cauchy_spectral(spec, u0_hat, u1_hat, nullptr, workers);
}

/// Certificate factory for the profile's tagged regime. s (regimes 2/4) and
/// l (regime 3) fall back to the proof's canonical choices when zero.
inline EnergyCertificate regime_certificate(const CoefficientProfile& a, const CoefficientProfile& b, double T, double s = 0.0, int l = 0) {
    switch (a.case_tag) {
        case CoeffCase::Lip:
            return case1_certificate(a, b, T);
        case CoeffCase::HolderStrict:
            return case2_certificate(a, b, T, s > 0.0 ? s : 0.5);
        case CoeffCase::SmoothWeak:
            return case3_certificate(a, b, T, l > 0 ? l : a.l);
        case CoeffCase::HolderWeak:
            return case4_certificate(a, b, T, s > 0.0 ? s : (a.alpha + 2.0) / 4.0);
    }
    throw std::invalid_argument("regime_certificate: unknown coefficient case");
}

/// Per-mode certification against a caller-supplied base certificate. The
/// a-priori bounds cover the homogeneous problem only, so forced specs are
/// rejected.
inline std::vector<EnergyCertificate> certify_solution(WaveSolution& sol, const CauchySpec& spec, const EnergyCertificate& base, int workers = 0) {
    if (spec.forcing_g) throw std::invalid_argument("certify_solution: certificates cover the homogeneous problem only");
    if (sol.per_mode.size() != sol.grid.size()) throw std::invalid_argument("certify_solution: incomplete solution");
    std::vector<EnergyCertificate> certs(sol.per_mode.size());
    detail::chunked_parallel_for(
        sol.per_mode.size(), resolve_workers(workers),
        [&](std::size_t idx) {
            const ModeTrajectory& traj = sol.per_mode[idx];
            certs[idx] = certify_with_retry(base, sol.beta2[idx], traj, traj.v[0], traj.dv[0]);
        },
        "certify_solution");
    sol.certificates = certs;
    return certs;
}

/// Certification with the profile regime's own certificate.
inline std::vector<EnergyCertificate> certify_solution(WaveSolution& sol, const CauchySpec& spec, double s = 0.0, int l = 0, int workers = 0) {
    return certify_solution(sol, spec, regime_certificate(spec.a, spec.b, spec.T, s, l), workers);
}

/// Realized well-posedness constants of a finished solve.
struct WellposednessReport {
    std::vector<double> t;
    std::vector<double> lhs;         // ||u(t)||^2 + ||du(t)||^2, counting measure, per sample
    double rhs = 0.0;                // ||u0||^2 + ||u1||^2 + ||f||_{L2 l2}^2
    double realized_constant = 0.0;  // max_t lhs / rhs (0 for zero data)
    double op_norm_scale = 0.0;      // ||I - hbar^{-2} L|| = 1 + 4n/hbar^2
    double max_realized_ratio = 0.0; // worst certificate ratio, when certificates exist
    bool all_certificates_pass = true;
};

inline WellposednessReport wellposedness_report(const WaveSolution& sol, const CauchySpec& spec) {
    if (sol.per_mode.empty() || sol.sample_times.empty()) throw std::invalid_argument("wellposedness_report: incomplete solution");
    WellposednessReport rep;
    rep.t = sol.sample_times;
    rep.lhs.assign(sol.sample_times.size(), 0.0);
    const double inv_points = 1.0 / static_cast<double>(sol.grid.size());
    for (std::size_t s = 0; s < sol.sample_times.size(); ++s) {
        double acc = 0.0;
        for (const auto& traj : sol.per_mode) acc += std::norm(traj.v[s]) + std::norm(traj.dv[s]);
        rep.lhs[s] = acc * inv_points;  // Parseval: counting-measure l2 of the grid fields
    }
    rep.rhs = l2_sq(spec.u0) + l2_sq(spec.u1);
    if (spec.forcing_g) {
        // ||f||^2_{L2 l2} = int |g|^2 dt * ||F||^2, trapezoid on the sample grid
        double gsq = 0.0;
        for (std::size_t s = 0; s + 1 < sol.sample_times.size(); ++s) {
            const double h = sol.sample_times[s + 1] - sol.sample_times[s];
            const double g0 = spec.forcing_g(sol.sample_times[s]);
            const double g1 = spec.forcing_g(sol.sample_times[s + 1]);
            gsq += 0.5 * h * (g0 * g0 + g1 * g1);
        }
        rep.rhs += gsq * l2_sq(spec.forcing_F);
    }
    double worst = 0.0;
    for (double v : rep.lhs) worst = std::max(worst, v);
    rep.realized_constant = rep.rhs > 0.0 ? worst / rep.rhs : (worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.op_norm_scale = 1.0 + 4.0 * sol.grid.n / (sol.grid.hbar * sol.grid.hbar);
    if (!sol.certificates.empty()) {
        for (const auto& c : sol.certificates) {
            if (std::isfinite(c.realized_ratio)) rep.max_realized_ratio = std::max(rep.max_realized_ratio, c.realized_ratio);
            rep.all_certificates_pass = rep.all_certificates_pass && c.pass;
        }
    }
    return rep;
}

}  // namespace latwave
