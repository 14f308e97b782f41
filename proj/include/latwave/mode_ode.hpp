#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "latwave/coefficients.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

struct IntegratorStats {
    std::int64_t steps = 0;
    std::int64_t rejected = 0;
    double max_local_error = 0.0;
};

namespace detail {

template <std::size_t D>
using State = std::array<cdouble, D>;

template <std::size_t D>
double state_norm(const State<D>& y) {
    double s = 0.0;
    for (const auto& c : y) s += std::norm(c);
    return std::sqrt(s);
}

/// Embedded Dormand-Prince 5(4) pair with adaptive steps.  Accepts a step when
/// the embedded error estimate is <= tol*(1+|y|); the controller aims at a
/// quarter of that so accepted errors sit well inside the contract.  Steps are
/// clipped to the checkpoint times in `samples`, where `record` is invoked.
template <std::size_t D, class RHS, class Record>
IntegratorStats rk45_dense(RHS&& f, State<D> y, const std::vector<double>& samples, double tol, double h_max, Record&& record) {
    // Dormand-Prince coefficients
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // y5 - y4 weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    IntegratorStats stats;
    if (samples.empty()) return stats;
    const double t_begin = samples.front();
    const double t_end = samples.back();
    const double span = t_end - t_begin;
    record(0, y);

    double t = t_begin;
    double h_ctrl = std::min(h_max, span > 0.0 ? span / 16.0 : h_max);
    std::size_t next = 1;
    auto add = [](const State<D>& base, double hh, std::initializer_list<std::pair<double, const State<D>*>> terms) {
        State<D> r = base;
        for (const auto& [w, k] : terms)
            for (std::size_t i = 0; i < D; ++i) r[i] += hh * w * (*k)[i];
        return r;
    };
    while (next < samples.size()) {
        const double target = samples[next];
        const bool clipped = t + h_ctrl >= target;
        const double h = clipped ? target - t : h_ctrl;
        const State<D> k1 = f(t, y);
        const State<D> k2 = f(t + c2 * h, add(y, h, {{a21, &k1}}));
        const State<D> k3 = f(t + c3 * h, add(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<D> k4 = f(t + c4 * h, add(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<D> k5 = f(t + c5 * h, add(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<D> k6 = f(t + h, add(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<D> y5 = add(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<D> k7 = f(t + h, y5);
        State<D> err{};
        for (std::size_t i = 0; i < D; ++i) err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double err_norm = state_norm(err);
        const double y_norm = state_norm(y5);
        if (!std::isfinite(err_norm) || !std::isfinite(y_norm)) throw NumericalError("rk45: non-finite state encountered");
        const double scale = tol * (1.0 + y_norm);
        if (err_norm <= scale) {
            t += h;
            y = y5;
            ++stats.steps;
            stats.max_local_error = std::max(stats.max_local_error, err_norm);
            if (clipped) {
                record(next, y);
                ++next;
            }
            const double grow = err_norm > 0.0 ? 0.9 * std::pow(0.25 * scale / err_norm, 0.2) : 5.0;
            const double proposal = h * std::clamp(grow, 0.2, 5.0);
            // a clipped step says nothing against the controller's cruise size
            h_ctrl = std::min(h_max, clipped ? std::max(h_ctrl, proposal) : proposal);
        } else {
            ++stats.rejected;
            const double shrink = 0.9 * std::pow(0.25 * scale / err_norm, 0.2);
            h_ctrl = h * std::clamp(shrink, 0.1, 0.7);
            if (h_ctrl < 1e-14 * std::max(span, 1.0)) throw NumericalError("rk45: step size underflow (problem too stiff at this tolerance)");
        }
    }
    return stats;
}

}  // namespace detail

/// One Fourier mode of the wave equation:
///   v'' + beta2 * a(t) * v + b(t) * v = g(t),  v(0)=v0, v'(0)=v1.
struct ModeProblem {
    double beta2 = 0.0;
    CoefficientProfile a;
    CoefficientProfile b;
    std::function<cdouble(double)> g;  // null means homogeneous
    cdouble v0{0.0, 0.0};
    cdouble v1{0.0, 0.0};
    double T = 1.0;
    int sample_override = 0;  // > 0 pins the dense sample count (shared grids across modes)

    void check() const {
        a.check();
        b.check();
        if (!(beta2 >= 0.0) || !std::isfinite(beta2)) throw std::invalid_argument("ModeProblem: beta2 must be finite and >= 0");
        if (!(T > 0.0)) throw std::invalid_argument("ModeProblem: T must be positive");
        if (a.T < T || b.T < T) throw std::invalid_argument("ModeProblem: coefficient profiles do not cover [0,T]");
        if (b.a0 < 0.0) throw std::invalid_argument("ModeProblem: b must be nonnegative");
        if (!std::isfinite(v0.real()) || !std::isfinite(v0.imag()) || !std::isfinite(v1.real()) || !std::isfinite(v1.imag()))
            throw std::invalid_argument("ModeProblem: non-finite initial data");
    }

    /// Uniform sample count for dense output.
    int sample_count() const {
        if (sample_override > 0) return sample_override;
        const double omega = std::sqrt(std::max(0.0, beta2) * std::max(a.a1, 0.0) + std::max(b.a1, 0.0));
        return std::max(512, 8 * static_cast<int>(std::ceil(T * omega)));
    }

    /// Oscillation-aware cap on the integrator step.
    double step_cap() const {
        const double omega = std::sqrt(std::max(0.0, beta2) * std::max(a.a1, 0.0) + std::max(b.a1, 0.0));
        return 0.2 / (1.0 + omega);
    }
};

struct ModeTrajectory {
    std::vector<double> t;
    std::vector<cdouble> v;
    std::vector<cdouble> dv;
    IntegratorStats stats;
};

inline void check_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-3)) throw std::invalid_argument("tol must lie in [1e-13, 1e-3]");
}

/// Adaptive integration of one mode with dense uniform output.
/// traj.v[0] == v0 and traj.dv[0] == v1 exactly.
inline ModeTrajectory integrate_mode(const ModeProblem& p, double tol) {
    p.check();
    check_tol(tol);
    const int M = p.sample_count();
    ModeTrajectory traj;
    traj.t.resize(M + 1);
    traj.v.resize(M + 1);
    traj.dv.resize(M + 1);
    for (int i = 0; i <= M; ++i) traj.t[i] = p.T * static_cast<double>(i) / M;
    auto a = p.a.eval;
    auto b = p.b.eval;
    auto g = p.g;
    const double beta2 = p.beta2;
    auto rhs = [&](double t, const detail::State<2>& y) {
        detail::State<2> d;
        d[0] = y[1];
        d[1] = -(beta2 * a(t) + b(t)) * y[0] + (g ? g(t) : cdouble{0.0, 0.0});
        return d;
    };
    detail::State<2> y0{p.v0, p.v1};
    traj.stats = detail::rk45_dense<2>(rhs, y0, traj.t, tol, p.step_cap(), [&](std::size_t i, const detail::State<2>& y) {
        traj.v[i] = y[0];
        traj.dv[i] = y[1];
    });
    traj.v[0] = p.v0;
    traj.dv[0] = p.v1;
    return traj;
}

/// 2x2 complex matrix in row-major order (a11 a12 / a21 a22).
struct Mat2 {
    cdouble a11, a12, a21, a22;

    std::array<cdouble, 2> apply(const std::array<cdouble, 2>& x) const { return {a11 * x[0] + a12 * x[1], a21 * x[0] + a22 * x[1]}; }

    double op_norm() const {
        // largest singular value of a 2x2
        const double f = std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22);
        const cdouble det = a11 * a22 - a12 * a21;
        const double d = std::abs(det);
        const double rad = std::sqrt(std::max(0.0, f * f / 4.0 - d * d));
        return std::sqrt(f / 2.0 + rad);
    }
};

inline double sinc(double s) {
    if (std::abs(s) < 1e-4) {
        const double s2 = s * s;
        return 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
    }
    return std::sin(s) / s;
}

/// Frozen-coefficient propagator exp(i*Mtilde) with Mtilde = [[0, tau], [m, 0]]:
/// cos(sqrt(tau*m)) I + i*sinc(sqrt(tau*m)) * Mtilde.  Exact solution operator
/// for V = (i v, v') when beta2*a + b is constant with integral m over a lapse tau.
inline Mat2 constant_propagator(double m, double tau) {
    if (m < 0.0 || tau < 0.0) throw std::invalid_argument("constant_propagator: m and tau must be nonnegative");
    const double s = std::sqrt(tau * m);
    const double c = std::cos(s);
    const double sc = sinc(s);
    return Mat2{cdouble{c, 0.0}, cdouble{0.0, tau * sc}, cdouble{0.0, m * sc}, cdouble{c, 0.0}};
}

/// Constant used in the inhomogeneous energy comparison
///   |w|^2 + |w'|^2 <= C * (|v|^2 + |v'|^2 + (1+beta2)^2 ||g||_{L2}^2),
/// v the homogeneous solution with the same data.  From the propagator norm
/// 1 + T(1 + beta2*||a|| + ||b||) <= (1+beta2)(1 + T(1 + ||a|| + ||b||)) and
/// Cauchy-Schwarz in the Duhamel integral.
inline double corollary_constant(double a_sup, double b_sup, double T) {
    const double c_tilde = 1.0 + T * (1.0 + a_sup + b_sup);
    return 2.0 * std::max(1.0, c_tilde * c_tilde * T);
}

/// Variation-of-constants solve: fundamental system (y1, y2) of the homogeneous
/// equation plus quadrature of the forcing against it,
///   v = v0 y1 + v1 y2 + y2 I1 - y1 I2,  I1 = int y1 g, I2 = int y2 g
/// (Wronskian == 1 for this normalization).  Asserts the inhomogeneous energy
/// bound against the homogeneous solution it derives on the way.
inline ModeTrajectory duhamel_solve(const ModeProblem& p, double tol) {
    p.check();
    check_tol(tol);
    if (!p.g) return integrate_mode(p, tol);  // degenerates to the direct path
    const int M = p.sample_count();
    std::vector<double> times(M + 1);
    for (int i = 0; i <= M; ++i) times[i] = p.T * static_cast<double>(i) / M;
    auto a = p.a.eval;
    auto b = p.b.eval;
    auto g = p.g;
    const double beta2 = p.beta2;
    // Y = (y1, y1', y2, y2', I1, I2)
    auto rhs = [&](double t, const detail::State<6>& y) {
        const cdouble q{beta2 * a(t) + b(t), 0.0};
        const cdouble gv = g(t);
        detail::State<6> d;
        d[0] = y[1];
        d[1] = -q * y[0];
        d[2] = y[3];
        d[3] = -q * y[2];
        d[4] = y[0] * gv;
        d[5] = y[2] * gv;
        return d;
    };
    detail::State<6> y0{cdouble{1.0, 0.0}, cdouble{0.0, 0.0}, cdouble{0.0, 0.0}, cdouble{1.0, 0.0}, cdouble{0.0, 0.0}, cdouble{0.0, 0.0}};
    ModeTrajectory traj;
    traj.t = times;
    traj.v.resize(M + 1);
    traj.dv.resize(M + 1);
    std::vector<std::array<cdouble, 4>> fundamental(M + 1);
    std::vector<cdouble> hom_v(M + 1), hom_dv(M + 1);
    traj.stats = detail::rk45_dense<6>(rhs, y0, times, 0.1 * tol, p.step_cap(), [&](std::size_t i, const detail::State<6>& y) {
        traj.v[i] = p.v0 * y[0] + p.v1 * y[2] + y[2] * y[4] - y[0] * y[5];
        traj.dv[i] = p.v0 * y[1] + p.v1 * y[3] + y[3] * y[4] - y[1] * y[5];
        fundamental[i] = {y[0], y[1], y[2], y[3]};
        hom_v[i] = p.v0 * y[0] + p.v1 * y[2];
        hom_dv[i] = p.v0 * y[1] + p.v1 * y[3];
    });
    traj.v[0] = p.v0;
    traj.dv[0] = p.v1;
    // inhomogeneous energy bound audit (Simpson mass of |g|^2)
    double g_l2sq = 0.0;
    for (int i = 0; i < M; i += 2) {
        const double h = times[i + 1] - times[i];
        g_l2sq += h / 3.0 * (std::norm(g(times[i])) + 4.0 * std::norm(g(times[i + 1])) + std::norm(g(times[i + 2])));
    }
    const double c_cor = corollary_constant(p.a.a1, p.b.a1, p.T);
    const double forcing_term = (1.0 + beta2) * (1.0 + beta2) * g_l2sq;
    for (int i = 0; i <= M; ++i) {
        const double lhs = std::norm(traj.v[i]) + std::norm(traj.dv[i]);
        const double rhs_bound = c_cor * (std::norm(hom_v[i]) + std::norm(hom_dv[i]) + forcing_term);
        if (lhs > rhs_bound * (1.0 + 1e-9))
            throw NumericalError("duhamel_solve: inhomogeneous energy bound violated");
    }
    return traj;
}

}  // namespace latwave
