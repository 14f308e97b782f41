#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace latwave {

/// Regularity regime of a time coefficient on [0, T]:
///   Lip          - Lipschitz, strictly positive
///   HolderStrict - C^alpha, 0 < alpha < 1, strictly positive
///   SmoothWeak   - C^l, l >= 2, may vanish
///   HolderWeak   - C^alpha, 0 < alpha < 2, may vanish
enum class CoeffCase { Lip, HolderStrict, SmoothWeak, HolderWeak };

inline const char* to_string(CoeffCase c) {
    switch (c) {
        case CoeffCase::Lip: return "Lip";
        case CoeffCase::HolderStrict: return "HolderStrict";
        case CoeffCase::SmoothWeak: return "SmoothWeak";
        case CoeffCase::HolderWeak: return "HolderWeak";
    }
    return "?";
}

/// A time-dependent coefficient together with the analytic data the energy
/// certificates consume. inf/sup and seminorms refer to [0, T].
struct CoefficientProfile {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;  // null when no classical derivative is supplied
    CoeffCase case_tag = CoeffCase::Lip;
    double T = 1.0;

    double a0 = 0.0;  // inf over [0, T]
    double a1 = 0.0;  // sup over [0, T]

    double alpha = 0.0;            // Holder exponent (HolderStrict / HolderWeak)
    double holder_seminorm = 0.0;  // |a|_{C^alpha}
    bool seminorm_analytic = false;

    int l = 0;             // smoothness order (SmoothWeak)
    double cl_norm = 0.0;  // ||a||_{C^l} = max_{0<=j<=l} sup |a^(j)|

    double deriv_sup = std::numeric_limits<double>::quiet_NaN();  // ||a'||_inf when analytic

    double operator()(double t) const { return eval(t); }

    void check() const {
        if (!eval) throw std::invalid_argument("CoefficientProfile: eval is empty");
        if (!(T > 0.0)) throw std::invalid_argument("CoefficientProfile: T must be positive");
        if (a1 < a0) throw std::invalid_argument("CoefficientProfile: sup < inf");
        if (case_tag == CoeffCase::Lip || case_tag == CoeffCase::HolderStrict) {
            if (!(a0 > 0.0)) throw std::invalid_argument(std::string("CoefficientProfile: case ") + to_string(case_tag) + " requires inf a > 0");
        } else {
            if (a0 < -1e-12) throw std::invalid_argument(std::string("CoefficientProfile: case ") + to_string(case_tag) + " requires a >= 0");
        }
        if (case_tag == CoeffCase::HolderStrict && !(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("CoefficientProfile: HolderStrict requires alpha in (0,1)");
        if (case_tag == CoeffCase::HolderWeak && !(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("CoefficientProfile: HolderWeak requires alpha in (0,2)");
        if (case_tag == CoeffCase::SmoothWeak && l < 2) throw std::invalid_argument("CoefficientProfile: SmoothWeak requires l >= 2");
    }
};

/// Lipschitz building blocks. kind:
///   "constant": a(t) = c0
///   "linear":   a(t) = c0 + c1*t
///   "abs_sin":  a(t) = c0 + c1*|sin(omega*t)|
/// Supplied Lipschitz data is exact for all three.
inline CoefficientProfile make_lipschitz(const std::string& kind, double c0, double c1, double omega, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("make_lipschitz: T must be positive");
    CoefficientProfile p;
    p.case_tag = CoeffCase::Lip;
    p.T = T;
    if (kind == "constant") {
        p.eval = [c0](double) { return c0; };
        p.deriv = [](double) { return 0.0; };
        p.a0 = p.a1 = c0;
        p.deriv_sup = 0.0;
    } else if (kind == "linear") {
        p.eval = [c0, c1](double t) { return c0 + c1 * t; };
        p.deriv = [c1](double) { return c1; };
        p.a0 = std::min(c0, c0 + c1 * T);
        p.a1 = std::max(c0, c0 + c1 * T);
        p.deriv_sup = std::abs(c1);
    } else if (kind == "abs_sin") {
        p.eval = [c0, c1, omega](double t) { return c0 + c1 * std::abs(std::sin(omega * t)); };
        p.deriv = nullptr;  // kinks at sin(omega t) = 0
        // |sin| on [0,T]: min 0 at t=0, max 1 once |omega| T >= pi/2
        const double smax = (std::abs(omega) * T >= std::numbers::pi / 2.0) ? 1.0 : std::abs(std::sin(omega * T));
        p.a0 = std::min(c0, c0 + c1 * smax);
        p.a1 = std::max(c0, c0 + c1 * smax);
        p.deriv_sup = std::abs(c1 * omega);
    } else {
        throw std::invalid_argument("make_lipschitz: unknown kind '" + kind + "'");
    }
    p.holder_seminorm = p.deriv_sup;  // alpha = 1 seminorm
    p.seminorm_analytic = true;
    p.alpha = 1.0;
    if (!(p.a0 > 0.0)) throw std::invalid_argument("make_lipschitz: profile must stay strictly positive on [0,T]");
    return p;
}

namespace detail {

/// min over [0,T] of a callable: dense scan + local ternary refinement.
template <class F>
double refined_min(F&& f, double T, int scan_points = 1 << 16) {
    double best = std::numeric_limits<double>::infinity();
    double tbest = 0.0;
    for (int i = 0; i <= scan_points; ++i) {
        const double t = T * static_cast<double>(i) / scan_points;
        const double v = f(t);
        if (v < best) {
            best = v;
            tbest = t;
        }
    }
    double lo = std::max(0.0, tbest - T / scan_points);
    double hi = std::min(T, tbest + T / scan_points);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::min(best, f(0.5 * (lo + hi)));
}

}  // namespace detail

/// Weierstrass-type Holder coefficient:
///   a(t) = floor + sum_{j=0..depth} 2^{-alpha j} cos(2^j t) - min of the sum on [0,T],
/// so min a = floor. Holder-alpha seminorm supplied analytically as
/// 2^{1-alpha} (depth+1)  (termwise |cos(lambda .)|_{C^alpha} <= 2^{1-alpha} lambda^alpha).
inline CoefficientProfile make_weierstrass(double alpha, int depth, double floor, double T) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("make_weierstrass: alpha must be in (0,1)");
    if (depth < 0 || depth > 40) throw std::invalid_argument("make_weierstrass: depth out of range");
    if (floor < 0.0) throw std::invalid_argument("make_weierstrass: floor must be >= 0");
    if (!(T > 0.0)) throw std::invalid_argument("make_weierstrass: T must be positive");
    auto series = [alpha, depth](double t) {
        double s = 0.0;
        for (int j = 0; j <= depth; ++j) s += std::pow(2.0, -alpha * j) * std::cos(std::ldexp(t, j));
        return s;
    };
    const double offset = detail::refined_min(series, T) - floor;
    const double seminorm = std::pow(2.0, 1.0 - alpha) * (depth + 1);
    double smax = -std::numeric_limits<double>::infinity();
    const int pts = 1 << 16;
    for (int i = 0; i <= pts; ++i) smax = std::max(smax, series(T * i / pts));
    CoefficientProfile p;
    p.case_tag = floor > 0.0 ? CoeffCase::HolderStrict : CoeffCase::HolderWeak;
    p.T = T;
    p.alpha = alpha;
    // clamping at floor absorbs sub-grid dips below the refined minimum; max(f,c)
    // never enlarges a Holder seminorm, so the supplied bound stays valid
    p.eval = [series, offset, floor](double t) { return std::max(series(t) - offset, floor); };
    p.deriv = nullptr;
    p.a0 = floor;
    // pad the scanned sup by the Holder modulus over half a scan cell: valid upper bound
    p.a1 = smax - offset + seminorm * std::pow(T / pts / 2.0, alpha);
    p.holder_seminorm = seminorm;
    p.seminorm_analytic = true;
    return p;
}

/// Degenerate smooth coefficient a(t) = (t - T/2)^{2m}, vanishing at T/2.
/// C^l norm supplied analytically: max_{0<=j<=min(l,2m)} (2m)_j (T/2)^{2m-j}.
inline CoefficientProfile make_degenerate_smooth(int m, int l, double T) {
    if (m < 1) throw std::invalid_argument("make_degenerate_smooth: m must be >= 1");
    if (l < 2) throw std::invalid_argument("make_degenerate_smooth: l must be >= 2");
    if (!(T > 0.0)) throw std::invalid_argument("make_degenerate_smooth: T must be positive");
    const double half = T / 2.0;
    const int p2m = 2 * m;
    CoefficientProfile p;
    p.case_tag = CoeffCase::SmoothWeak;
    p.T = T;
    p.l = l;
    p.eval = [half, p2m](double t) { return std::pow(t - half, p2m); };
    p.deriv = [half, p2m](double t) { return p2m * std::pow(t - half, p2m - 1); };
    p.a0 = 0.0;
    p.a1 = std::pow(half, p2m);
    double cl = 0.0;
    double falling = 1.0;
    for (int j = 0; j <= std::min(l, p2m); ++j) {
        cl = std::max(cl, falling * std::pow(half, p2m - j));
        falling *= (p2m - j);
    }
    p.cl_norm = cl;
    p.deriv_sup = p2m * std::pow(half, p2m - 1);
    return p;
}

/// Lower estimate of the C^alpha seminorm: max over sampled pairs separated by
/// dyadic gaps delta = T/2^j of |a(t+delta)-a(t)| / delta^alpha. Sampling is
/// nested (doubling points never drops a pair), so the estimate is monotone
/// non-decreasing in points. Analytic seminorms, when supplied, stay
/// authoritative; this estimator only ever under-approximates.
inline double holder_seminorm_estimate(const CoefficientProfile& profile, double alpha, int points) {
    if (!(alpha > 0.0)) throw std::invalid_argument("holder_seminorm_estimate: alpha must be positive");
    if (points < 2) throw std::invalid_argument("holder_seminorm_estimate: points must be >= 2");
    const double T = profile.T;
    int levels = 0;
    while ((1 << (levels + 1)) <= points) ++levels;
    double best = 0.0;
    for (int j = 0; j <= levels; ++j) {
        const double delta = T / std::pow(2.0, j);
        const double span = T - delta;
        if (span < 0.0) continue;
        const double denom = std::pow(delta, alpha);
        for (int i = 0; i < points; ++i) {
            const double t = span * static_cast<double>(i) / points;
            best = std::max(best, std::abs(profile.eval(t + delta) - profile.eval(t)) / denom);
        }
    }
    return best;
}

}  // namespace latwave
