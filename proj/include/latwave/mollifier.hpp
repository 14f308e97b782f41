#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "latwave/coefficients.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Compactly supported bump phi(x) = c * exp(-1/(1-x^2)) on (-1,1), integrated
/// with a fixed 64-node Gauss-Legendre rule. c is chosen so the *quadrature*
/// mass is exactly 1; mollifying a constant then reproduces it to roundoff.
class Mollifier {
  public:
    static constexpr int kNodes = 64;

    static const Mollifier& standard() {
        static const Mollifier m;
        return m;
    }

    /// Normalized bump (0 outside (-1,1)).
    double phi(double x) const { return std::abs(x) < 1.0 ? norm_ * raw(x) : 0.0; }

    /// phi'(x) = phi(x) * (-2x/(1-x^2)^2).
    double phi_prime(double x) const {
        if (std::abs(x) >= 1.0) return 0.0;
        const double d = 1.0 - x * x;
        return phi(x) * (-2.0 * x / (d * d));
    }

    /// Quadrature of f over [-1,1].
    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (int i = 0; i < kNodes; ++i) s += weights_[i] * f(nodes_[i]);
        return s;
    }

    /// Quadrature of f against the normalized bump: sum w_i phi(x_i) f(x_i).
    template <class F>
    double integrate_against(F&& f) const {
        double s = 0.0;
        for (int i = 0; i < kNodes; ++i) s += bump_weights_[i] * f(nodes_[i]);
        return s;
    }

    const std::array<double, kNodes>& nodes() const { return nodes_; }
    const std::array<double, kNodes>& weights() const { return weights_; }

  private:
    Mollifier() {
        gauss_legendre(nodes_, weights_);
        double mass = 0.0;
        for (int i = 0; i < kNodes; ++i) mass += weights_[i] * raw(nodes_[i]);
        norm_ = 1.0 / mass;
        for (int i = 0; i < kNodes; ++i) bump_weights_[i] = weights_[i] * norm_ * raw(nodes_[i]);
    }

    static double raw(double x) { return std::exp(-1.0 / (1.0 - x * x)); }

    // Newton iteration on P_n from Chebyshev-like initial guesses.
    static void gauss_legendre(std::array<double, kNodes>& x, std::array<double, kNodes>& w) {
        const int n = kNodes;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                const double dx = p1 / pp;
                xi -= dx;
                if (std::abs(dx) < 1e-15) {
                    p0 = 1.0;
                    p1 = xi;
                    for (int k = 2; k <= n; ++k) {
                        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                    break;
                }
            }
            x[i] = -xi;
            x[n - 1 - i] = xi;
            const double wi = 2.0 / ((1.0 - xi * xi) * pp * pp);
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
    }

    std::array<double, kNodes> nodes_{};
    std::array<double, kNodes> weights_{};
    std::array<double, kNodes> bump_weights_{};
    double norm_ = 1.0;
};

namespace detail {

/// Even-reflection extension: fold t into [0,T] by reflecting at both ends.
inline double reflect_into(double t, double T) {
    double s = std::fmod(t, 2.0 * T);
    if (s < 0.0) s += 2.0 * T;
    return s > T ? 2.0 * T - s : s;
}

}  // namespace detail

/// (a * phi_eps)(t) = int a(t - eps x) phi(x) dx, a extended by even reflection.
/// Returns a callable valid on [0, T].
inline std::function<double(double)> mollify(const CoefficientProfile& profile, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("mollify: eps must lie in (0,1]");
    profile.check();
    const double T = profile.T;
    auto a = profile.eval;
    const Mollifier& m = Mollifier::standard();
    return [a, eps, T, &m](double t) {
        return m.integrate_against([&](double x) { return a(detail::reflect_into(t - eps * x, T)); });
    };
}

/// Regularized characteristic roots built from the mollified sqrt(a):
///   unshifted: lam1 = -(sqrt(a)*phi_eps), lam2 = +(sqrt(a)*phi_eps)
///   shifted:   lam1 = -(sqrt(a)*phi_eps) + eps^alpha, lam2 = +(sqrt(a)*phi_eps) + 2 eps^alpha
/// where alpha is the Holder order of sqrt(a) (supplied by the caller).
struct RegularizedEigenvalues {
    std::function<double(double)> lam1;
    std::function<double(double)> lam2;
    double eps = 1.0;
    bool shifted = false;
    double shift_alpha = 0.0;  // Holder order of sqrt(a); 0 when unshifted
    double det_lower = 0.0;    // analytic lower bound on lam2-lam1

    double det(double t) const { return lam2(t) - lam1(t); }
};

inline RegularizedEigenvalues regularized_eigenvalues(const CoefficientProfile& profile, double eps, bool shifted, double shift_alpha = 0.0) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("regularized_eigenvalues: eps must lie in (0,1]");
    profile.check();
    if (shifted && !(shift_alpha > 0.0 && shift_alpha < 1.0)) throw std::invalid_argument("regularized_eigenvalues: shifted form needs the sqrt(a) Holder order in (0,1)");
    if (!shifted && !(profile.a0 > 0.0)) throw std::invalid_argument("regularized_eigenvalues: unshifted form requires inf a > 0");
    const double T = profile.T;
    auto a = profile.eval;
    const Mollifier& m = Mollifier::standard();
    auto sqrt_mollified = [a, eps, T, &m](double t) {
        return m.integrate_against([&](double x) {
            const double v = a(detail::reflect_into(t - eps * x, T));
            if (v < -1e-12) throw NumericalError("regularized_eigenvalues: coefficient negative beyond tolerance");
            return std::sqrt(std::max(v, 0.0));
        });
    };
    RegularizedEigenvalues r;
    r.eps = eps;
    r.shifted = shifted;
    r.shift_alpha = shifted ? shift_alpha : 0.0;
    if (shifted) {
        const double shift = std::pow(eps, shift_alpha);
        r.lam1 = [sqrt_mollified, shift](double t) { return -sqrt_mollified(t) + shift; };
        r.lam2 = [sqrt_mollified, shift](double t) { return sqrt_mollified(t) + 2.0 * shift; };
        r.det_lower = shift;
    } else {
        r.lam1 = [sqrt_mollified](double t) { return -sqrt_mollified(t); };
        r.lam2 = [sqrt_mollified](double t) { return sqrt_mollified(t); };
        r.det_lower = 2.0 * std::sqrt(profile.a0);
    }
    return r;
}

}  // namespace latwave
