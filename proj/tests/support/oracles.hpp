#pragma once

// Reference implementations used only to validate the library: brute-force
// transforms, fixed-step physical-space integration, closed-form solutions.
// Everything here is deliberately independent of the code paths under test.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "latwave/lattice.hpp"

namespace oracles {

using latwave::cdouble;
using latwave::GridField;
using latwave::LatticeGrid;
using latwave::SpectralField;

/// Direct double-sum DFT, long double accumulation. O(N^{2n}).
inline SpectralField brute_forward_dft(const GridField& field) {
    const LatticeGrid& g = field.grid;
    SpectralField out = SpectralField::zeros(g);
    const std::size_t total = g.size();
    for (std::size_t mi = 0; mi < total; ++mi) {
        const auto m = g.unravel(mi);
        long double re = 0.0L, im = 0.0L;
        for (std::size_t ji = 0; ji < total; ++ji) {
            const auto j = g.unravel(ji);
            long double phase = 0.0L;
            for (int axis = 0; axis < g.n; ++axis) phase += static_cast<long double>(j[axis]) * m[axis];
            const long double ang = -2.0L * std::numbers::pi_v<long double> * phase / g.N;
            const long double c = std::cos(ang), s = std::sin(ang);
            re += field.values[ji].real() * c - field.values[ji].imag() * s;
            im += field.values[ji].real() * s + field.values[ji].imag() * c;
        }
        out.coeffs[mi] = cdouble{static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

inline GridField random_field(const LatticeGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridField f = GridField::zeros(g);
    for (auto& v : f.values) v = cdouble{dist(rng), dist(rng)};
    return f;
}

inline double rel_error(const std::vector<cdouble>& got, const std::vector<cdouble>& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += std::norm(got[i] - want[i]);
        den += std::norm(want[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Nearest-neighbor Laplacian applied pointwise; duplicated here on purpose so
/// the method-of-lines route never touches the library's stencil or transforms.
inline GridField brute_stencil(const GridField& field) {
    const LatticeGrid& g = field.grid;
    GridField out = GridField::zeros(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const auto m = g.unravel(idx);
        cdouble acc = -2.0 * static_cast<double>(g.n) * field.values[idx];
        for (int axis = 0; axis < g.n; ++axis) {
            auto nb = m;
            nb[axis] = (m[axis] + 1) % g.N;
            acc += field.values[g.ravel(nb)];
            nb[axis] = (m[axis] + g.N - 1) % g.N;
            acc += field.values[g.ravel(nb)];
        }
        out.values[idx] = acc;
    }
    return out;
}

/// Fixed-step classical RK4 on the physical-space system
///   u' = w,  w' = hbar^{-2} a(t) (stencil u) - b(t) u + g(t) F,
/// no transforms anywhere. Returns (u(T), u'(T)).
template <class AFn, class BFn>
std::pair<GridField, GridField> stencil_mol_rk4(GridField u, GridField w, AFn&& a, BFn&& b, double T, int steps,
                                                const std::function<double(double)>& gt = nullptr, const GridField* F = nullptr) {
    const LatticeGrid& g = u.grid;
    const double inv_h2 = 1.0 / (g.hbar * g.hbar);
    const std::size_t total = g.size();
    auto accel = [&](double t, const GridField& uu) {
        GridField lap = brute_stencil(uu);
        const double at = a(t) * inv_h2;
        const double bt = b(t);
        const double gv = gt ? gt(t) : 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            lap.values[i] = at * lap.values[i] - bt * uu.values[i];
            if (F) lap.values[i] += gv * F->values[i];
        }
        return lap;
    };
    const double h = T / steps;
    for (int s = 0; s < steps; ++s) {
        const double t = h * s;
        GridField k1u = w, k1w = accel(t, u);
        GridField u2 = u, w2 = w;
        for (std::size_t i = 0; i < total; ++i) {
            u2.values[i] += 0.5 * h * k1u.values[i];
            w2.values[i] += 0.5 * h * k1w.values[i];
        }
        GridField k2u = w2, k2w = accel(t + 0.5 * h, u2);
        GridField u3 = u, w3 = w;
        for (std::size_t i = 0; i < total; ++i) {
            u3.values[i] += 0.5 * h * k2u.values[i];
            w3.values[i] += 0.5 * h * k2w.values[i];
        }
        GridField k3u = w3, k3w = accel(t + 0.5 * h, u3);
        GridField u4 = u, w4 = w;
        for (std::size_t i = 0; i < total; ++i) {
            u4.values[i] += h * k3u.values[i];
            w4.values[i] += h * k3w.values[i];
        }
        GridField k4u = w4, k4w = accel(t + h, u4);
        for (std::size_t i = 0; i < total; ++i) {
            u.values[i] += h / 6.0 * (k1u.values[i] + 2.0 * k2u.values[i] + 2.0 * k3u.values[i] + k4u.values[i]);
            w.values[i] += h / 6.0 * (k1w.values[i] + 2.0 * k2w.values[i] + 2.0 * k3w.values[i] + k4w.values[i]);
        }
    }
    return {u, w};
}

}  // namespace oracles
