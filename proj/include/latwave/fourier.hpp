#pragma once

#include <cmath>
#include <numbers>

#include "latwave/fft.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Forward transform, unnormalized:
///   coeffs[m] = sum_j field[j] * exp(-2*pi*i j.m / N).
inline SpectralField forward_dft(const GridField& field) {
    field.check();
    SpectralField out{field.grid, field.values};
    detail::fft_nd(out.coeffs, field.grid.n, static_cast<std::size_t>(field.grid.N), -1);
    return out;
}

/// Inverse transform with the 1/N^n normalization:
///   values[j] = N^{-n} sum_m coeffs[m] * exp(+2*pi*i j.m / N).
inline GridField inverse_dft(const SpectralField& spec) {
    spec.check();
    GridField out{spec.grid, spec.coeffs};
    detail::fft_nd(out.values, spec.grid.n, static_cast<std::size_t>(spec.grid.N), +1);
    const double scale = 1.0 / static_cast<double>(spec.grid.size());
    for (auto& v : out.values) v *= scale;
    return out;
}

/// Symbol of the lattice Laplacian at frequency theta:
///   sigma(theta) = 2 sum_j cos(2 pi theta_j) - 2n, in [-4n, 0].
/// Evaluated as -4 sum_j sin^2(pi theta_j) for accuracy near theta = 0.
inline double laplacian_symbol(const LatticeGrid& grid, const std::array<double, 3>& theta) {
    double s = 0.0;
    for (int axis = 0; axis < grid.n; ++axis) {
        const double sn = std::sin(std::numbers::pi * theta[axis]);
        s += sn * sn;
    }
    return -4.0 * s;
}

/// beta^2(theta) = -hbar^{-2} * sigma(theta)  in [0, 4n/hbar^2].
inline double beta_squared(const LatticeGrid& grid, const std::array<double, 3>& theta) {
    return -laplacian_symbol(grid, theta) / (grid.hbar * grid.hbar);
}

/// Nearest-neighbor stencil L_h u(k) = sum_j (u(k+h e_j) + u(k-h e_j)) - 2n u(k),
/// periodic in every axis. No transform involved.
inline GridField apply_lattice_laplacian(const GridField& field) {
    field.check();
    const LatticeGrid& g = field.grid;
    GridField out = GridField::zeros(g);
    const std::size_t total = g.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
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

/// Fourier multiplier: out = inverse_dft( sigma(theta_m) * forward_dft(field) ).
/// The symbol callable receives theta as array<double,3> (axes beyond n are 0).
template <class SymbolFn>
GridField apply_symbol_op(const GridField& field, SymbolFn&& symbol) {
    SpectralField spec = forward_dft(field);
    const LatticeGrid& g = field.grid;
    for (std::size_t idx = 0; idx < spec.coeffs.size(); ++idx) {
        const double s = symbol(g.theta(g.unravel(idx)));
        if (!std::isfinite(s)) throw std::domain_error("apply_symbol_op: symbol non-finite at a grid frequency");
        spec.coeffs[idx] *= s;
    }
    return inverse_dft(spec);
}

/// | sum_k |u(k)|^2 - N^{-n} sum_m |u_hat(m)|^2 |  (Parseval residual, counting measure).
inline double plancherel_defect(const GridField& field) {
    const double phys = l2_sq(field);
    const SpectralField spec = forward_dft(field);
    const double freq = l2_sq(spec) / static_cast<double>(field.grid.size());
    return std::abs(phys - freq);
}

}  // namespace latwave
