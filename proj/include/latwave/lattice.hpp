#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace latwave {

using cdouble = std::complex<double>;

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Periodic lattice hbar*Z^n truncated to N points per axis (period L = N*hbar).
/// Lattice sites are k = hbar*m, m in {0..N-1}^n; grid frequencies are
/// theta_m = m/N in the unit torus.
struct LatticeGrid {
    int n = 1;
    int N = 2;
    double hbar = 1.0;
    double L = 2.0;

    static constexpr std::size_t kMaxPoints = std::size_t{1} << 26;

    static LatticeGrid make(int n, int N, double hbar) {
        if (n < 1 || n > 3) throw std::invalid_argument("LatticeGrid: n must be in {1,2,3}, got " + std::to_string(n));
        if (N < 2 || N % 2 != 0) throw std::invalid_argument("LatticeGrid: N must be even and >= 2, got " + std::to_string(N));
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("LatticeGrid: hbar must be positive and finite");
        double count = std::pow(static_cast<double>(N), n);
        if (count > static_cast<double>(kMaxPoints)) throw std::invalid_argument("LatticeGrid: N^n exceeds the supported point budget");
        LatticeGrid g;
        g.n = n;
        g.N = N;
        g.hbar = hbar;
        g.L = N * hbar;
        return g;
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(N);
        return s;
    }

    // linear index <-> multi-index, axis 0 fastest
    std::array<int, 3> unravel(std::size_t idx) const {
        std::array<int, 3> m{0, 0, 0};
        for (int axis = 0; axis < n; ++axis) {
            m[axis] = static_cast<int>(idx % static_cast<std::size_t>(N));
            idx /= static_cast<std::size_t>(N);
        }
        return m;
    }

    std::size_t ravel(const std::array<int, 3>& m) const {
        std::size_t idx = 0;
        for (int axis = n - 1; axis >= 0; --axis) idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(m[axis]);
        return idx;
    }

    /// Frequency of mode m: theta_j = m_j/N componentwise.
    std::array<double, 3> theta(const std::array<int, 3>& m) const {
        std::array<double, 3> t{0.0, 0.0, 0.0};
        for (int axis = 0; axis < n; ++axis) t[axis] = static_cast<double>(m[axis]) / N;
        return t;
    }

    /// Signed mode numbers: m_j mapped to (-N/2, N/2].
    std::array<int, 3> signed_mode(const std::array<int, 3>& m) const {
        std::array<int, 3> s{0, 0, 0};
        for (int axis = 0; axis < n; ++axis) s[axis] = (m[axis] > N / 2) ? m[axis] - N : m[axis];
        return s;
    }

    bool operator==(const LatticeGrid& o) const { return n == o.n && N == o.N && hbar == o.hbar; }
};

/// Complex samples u(hbar*m) on the grid, linear row-major storage.
struct GridField {
    LatticeGrid grid;
    std::vector<cdouble> values;

    static GridField zeros(const LatticeGrid& g) { return GridField{g, std::vector<cdouble>(g.size(), cdouble{0.0, 0.0})}; }

    void check() const {
        if (values.size() != grid.size()) throw std::invalid_argument("GridField: value count does not match grid");
        for (const auto& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("GridField: non-finite entry");
    }
};

/// Unnormalized Fourier coefficients indexed like the grid (theta_m = m/N).
struct SpectralField {
    LatticeGrid grid;
    std::vector<cdouble> coeffs;

    static SpectralField zeros(const LatticeGrid& g) { return SpectralField{g, std::vector<cdouble>(g.size(), cdouble{0.0, 0.0})}; }

    void check() const {
        if (coeffs.size() != grid.size()) throw std::invalid_argument("SpectralField: coefficient count does not match grid");
        for (const auto& v : coeffs)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("SpectralField: non-finite entry");
    }
};

inline double l2_sq(const GridField& u) {
    double s = 0.0;
    for (const auto& v : u.values) s += std::norm(v);
    return s;
}

inline double l2_sq(const SpectralField& u) {
    double s = 0.0;
    for (const auto& v : u.coeffs) s += std::norm(v);
    return s;
}

}  // namespace latwave
