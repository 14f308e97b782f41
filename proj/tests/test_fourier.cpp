#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "latwave/fourier.hpp"
#include "support/oracles.hpp"

using namespace latwave;
using oracles::brute_forward_dft;
using oracles::random_field;
using oracles::rel_error;

namespace {
constexpr double kRoundTripTol = 1e-12;
constexpr double kPlancherelTol = 1e-12;
constexpr double kStencilTol = 1e-11;
}  // namespace

TEST_CASE("forward_dft of a delta is flat", "[fourier]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    GridField u = GridField::zeros(g);
    u.values[0] = 1.0;
    auto spec = forward_dft(u);
    for (const auto& c : spec.coeffs) {
        CHECK(std::abs(c - cdouble{1.0, 0.0}) < 1e-14);
    }
}

TEST_CASE("forward_dft of a constant concentrates at zero", "[fourier]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    GridField u = GridField::zeros(g);
    for (auto& v : u.values) v = 1.0;
    auto spec = forward_dft(u);
    CHECK(std::abs(spec.coeffs[0] - cdouble{8.0, 0.0}) < 1e-13);
    for (std::size_t m = 1; m < 8; ++m) CHECK(std::abs(spec.coeffs[m]) < 1e-13);
}

TEST_CASE("forward_dft matches the direct double sum in 2D", "[fourier]") {
    auto g = LatticeGrid::make(2, 8, 0.25);
    GridField u = random_field(g, 20260816u);
    auto fast = forward_dft(u);
    auto slow = brute_forward_dft(u);
    CHECK(rel_error(fast.coeffs, slow.coeffs) < 1e-12);
}

TEST_CASE("inverse_dft of a one-hot spectrum is a normalized exponential", "[fourier]") {
    auto g = LatticeGrid::make(1, 4, 1.0);
    SpectralField spec = SpectralField::zeros(g);
    spec.coeffs[1] = 1.0;
    auto u = inverse_dft(spec);
    for (int j = 0; j < 4; ++j) {
        const cdouble want = 0.25 * std::polar(1.0, 2.0 * std::numbers::pi * j / 4.0);
        CHECK(std::abs(u.values[j] - want) < 1e-14);
    }
}

TEST_CASE("round trip inverse(forward) is the identity", "[fourier]") {
    for (int n = 1; n <= 3; ++n) {
        for (int N : {4, 8}) {
            auto g = LatticeGrid::make(n, N, 0.3);
            GridField u = random_field(g, 7u * n + N);
            auto back = inverse_dft(forward_dft(u));
            CAPTURE(n, N);
            CHECK(rel_error(back.values, u.values) < kRoundTripTol);
        }
    }
}

TEST_CASE("round trip survives non-power-of-two sizes", "[fourier]") {
    auto g = LatticeGrid::make(1, 6, 0.5);
    GridField u = random_field(g, 99u);
    auto back = inverse_dft(forward_dft(u));
    CHECK(rel_error(back.values, u.values) < kRoundTripTol);
    auto slow = brute_forward_dft(u);
    CHECK(rel_error(forward_dft(u).coeffs, slow.coeffs) < 1e-12);
}

TEST_CASE("plancherel defect stays at rounding level", "[fourier]") {
    for (int n : {1, 2}) {
        for (int N : {8, 16}) {
            auto g = LatticeGrid::make(n, N, 0.1);
            GridField u = random_field(g, 1000u + 10u * n + N);
            CHECK(plancherel_defect(u) <= kPlancherelTol * l2_sq(u));
        }
    }
}

TEST_CASE("laplacian symbol endpoints", "[fourier]") {
    auto g1 = LatticeGrid::make(1, 8, 1.0);
    CHECK(laplacian_symbol(g1, {0.0, 0.0, 0.0}) == 0.0);
    CHECK(laplacian_symbol(g1, {0.5, 0.0, 0.0}) == Catch::Approx(-4.0).margin(1e-14));
    auto g2 = LatticeGrid::make(2, 8, 1.0);
    CHECK(laplacian_symbol(g2, {0.5, 0.5, 0.0}) == Catch::Approx(-8.0).margin(1e-14));
    // range check on the full grid
    for (std::size_t idx = 0; idx < g2.size(); ++idx) {
        const double s = laplacian_symbol(g2, g2.theta(g2.unravel(idx)));
        CHECK(s <= 0.0);
        CHECK(s >= -4.0 * g2.n);
    }
}

TEST_CASE("beta_squared equals the scaled symbol and peaks at 4n/hbar^2", "[fourier]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    CHECK(beta_squared(g, {0.5, 0.0, 0.0}) == Catch::Approx(16.0).margin(1e-12));
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const auto th = g.theta(g.unravel(idx));
        CHECK(beta_squared(g, th) == -laplacian_symbol(g, th) / (g.hbar * g.hbar));
        CHECK(beta_squared(g, th) >= 0.0);
        CHECK(beta_squared(g, th) <= 4.0 * g.n / (g.hbar * g.hbar) + 1e-12);
    }
}

TEST_CASE("beta_squared approaches the continuum dispersion as hbar shrinks", "[fourier]") {
    // fixed L and mode index m: beta^2 -> 4 pi^2 (m/L)^2 at rate O(hbar^2)
    const double L = 2.0;
    const int m = 1;
    const double target = 4.0 * std::numbers::pi * std::numbers::pi * (m / L) * (m / L);
    double prev_err = std::numeric_limits<double>::infinity();
    for (int N : {16, 32, 64, 128}) {
        auto g = LatticeGrid::make(1, N, L / N);
        const double b2 = beta_squared(g, {static_cast<double>(m) / N, 0.0, 0.0});
        const double err = std::abs(b2 - target) / target;
        CHECK(err < prev_err / 3.0);  // at least ~4x drop per halving, allow slack
        prev_err = err;
    }
    // small-theta example: within 1% once theta <= 0.02
    auto g = LatticeGrid::make(1, 100, 0.1);
    const double b2 = beta_squared(g, {0.02, 0.0, 0.0});
    const double cont = 4.0 * std::numbers::pi * std::numbers::pi * (2.0 / 10.0) * (2.0 / 10.0);
    CHECK(std::abs(b2 - cont) / cont < 0.01);
}

TEST_CASE("stencil laplacian of a delta", "[fourier]") {
    auto g = LatticeGrid::make(1, 4, 1.0);
    GridField u = GridField::zeros(g);
    u.values[0] = 1.0;
    auto Lu = apply_lattice_laplacian(u);
    CHECK(Lu.values[0] == cdouble{-2.0, 0.0});
    CHECK(Lu.values[1] == cdouble{1.0, 0.0});
    CHECK(Lu.values[2] == cdouble{0.0, 0.0});
    CHECK(Lu.values[3] == cdouble{1.0, 0.0});
}

TEST_CASE("stencil laplacian agrees with the symbol route", "[fourier]") {
    for (int n : {1, 2, 3}) {
        auto g = LatticeGrid::make(n, n == 3 ? 6 : 12, 0.2);
        GridField u = random_field(g, 4242u + n);
        auto direct = apply_lattice_laplacian(u);
        auto spectral = apply_symbol_op(u, [&](const std::array<double, 3>& th) { return laplacian_symbol(g, th); });
        CAPTURE(n);
        CHECK(rel_error(spectral.values, direct.values) < kStencilTol);
    }
}

TEST_CASE("apply_symbol_op with the unit symbol is the identity", "[fourier]") {
    auto g = LatticeGrid::make(2, 8, 0.5);
    GridField u = random_field(g, 31u);
    auto out = apply_symbol_op(u, [](const std::array<double, 3>&) { return 1.0; });
    CHECK(rel_error(out.values, u.values) < kRoundTripTol);
}

TEST_CASE("apply_symbol_op scales a single mode by 1+beta^2", "[fourier]") {
    auto g = LatticeGrid::make(1, 16, 0.25);
    SpectralField spec = SpectralField::zeros(g);
    spec.coeffs[3] = 1.0;
    GridField u = inverse_dft(spec);
    auto out = apply_symbol_op(u, [&](const std::array<double, 3>& th) { return 1.0 + beta_squared(g, th); });
    const double factor = 1.0 + beta_squared(g, {3.0 / 16.0, 0.0, 0.0});
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(out.values[j] - factor * u.values[j]) < 1e-12 * factor);
}

TEST_CASE("apply_symbol_op rejects non-finite symbols", "[fourier]") {
    auto g = LatticeGrid::make(1, 4, 1.0);
    GridField u = random_field(g, 5u);
    CHECK_THROWS_AS(apply_symbol_op(u, [](const std::array<double, 3>& th) { return th[0] == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }), std::domain_error);
}

TEST_CASE("grid validation rejects bad parameters", "[fourier]") {
    CHECK_THROWS_AS(LatticeGrid::make(0, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGrid::make(4, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGrid::make(1, 7, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGrid::make(1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGrid::make(1, 8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGrid::make(1, 8, -1.0), std::invalid_argument);
    CHECK_NOTHROW(LatticeGrid::make(3, 6, 0.1));
}

TEST_CASE("dft input validation", "[fourier]") {
    auto g = LatticeGrid::make(1, 4, 1.0);
    GridField u = GridField::zeros(g);
    u.values[2] = cdouble{std::numeric_limits<double>::infinity(), 0.0};
    CHECK_THROWS_AS(forward_dft(u), std::invalid_argument);
    GridField v = GridField::zeros(g);
    v.values.pop_back();
    CHECK_THROWS_AS(forward_dft(v), std::invalid_argument);
}
