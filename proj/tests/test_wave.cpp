#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "latwave/wave.hpp"
#include "support/oracles.hpp"

using namespace latwave;

namespace {

CoefficientProfile const_b(double c, double T) {
    CoefficientProfile p;
    p.eval = [c](double) { return c; };
    p.deriv = [](double) { return 0.0; };
    p.case_tag = CoeffCase::HolderWeak;
    p.alpha = 1.0;
    p.T = T;
    p.a0 = c;
    p.a1 = c;
    p.holder_seminorm = 0.0;
    p.seminorm_analytic = true;
    p.deriv_sup = 0.0;
    return p;
}

GridField single_mode(const LatticeGrid& g, const std::array<int, 3>& mode) {
    GridField f = GridField::zeros(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const auto j = g.unravel(idx);
        double phase = 0.0;
        for (int axis = 0; axis < g.n; ++axis) phase += static_cast<double>(j[axis]) * mode[axis] / g.N;
        f.values[idx] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return f;
}

CauchySpec basic_spec(const LatticeGrid& g, const CoefficientProfile& a, const CoefficientProfile& b, GridField u0, GridField u1, double T, double tol = 1e-10) {
    CauchySpec spec;
    spec.grid = g;
    spec.a = a;
    spec.b = b;
    spec.u0 = std::move(u0);
    spec.u1 = std::move(u1);
    spec.T = T;
    spec.ode_tol = tol;
    return spec;
}

double sup_diff(const GridField& x, const GridField& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) worst = std::max(worst, std::abs(x.values[i] - y.values[i]));
    return worst;
}

}  // namespace

TEST_CASE("cauchy spec validation", "[wave]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0);
    CHECK_NOTHROW(spec.check());

    auto bad = spec;
    bad.u0 = GridField::zeros(LatticeGrid::make(1, 16, 0.5));
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    bad = spec;
    bad.b = const_b(0.0, 0.5);  // profile too short for T
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    bad = spec;
    bad.T = 0.0;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    bad = spec;
    bad.ode_tol = 1.0;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    bad = spec;
    bad.forcing_g = [](double) { return 1.0; };
    bad.forcing_F = GridField::zeros(LatticeGrid::make(1, 4, 0.5));
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    bad = spec;
    bad.a = make_weierstrass(0.5, 4, 0.0, 1.0);
    bad.a.case_tag = CoeffCase::HolderStrict;  // strict regime on a vanishing floor
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

TEST_CASE("zero data solves to the zero field", "[wave]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto sol = solve_cauchy(basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0));
    for (const auto& us : sol.u)
        for (const auto& v : us.values) CHECK(v == cdouble{0.0, 0.0});
    for (const auto& dus : sol.du)
        for (const auto& v : dus.values) CHECK(v == cdouble{0.0, 0.0});
}

TEST_CASE("initial samples carry the data verbatim", "[wave]") {
    auto g = LatticeGrid::make(2, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto u0 = oracles::random_field(g, 991);
    auto u1 = oracles::random_field(g, 992);
    auto sol = solve_cauchy(basic_spec(g, unit, const_b(0.25, 1.0), u0, u1, 1.0, 1e-8));
    REQUIRE(sol.u[0].values.size() == u0.values.size());
    for (std::size_t i = 0; i < u0.values.size(); ++i) {
        CHECK(sol.u[0].values[i] == u0.values[i]);
        CHECK(sol.du[0].values[i] == u1.values[i]);
    }
    CHECK(sol.sample_times.front() == 0.0);
    CHECK(sol.sample_times.back() == 1.0);
}

TEST_CASE("plane wave eigenmode rotates at the symbol frequency", "[wave]") {
    auto g = LatticeGrid::make(1, 16, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    const std::array<int, 3> m{3, 0, 0};
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), single_mode(g, m), GridField::zeros(g), 1.0);
    auto sol = solve_cauchy(spec);
    const double beta = std::sqrt(beta_squared(g, g.theta(m)));
    const auto last = sol.u.back();
    const auto expected = single_mode(g, m);
    double worst = 0.0;
    for (std::size_t i = 0; i < last.values.size(); ++i) worst = std::max(worst, std::abs(last.values[i] - std::cos(beta * 1.0) * expected.values[i]));
    CHECK(worst <= 1e-7);
}

TEST_CASE("solution map is linear in data", "[wave]") {
    auto g = LatticeGrid::make(1, 16, 0.5);
    auto a = make_weierstrass(0.5, 8, 1.0, 1.0);
    auto b = const_b(0.3, 1.0);
    auto ua = oracles::random_field(g, 41);
    auto va = oracles::random_field(g, 42);
    auto ub = oracles::random_field(g, 43);
    auto vb = oracles::random_field(g, 44);
    const cdouble c1{0.7, -0.3}, c2{-1.1, 0.2};

    auto sol_a = solve_cauchy(basic_spec(g, a, b, ua, va, 1.0));
    auto sol_b = solve_cauchy(basic_spec(g, a, b, ub, vb, 1.0));
    GridField mix_u0 = GridField::zeros(g), mix_u1 = GridField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        mix_u0.values[i] = c1 * ua.values[i] + c2 * ub.values[i];
        mix_u1.values[i] = c1 * va.values[i] + c2 * vb.values[i];
    }
    auto sol_mix = solve_cauchy(basic_spec(g, a, b, mix_u0, mix_u1, 1.0));

    const std::size_t last = sol_mix.u.size() - 1;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(sol_mix.u[last].values[i] - c1 * sol_a.u[last].values[i] - c2 * sol_b.u[last].values[i]));
        worst = std::max(worst, std::abs(sol_mix.du[last].values[i] - c1 * sol_a.du[last].values[i] - c2 * sol_b.du[last].values[i]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("constant unit coefficient conserves per-mode energy", "[wave]") {
    auto g = LatticeGrid::make(1, 32, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto sol = solve_cauchy(basic_spec(g, unit, const_b(0.0, 1.0), oracles::random_field(g, 7), oracles::random_field(g, 8), 1.0));
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double beta2 = sol.beta2[idx];
        if (beta2 == 0.0) continue;
        const auto& traj = sol.per_mode[idx];
        const double e0 = beta2 * std::norm(traj.v[0]) + std::norm(traj.dv[0]);
        for (std::size_t s = 0; s < traj.t.size(); ++s) {
            const double e = beta2 * std::norm(traj.v[s]) + std::norm(traj.dv[s]);
            CHECK(std::abs(e - e0) <= 1e-7 * e0);
        }
    }
}

TEST_CASE("spectral solve matches a physical-space method of lines", "[wave]") {
    auto g = LatticeGrid::make(1, 64, 0.125);
    auto a = make_weierstrass(0.5, 6, 1.0, 1.0);
    auto b = const_b(0.3, 1.0);
    auto u0 = oracles::random_field(g, 2026);
    auto u1 = oracles::random_field(g, 816);
    auto spec = basic_spec(g, a, b, u0, u1, 1.0, 1e-8);
    auto sol = solve_cauchy(spec);

    auto [mol_u, mol_du] = oracles::stencil_mol_rk4(u0, u1, a.eval, b.eval, 1.0, 8000);
    CHECK(sup_diff(sol.u.back(), mol_u) <= 1e-6);
    CHECK(sup_diff(sol.du.back(), mol_du) <= 1e-6);
}

TEST_CASE("separable forcing drives the zero mode", "[wave]") {
    // u'' = 1 with flat forcing and zero data: u(t) = t^2/2 everywhere
    auto g = LatticeGrid::make(1, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0);
    spec.forcing_g = [](double) { return 1.0; };
    spec.forcing_F = GridField::zeros(g);
    for (auto& v : spec.forcing_F.values) v = cdouble{1.0, 0.0};
    auto sol = solve_cauchy(spec);
    for (const auto& v : sol.u.back().values) CHECK(std::abs(v - cdouble{0.5, 0.0}) <= 1e-8);
    for (const auto& v : sol.du.back().values) CHECK(std::abs(v - cdouble{1.0, 0.0}) <= 1e-8);
}

TEST_CASE("integrator failures name the offending mode", "[wave]") {
    auto g = LatticeGrid::make(1, 4, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0);
    spec.forcing_g = [](double t) { return t < 0.5 ? 1.0 : std::numeric_limits<double>::quiet_NaN(); };
    spec.forcing_F = GridField::zeros(g);
    for (auto& v : spec.forcing_F.values) v = cdouble{1.0, 0.0};
    CHECK_THROWS_WITH(solve_cauchy(spec), Catch::Matchers::ContainsSubstring("mode"));
}

TEST_CASE("worker count does not change the bytes", "[wave]") {
    auto g = LatticeGrid::make(1, 16, 0.5);
    auto a = make_weierstrass(0.5, 6, 1.0, 1.0);
    auto spec = basic_spec(g, a, const_b(0.1, 1.0), oracles::random_field(g, 99), oracles::random_field(g, 100), 1.0, 1e-8);
    auto sol1 = solve_cauchy(spec, 1);
    auto sol4 = solve_cauchy(spec, 4);
    REQUIRE(sol1.u.size() == sol4.u.size());
    for (std::size_t s = 0; s < sol1.u.size(); ++s)
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(sol1.u[s].values[i] == sol4.u[s].values[i]);
            CHECK(sol1.du[s].values[i] == sol4.du[s].values[i]);
        }
}

TEST_CASE("worker resolution order is request, environment, hardware", "[wave]") {
    CHECK(resolve_workers(3) == 3);
    setenv("LATWAVE_WORKERS", "5", 1);
    CHECK(resolve_workers() == 5);
    CHECK(resolve_workers(2) == 2);  // explicit request still wins
    setenv("LATWAVE_WORKERS", "junk", 1);
    CHECK(resolve_workers() >= 1);
    unsetenv("LATWAVE_WORKERS");
    CHECK(resolve_workers() >= 1);
}

TEST_CASE("per-mode certificates pass on a strict holder solve", "[wave]") {
    auto g = LatticeGrid::make(1, 32, 0.25);
    auto a = make_weierstrass(0.5, 8, 1.0, 1.0);
    auto spec = basic_spec(g, a, const_b(0.0, 1.0), oracles::random_field(g, 3), oracles::random_field(g, 4), 1.0);
    auto sol = solve_cauchy(spec);
    auto certs = certify_solution(sol, spec);
    REQUIRE(certs.size() == g.size());
    for (const auto& c : certs) {
        CHECK(c.pass);
        CHECK(c.cprime_inflation == 1.0);
    }
}

TEST_CASE("certification rejects forced problems", "[wave]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0);
    spec.forcing_g = [](double) { return 1.0; };
    spec.forcing_F = GridField::zeros(g);
    auto sol = solve_cauchy(spec);
    CHECK_THROWS_AS(certify_solution(sol, spec), std::invalid_argument);
}

TEST_CASE("regime certificate factory dispatches on the coefficient tag", "[wave]") {
    auto b0 = const_b(0.0, 1.0);
    CHECK(regime_certificate(make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0), b0, 1.0).regime == CoeffCase::Lip);
    CHECK(regime_certificate(make_weierstrass(0.5, 4, 1.0, 1.0), b0, 1.0).s == 0.5);
    CHECK(regime_certificate(make_weierstrass(0.5, 4, 0.0, 1.0), b0, 1.0).s == Catch::Approx(0.625));
    auto deg = make_degenerate_smooth(1, 2, 1.0);
    CHECK(regime_certificate(deg, b0, 1.0).l_of_a == 2);
    CHECK(regime_certificate(deg, b0, 1.0, 0.0, 2).exponent == 4.0);
}

TEST_CASE("wellposedness report on zero data is zero", "[wave]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0);
    auto sol = solve_cauchy(spec);
    auto rep = wellposedness_report(sol, spec);
    CHECK(rep.realized_constant == 0.0);
    for (double v : rep.lhs) CHECK(v == 0.0);
    CHECK(rep.op_norm_scale == 1.0 + 4.0 / 0.25);
}

TEST_CASE("wellposedness constant is at least one for homogeneous runs", "[wave]") {
    auto g = LatticeGrid::make(1, 16, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.5, 1.0), oracles::random_field(g, 11), oracles::random_field(g, 12), 1.0);
    auto sol = solve_cauchy(spec);
    certify_solution(sol, spec);
    auto rep = wellposedness_report(sol, spec);
    CHECK(rep.realized_constant >= 1.0 - 1e-12);  // t = 0 realizes the data ratio
    CHECK(std::isfinite(rep.realized_constant));
    CHECK(rep.all_certificates_pass);
    CHECK(rep.max_realized_ratio <= 1.0);
}

TEST_CASE("forcing enters the report's right-hand side", "[wave]") {
    auto g = LatticeGrid::make(1, 8, 0.5);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), GridField::zeros(g), GridField::zeros(g), 1.0);
    spec.forcing_g = [](double) { return 2.0; };
    spec.forcing_F = GridField::zeros(g);
    for (auto& v : spec.forcing_F.values) v = cdouble{1.0, 0.0};
    auto sol = solve_cauchy(spec);
    auto rep = wellposedness_report(sol, spec);
    // int_0^1 4 dt * ||F||^2 = 4 * 8
    CHECK(rep.rhs == Catch::Approx(32.0).epsilon(1e-12));
    CHECK(rep.realized_constant > 0.0);
    CHECK(std::isfinite(rep.realized_constant));
}

TEST_CASE("realized constant growth under refinement stays below the certificate", "[wave]") {
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto b = const_b(0.0, 1.0);
    const std::array<int, 3> m{1, 0, 0};

    auto g1 = LatticeGrid::make(1, 8, 1.0);
    auto spec1 = basic_spec(g1, unit, b, single_mode(g1, m), GridField::zeros(g1), 1.0);
    auto rep1 = wellposedness_report(solve_cauchy(spec1), spec1);

    auto g2 = LatticeGrid::make(1, 16, 0.5);  // same period, half the spacing
    auto spec2 = basic_spec(g2, unit, b, single_mode(g2, m), GridField::zeros(g2), 1.0);
    auto rep2 = wellposedness_report(solve_cauchy(spec2), spec2);

    auto cert = regime_certificate(unit, b, 1.0);
    const double log_growth = std::log(rep2.realized_constant) - std::log(rep1.realized_constant);
    CHECK(log_growth <= cert.log_bound(spec2.beta2_max(), 1.0));
}

TEST_CASE("mode trajectories share the solution sample grid", "[wave]") {
    auto g = LatticeGrid::make(1, 8, 0.25);
    auto unit = make_lipschitz("constant", 1.0, 0.0, 0.0, 1.0);
    auto spec = basic_spec(g, unit, const_b(0.0, 1.0), oracles::random_field(g, 5), GridField::zeros(g), 1.0, 1e-8);
    auto sol = solve_cauchy(spec);
    const int expected = spec.shared_sample_count();
    CHECK(sol.sample_times.size() == static_cast<std::size_t>(expected + 1));
    for (const auto& traj : sol.per_mode) {
        REQUIRE(traj.t.size() == sol.sample_times.size());
        CHECK(traj.t.back() == sol.sample_times.back());
    }
}
