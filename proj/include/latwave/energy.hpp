#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "latwave/coefficients.hpp"
#include "latwave/mode_ode.hpp"
#include "latwave/mollifier.hpp"

namespace latwave {

/// <beta>^2 = 1 + beta^2 (Japanese bracket squared).
inline double bracket_sq(double beta2) { return 1.0 + beta2; }

/// a-priori energy growth certificate for one coefficient regime:
///   |v(t)|^2 + |v'(t)|^2 <= C * exp(K * T_eff * <beta>^exponent) * (|v0|^2 + |v1|^2)
/// where T_eff = T except when k_includes_time (then the time horizon is baked
/// into K).  For the weighted regimes exponent = 1/s.
struct EnergyCertificate {
    CoeffCase regime = CoeffCase::Lip;
    double C = 1.0;
    double K = 0.0;
    double exponent = 2.0;
    double s = 0.0;  // weight parameter, regimes 2/4 only
    double T = 1.0;
    bool k_includes_time = false;
    bool certified = true;
    double cprime = 0.0;           // base multiplicative constant, regimes 2/4
    double cprime_inflation = 1.0; // 1, or 4 after the single permitted retry
    double c_T = 0.0;              // measured log-derivative constant, regime 3
    std::string notes;

    // realized diagnostics, filled by certify_trajectory
    double realized_ratio = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;

    /// epsilon rule for the regularized eigenvalues at a given mode.
    double mollification_eps(double beta2) const {
        const double br = std::sqrt(bracket_sq(beta2));
        if (regime == CoeffCase::HolderStrict) return std::min(1.0, std::pow(br, -2.0));
        if (regime == CoeffCase::HolderWeak) return std::min(1.0, std::pow(br, -2.0 / (1.0 + 0.5 * alpha_of_a)));
        if (regime == CoeffCase::SmoothWeak) return std::min(1.0, std::pow(br, -static_cast<double>(l_of_a) / sigma()));
        return 1.0;
    }

    double sigma() const { return 1.0 + 0.5 * l_of_a; }

    double alpha_of_a = 0.0;  // profile alpha (regimes 2/4)
    int l_of_a = 0;           // profile l (regime 3)

    /// log of the right-hand side C * exp(...) * data_energy; data in absolute scale.
    double log_bound(double beta2, double data_energy) const {
        const double t_eff = k_includes_time ? 1.0 : T;
        const double rate = K * t_eff * std::pow(bracket_sq(beta2), exponent / 2.0);
        return std::log(C) + rate + std::log(data_energy);
    }
};

inline constexpr double kCPrime = 16.0;  // base constant for the weighted regimes

/// Lipschitz regime. kappa(beta2) = (||a'|| + <beta>^2 ||a|| + ||b||) / c0,
/// c0 = min(inf a, 1), c1 = max(sup a, 1):
///   C1 = c1/c0 * exp((||a'|| + ||b||) T / c0),  K1 = ||a|| / c0, exponent 2.
inline EnergyCertificate case1_certificate(const CoefficientProfile& a, const CoefficientProfile& b, double T) {
    a.check();
    b.check();
    if (a.case_tag != CoeffCase::Lip) throw std::invalid_argument("case1_certificate: profile is not Lipschitz-tagged");
    if (!(a.a0 > 0.0)) throw std::invalid_argument("case1_certificate: inf a must be positive");
    if (!std::isfinite(a.deriv_sup)) throw std::invalid_argument("case1_certificate: ||a'|| must be supplied");
    EnergyCertificate cert;
    cert.regime = CoeffCase::Lip;
    cert.T = T;
    const double c0 = std::min(a.a0, 1.0);
    const double c1 = std::max(a.a1, 1.0);
    cert.K = a.a1 / c0;
    cert.C = (c1 / c0) * std::exp((a.deriv_sup + b.a1) * T / c0);
    cert.exponent = 2.0;
    cert.certified = true;
    cert.notes = "symmetriser diag(a,1)";
    return cert;
}

inline double case1_kappa(const CoefficientProfile& a, const CoefficientProfile& b, double beta2) {
    const double c0 = std::min(a.a0, 1.0);
    return (a.deriv_sup + bracket_sq(beta2) * a.a1 + b.a1) / c0;
}

/// Strictly positive Holder regime (0 < alpha < 1).  With L = |a|_{C^alpha}:
///   kappa = L/a0 + L ||sqrt a|| / a0 + (||b|| + ||sqrt a||^2)/sqrt(a0),
///   K2 = kappa/2,  C2 = C' ||a|| / sqrt(a0),  exponent 1/s (s <= 1/2).
inline EnergyCertificate case2_certificate(const CoefficientProfile& a, const CoefficientProfile& b, double T, double s) {
    a.check();
    b.check();
    if (a.case_tag != CoeffCase::HolderStrict) throw std::invalid_argument("case2_certificate: profile is not strict-Holder-tagged");
    if (!(s > 0.0 && s <= 0.5)) throw std::invalid_argument("case2_certificate: s must lie in (0, 1/2]");
    EnergyCertificate cert;
    cert.regime = CoeffCase::HolderStrict;
    cert.T = T;
    cert.s = s;
    cert.alpha_of_a = a.alpha;
    const double L = a.holder_seminorm;
    const double sqrt_a0 = std::sqrt(a.a0);
    const double sqrt_a1 = std::sqrt(a.a1);
    const double kappa = L / a.a0 + L * sqrt_a1 / a.a0 + (b.a1 + a.a1) / sqrt_a0;
    cert.K = 0.5 * kappa;
    cert.cprime = kCPrime;
    cert.C = kCPrime * a.a1 / sqrt_a0;
    cert.exponent = 1.0 / s;
    cert.certified = a.seminorm_analytic;
    cert.notes = "bump exp(-1/(1-t^2)) normalized by GL64; eps = <beta>^-2";
    return cert;
}

/// Trapezoid value of int_0^T |a'(t)| / (a(t)+eps^2)^{1-1/l} dt, refined from
/// 4096 panels by doubling until the relative change drops below 1e-4.
inline double log_derivative_integral(const CoefficientProfile& a, double eps, int l) {
    a.check();
    if (!a.deriv) throw std::invalid_argument("log_derivative_integral: profile has no derivative");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("log_derivative_integral: eps must lie in (0,1]");
    if (l < 2) throw std::invalid_argument("log_derivative_integral: l must be >= 2");
    const double T = a.T;
    const double power = 1.0 - 1.0 / static_cast<double>(l);
    auto integrand = [&](double t) { return std::abs(a.deriv(t)) / std::pow(a.eval(t) + eps * eps, power); };
    int npanels = 4096;
    auto trapezoid = [&](int n) {
        const double h = T / n;
        double s = 0.5 * (integrand(0.0) + integrand(T));
        for (int i = 1; i < n; ++i) s += integrand(h * i);
        return s * h;
    };
    double prev = trapezoid(npanels);
    for (int iter = 0; iter < 10; ++iter) {
        npanels *= 2;
        const double cur = trapezoid(npanels);
        if (std::abs(cur - prev) <= 1e-4 * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

/// Degenerate smooth regime (C^l, l >= 2, a >= 0). sigma = 1 + l/2:
///   C3 = c1^2, K3 = 1 + c1 (c_T ||a||_{C^l}^{1/l} + 1/c1 + ||a|| + ||b|| + 1) T,
///   bound C3 exp(K3 <beta>^{6-4/sigma}), c1 = ||a|| + 1.
/// c_T is measured on the given coefficient (integral at vanishing eps divided
/// by ||a||_{C^l}^{1/l}), so the certificate is not analytically certified.
inline EnergyCertificate case3_certificate(const CoefficientProfile& a, const CoefficientProfile& b, double T, int l) {
    a.check();
    b.check();
    if (a.case_tag != CoeffCase::SmoothWeak) throw std::invalid_argument("case3_certificate: profile is not smooth-weak-tagged");
    if (l != a.l) throw std::invalid_argument("case3_certificate: l does not match the profile");
    if (!(a.cl_norm > 0.0)) throw std::invalid_argument("case3_certificate: ||a||_{C^l} must be supplied");
    EnergyCertificate cert;
    cert.regime = CoeffCase::SmoothWeak;
    cert.T = T;
    cert.l_of_a = l;
    const double c1 = a.a1 + 1.0;
    const double cl_root = std::pow(a.cl_norm, 1.0 / l);
    cert.c_T = log_derivative_integral(a, 1e-6, l) / cl_root;
    cert.K = 1.0 + c1 * (cert.c_T * cl_root + 1.0 / c1 + a.a1 + b.a1 + 1.0) * T;
    cert.C = c1 * c1;
    cert.exponent = 6.0 - 4.0 / cert.sigma();
    cert.k_includes_time = true;
    cert.certified = false;  // c_T is empirical
    cert.notes = "quasi-symmetriser diag(a+eps^2,1); eps = <beta>^{-l/sigma}; c_T measured";
    return cert;
}

/// Weak Holder regime (0 < alpha < 2, a >= 0).  With Ls = ||sqrt a||_{C^{alpha/2}}:
///   kappa = Ls + (2+Ls)^2 + ||b||,  K4 = kappa/2,  C4 = C' (2+Ls)^2,
///   exponent 1/s with s <= (alpha+2)/4; eps = <beta>^{-2/(1+alpha/2)}.
inline EnergyCertificate case4_certificate(const CoefficientProfile& a, const CoefficientProfile& b, double T, double s) {
    a.check();
    b.check();
    if (a.case_tag != CoeffCase::HolderWeak) throw std::invalid_argument("case4_certificate: profile is not weak-Holder-tagged");
    const double s_max = (a.alpha + 2.0) / 4.0;
    if (!(s > 0.0 && s <= s_max)) throw std::invalid_argument("case4_certificate: s must lie in (0, (alpha+2)/4]");
    EnergyCertificate cert;
    cert.regime = CoeffCase::HolderWeak;
    cert.T = T;
    cert.s = s;
    cert.alpha_of_a = a.alpha;
    const double Ls = std::sqrt(a.holder_seminorm);  // |sqrt a|_{C^{alpha/2}} <= sqrt(|a|_{C^alpha})
    const double kappa = Ls + (2.0 + Ls) * (2.0 + Ls) + b.a1;
    cert.K = 0.5 * kappa;
    cert.cprime = kCPrime;
    cert.C = kCPrime * (2.0 + Ls) * (2.0 + Ls);
    cert.exponent = 1.0 / s;
    cert.certified = a.seminorm_analytic;
    cert.notes = "bump exp(-1/(1-t^2)) normalized by GL64; shifted eigenvalues, eps = <beta>^{-2/(1+alpha/2)}";
    return cert;
}

/// E(t_i) = a(t_i) |v_i|^2 + |v'_i|^2  (symmetriser diag(a,1) paired with V).
inline std::vector<double> symmetriser_energy(const CoefficientProfile& a, const ModeTrajectory& traj) {
    std::vector<double> E(traj.t.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i) E[i] = a.eval(traj.t[i]) * std::norm(traj.v[i]) + std::norm(traj.dv[i]);
    return E;
}

/// E_eps(t_i) = (a(t_i) + eps^2) |v_i|^2 + |v'_i|^2.
inline std::vector<double> quasi_symmetriser_energy(const CoefficientProfile& a, double eps, const ModeTrajectory& traj) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("quasi_symmetriser_energy: eps must lie in (0,1]");
    std::vector<double> E(traj.t.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i) E[i] = (a.eval(traj.t[i]) + eps * eps) * std::norm(traj.v[i]) + std::norm(traj.dv[i]);
    return E;
}

/// Largest ratio E(t)/ (e^{kappa t} E(0)) along a trajectory; <= 1 + slack when
/// the Gronwall inequality holds.  Zero data yields ratio 0.
inline double gronwall_ratio(const std::vector<double>& E, const std::vector<double>& t, double kappa) {
    if (E.size() != t.size() || E.empty()) throw std::invalid_argument("gronwall_ratio: size mismatch");
    if (E[0] <= 0.0) {
        for (double e : E)
            if (e > 0.0) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i) worst = std::max(worst, E[i] / (std::exp(kappa * (t[i] - t[0])) * E[0]));
    return worst;
}

/// Weighted transformed state W(t) = e^{-K t <beta>^{1/s}} adj(H(t)) V(t) with
/// V = (i v, v'), H = [[1,1],[lam1,lam2]].  The proof's choice rho(t) = -K t
/// makes |W|^2 non-increasing; max_increment records the worst sample-to-sample
/// rise for the monotonicity audit.
struct TransformedEnergy {
    std::vector<double> t;
    std::vector<std::array<cdouble, 2>> W;
    double K = 0.0;
    double s = 0.5;
    double beta2 = 0.0;
    double max_increment = 0.0;  // max over i of |W_{i+1}|^2 - |W_i|^2
    double max_w_sq = 0.0;

    std::vector<double> norms_sq() const {
        std::vector<double> out(W.size());
        for (std::size_t i = 0; i < W.size(); ++i) out[i] = std::norm(W[i][0]) + std::norm(W[i][1]);
        return out;
    }
};

inline TransformedEnergy transform_energy(const RegularizedEigenvalues& eigs, double K, double s, double beta2, const ModeTrajectory& traj) {
    if (!(s > 0.0)) throw std::invalid_argument("transform_energy: s must be positive");
    TransformedEnergy te;
    te.t = traj.t;
    te.K = K;
    te.s = s;
    te.beta2 = beta2;
    te.W.resize(traj.t.size());
    const double br_pow = std::pow(bracket_sq(beta2), 0.5 / s);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double t = traj.t[i];
        const double l1 = eigs.lam1(t);
        const double l2 = eigs.lam2(t);
        const double det = l2 - l1;
        if (std::abs(det) < 1e-14) throw NumericalError("transform_energy: eigenvalue matrix is singular");
        const cdouble iv = cdouble{0.0, 1.0} * traj.v[i];
        const cdouble dv = traj.dv[i];
        const double weight = std::exp(-K * t * br_pow);
        // adj(H) = [[lam2, -1], [-lam1, 1]]
        te.W[i] = {weight * (l2 * iv - dv), weight * (-l1 * iv + dv)};
    }
    const auto n = te.norms_sq();
    for (std::size_t i = 0; i + 1 < n.size(); ++i) te.max_increment = std::max(te.max_increment, n[i + 1] - n[i]);
    te.max_w_sq = *std::max_element(n.begin(), n.end());
    return te;
}

/// Fill realized_ratio / pass against the trajectory's sup of |v|^2 + |v'|^2.
/// Computed in log space so astronomically large bounds stay finite.
inline EnergyCertificate certify_trajectory(EnergyCertificate cert, double beta2, const ModeTrajectory& traj, cdouble v0, cdouble v1) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < traj.v.size(); ++i) lhs = std::max(lhs, std::norm(traj.v[i]) + std::norm(traj.dv[i]));
    const double data = std::norm(v0) + std::norm(v1);
    if (data <= 0.0) {
        cert.realized_ratio = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        cert.pass = lhs <= 0.0;
        return cert;
    }
    const double log_ratio = std::log(lhs > 0.0 ? lhs : std::numeric_limits<double>::min()) - cert.log_bound(beta2, data);
    cert.realized_ratio = std::exp(log_ratio);
    cert.pass = log_ratio <= 0.0;
    return cert;
}

/// certify_trajectory with the single permitted C' retry (regimes 2/4): on
/// failure the multiplicative constant is inflated once by 4 and the check
/// repeats; cprime_inflation records what happened.
inline EnergyCertificate certify_with_retry(EnergyCertificate cert, double beta2, const ModeTrajectory& traj, cdouble v0, cdouble v1) {
    EnergyCertificate out = certify_trajectory(cert, beta2, traj, v0, v1);
    const bool retryable = (out.regime == CoeffCase::HolderStrict || out.regime == CoeffCase::HolderWeak);
    if (!out.pass && retryable) {
        out.C *= 4.0;
        out.cprime_inflation = 4.0;
        out = certify_trajectory(out, beta2, traj, v0, v1);
    }
    return out;
}

}  // namespace latwave
