#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latwave/lattice.hpp"

namespace latwave {

/// Collects every validation problem found in one parse, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues) : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "configuration invalid:";
        for (const auto& e : v) {
            s += "\n  ";
            s += e;
        }
        return s;
    }
    std::vector<std::string> issues_;
};

enum class RunMode { Solve, Verify, Converge, Selftest };

inline const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::Solve: return "solve";
        case RunMode::Verify: return "verify";
        case RunMode::Converge: return "converge";
        case RunMode::Selftest: return "selftest";
    }
    return "?";
}

/// One time coefficient as declared in the config. Which parameters apply
/// depends on kind; setting an inapplicable one is a validation error.
struct CoeffConfig {
    std::string kind;      // constant, linear, abs_sin, weierstrass, degenerate_smooth
    std::string case_tag;  // optional; must match the kind's regime when given
    double c0 = 0.0;
    double c1 = 0.0;
    double omega = 1.0;
    double alpha = 0.0;
    int depth = 12;
    double floor_value = 0.0;
    int m = 1;
    int l = 2;

    bool operator==(const CoeffConfig&) const = default;
};

struct DataConfig {
    std::string preset;  // delta, gaussian_series, single_mode, series
    int m = 0;           // single_mode index
    int band = 4;        // gaussian_series cutoff
    cdouble u0_amp{1.0, 0.0};
    cdouble u1_amp{0.0, 0.0};
    std::vector<std::pair<std::array<int, 3>, cdouble>> u0_terms;  // preset series
    std::vector<std::pair<std::array<int, 3>, cdouble>> u1_terms;

    bool operator==(const DataConfig&) const = default;
};

struct ForcingConfig {
    std::string kind = "zero";  // zero, one, cosine
    int m = 0;
    double omega = 1.0;
    cdouble amp{1.0, 0.0};

    bool operator==(const ForcingConfig&) const = default;
};

struct ExperimentConfig {
    RunMode mode = RunMode::Selftest;
    int n = 1;
    int N = 0;                  // solve/verify only; converge derives it per hbar
    std::vector<double> hbars;  // one entry for solve/verify, a ladder for converge
    double L = 0.0;
    CoeffConfig a;
    CoeffConfig b;
    DataConfig data;
    ForcingConfig forcing;
    double T = 1.0;
    double ode_tol = 1e-10;
    double s = 0.0;  // certificate exponent override, 0 means the case default
    int l = 0;       // certificate smoothness override, 0 means the profile's own
    std::string output = "out";
    int workers = 0;  // 0 means auto

    double hbar() const { return hbars.empty() ? 0.0 : hbars.front(); }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string trim(std::string_view sv) {
    const auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    std::size_t b = 0, e = sv.size();
    while (b < e && issp(sv[b])) ++b;
    while (e > b && issp(sv[e - 1])) --e;
    return std::string(sv.substr(b, e - b));
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct RawSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> kv;
};

/// Key-value access over one section with duplicate detection and typed
/// parses. Every failure lands in errs; reads after a failure yield defaults.
class SectionReader {
public:
    SectionReader(const RawSection* sec, std::string name, std::vector<std::string>& errs) : sec_(sec), name_(std::move(name)), errs_(&errs) {}

    bool present() const { return sec_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        if (!sec_) return std::nullopt;
        std::optional<std::string> out;
        for (const auto& [k, v] : sec_->kv) {
            if (k != key) continue;
            if (out) {
                errs_->push_back("duplicate key '" + key + "' in [" + name_ + "]");
                return out;
            }
            out = v;
        }
        if (out) seen_.push_back(key);
        return out;
    }

    std::vector<std::string> get_all(const std::string& key) {
        std::vector<std::string> out;
        if (!sec_) return out;
        for (const auto& [k, v] : sec_->kv)
            if (k == key) out.push_back(v);
        if (!out.empty()) seen_.push_back(key);
        return out;
    }

    std::optional<double> get_double(const std::string& key) {
        const auto raw = get(key);
        if (!raw) return std::nullopt;
        const auto v = parse_double(*raw);
        if (!v) errs_->push_back("key '" + key + "' in [" + name_ + "] is not a number: '" + *raw + "'");
        return v;
    }

    std::optional<int> get_integer(const std::string& key) {
        const auto raw = get(key);
        if (!raw) return std::nullopt;
        const auto v = parse_int(*raw);
        if (!v || *v < -1000000000LL || *v > 1000000000LL) {
            errs_->push_back("key '" + key + "' in [" + name_ + "] is not an integer: '" + *raw + "'");
            return std::nullopt;
        }
        return static_cast<int>(*v);
    }

    /// Every key must have been consumed by one of the getters above.
    void finish() {
        if (!sec_) return;
        for (const auto& [k, v] : sec_->kv) {
            bool known = false;
            for (const auto& s : seen_) known = known || s == k;
            if (!known) errs_->push_back("unknown key '" + k + "' in [" + name_ + "]");
        }
    }

private:
    const RawSection* sec_;
    std::string name_;
    std::vector<std::string>* errs_;
    std::vector<std::string> seen_;
};

inline void validate_coeff(CoeffConfig& c, const std::string& section, bool is_b, SectionReader& r, std::vector<std::string>& errs) {
    const auto kind = r.get("kind");
    const auto tag = r.get("case_tag");
    const auto c0 = r.get_double("c0");
    const auto c1 = r.get_double("c1");
    const auto omega = r.get_double("omega");
    const auto alpha = r.get_double("alpha");
    const auto depth = r.get_integer("depth");
    const auto floor_v = r.get_double("floor");
    const auto m = r.get_integer("m");
    const auto l = r.get_integer("l");
    r.finish();

    if (!kind) {
        errs.push_back("[" + section + "] requires 'kind'");
        return;
    }
    c.kind = *kind;
    if (tag) c.case_tag = *tag;
    if (c0) c.c0 = *c0;
    if (c1) c.c1 = *c1;
    if (omega) c.omega = *omega;
    if (alpha) c.alpha = *alpha;
    if (depth) c.depth = *depth;
    if (floor_v) c.floor_value = *floor_v;
    if (m) c.m = *m;
    if (l) c.l = *l;

    auto reject = [&](bool given, const char* key) {
        if (given) errs.push_back("key '" + std::string(key) + "' does not apply to kind " + c.kind + " in [" + section + "]");
    };

    std::string expected_tag;
    if (is_b) {
        if (c.kind != "constant") {
            errs.push_back("[" + section + "] supports kind constant only, got '" + c.kind + "'");
            return;
        }
        if (!c0) errs.push_back("[" + section + "] kind constant requires 'c0'");
        if (c.c0 < 0.0) errs.push_back("[" + section + "] must be nonnegative, c0 = " + format_double(c.c0));
        reject(c1.has_value(), "c1");
        reject(omega.has_value(), "omega");
        reject(alpha.has_value(), "alpha");
        reject(depth.has_value(), "depth");
        reject(floor_v.has_value(), "floor");
        reject(m.has_value(), "m");
        reject(l.has_value(), "l");
        reject(tag.has_value(), "case_tag");
        return;
    }

    if (c.kind == "constant" || c.kind == "linear" || c.kind == "abs_sin") {
        expected_tag = "Lip";
        if (!c0) errs.push_back("[" + section + "] kind " + c.kind + " requires 'c0'");
        if (c0 && !(c.c0 > 0.0)) errs.push_back("[" + section + "] Lipschitz regime requires c0 > 0, got " + format_double(c.c0));
        reject(alpha.has_value(), "alpha");
        reject(depth.has_value(), "depth");
        reject(floor_v.has_value(), "floor");
        reject(m.has_value(), "m");
        reject(l.has_value(), "l");
        if (c.kind == "constant") {
            reject(c1.has_value(), "c1");
            reject(omega.has_value(), "omega");
        } else if (c.kind == "linear") {
            reject(omega.has_value(), "omega");
        }
    } else if (c.kind == "weierstrass") {
        if (!alpha) errs.push_back("[" + section + "] kind weierstrass requires 'alpha'");
        if (alpha && !(c.alpha > 0.0 && c.alpha < 1.0)) errs.push_back("[" + section + "] weierstrass alpha must lie in (0,1)");
        if (c.depth < 1 || c.depth > 40) errs.push_back("[" + section + "] weierstrass depth must lie in [1,40]");
        if (c.floor_value < 0.0) errs.push_back("[" + section + "] weierstrass floor must be nonnegative");
        expected_tag = c.floor_value > 0.0 ? "HolderStrict" : "HolderWeak";
        reject(c0.has_value(), "c0");
        reject(c1.has_value(), "c1");
        reject(omega.has_value(), "omega");
        reject(m.has_value(), "m");
        reject(l.has_value(), "l");
    } else if (c.kind == "degenerate_smooth") {
        if (c.m < 1) errs.push_back("[" + section + "] degenerate_smooth requires m >= 1");
        if (c.l < 2) errs.push_back("[" + section + "] degenerate_smooth requires l >= 2");
        expected_tag = "SmoothWeak";
        reject(c0.has_value(), "c0");
        reject(c1.has_value(), "c1");
        reject(omega.has_value(), "omega");
        reject(alpha.has_value(), "alpha");
        reject(depth.has_value(), "depth");
        reject(floor_v.has_value(), "floor");
    } else {
        errs.push_back("[" + section + "] unknown kind '" + c.kind + "'");
        return;
    }

    if (!c.case_tag.empty() && !expected_tag.empty() && c.case_tag != expected_tag) {
        if (c.kind == "weierstrass" && c.case_tag == "HolderStrict")
            errs.push_back("[" + section + "] case HolderStrict requires floor > 0");
        else
            errs.push_back("[" + section + "] case_tag " + c.case_tag + " does not match kind " + c.kind + " (expected " + expected_tag + ")");
    }
}

inline void parse_terms(const std::vector<std::string>& lines, int n, const char* key, const std::string& section,
                        std::vector<std::pair<std::array<int, 3>, cdouble>>& out, std::vector<std::string>& errs) {
    for (const auto& line : lines) {
        const auto tok = split_ws(line);
        if (static_cast<int>(tok.size()) != n + 2) {
            errs.push_back("key '" + std::string(key) + "' in [" + section + "] needs " + std::to_string(n) + " mode indices plus re im, got '" + line +
                           "'");
            continue;
        }
        std::array<int, 3> mode{0, 0, 0};
        bool ok = true;
        for (int axis = 0; axis < n; ++axis) {
            const auto v = parse_int(tok[static_cast<std::size_t>(axis)]);
            if (!v) ok = false;
            else mode[axis] = static_cast<int>(*v);
        }
        const auto re = parse_double(tok[static_cast<std::size_t>(n)]);
        const auto im = parse_double(tok[static_cast<std::size_t>(n) + 1]);
        if (!ok || !re || !im) {
            errs.push_back("key '" + std::string(key) + "' in [" + section + "] has a malformed term '" + line + "'");
            continue;
        }
        out.push_back({mode, {*re, *im}});
    }
}

}  // namespace detail

/// Parse a line-oriented key=value config with [section] blocks. Collects
/// every validation problem and throws one ConfigError listing them all.
inline ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::string> errs;
    std::vector<detail::RawSection> sections;

    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string line = detail::trim(text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos));
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                errs.push_back("line " + std::to_string(lineno) + ": malformed section header '" + line + "'");
                continue;
            }
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            for (const auto& s : sections)
                if (s.name == name) errs.push_back("duplicate section [" + name + "]");
            sections.push_back({name, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back("line " + std::to_string(lineno) + ": expected key = value, got '" + line + "'");
            continue;
        }
        if (sections.empty()) {
            errs.push_back("line " + std::to_string(lineno) + ": key outside any [section]");
            continue;
        }
        sections.back().kv.push_back({detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1))});
    }

    static const char* known[] = {"run", "grid", "a", "b", "data", "forcing"};
    auto find = [&](const char* name) -> const detail::RawSection* {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    };
    for (const auto& s : sections) {
        bool ok = false;
        for (const char* k : known) ok = ok || s.name == k;
        if (!ok) errs.push_back("unknown section [" + s.name + "]");
    }

    ExperimentConfig cfg;

    detail::SectionReader run(find("run"), "run", errs);
    if (!run.present()) {
        errs.push_back("missing [run] section");
        throw ConfigError(std::move(errs));
    }
    const auto mode = run.get("mode");
    if (!mode) {
        errs.push_back("[run] requires 'mode'");
    } else if (*mode == "solve") {
        cfg.mode = RunMode::Solve;
    } else if (*mode == "verify") {
        cfg.mode = RunMode::Verify;
    } else if (*mode == "converge") {
        cfg.mode = RunMode::Converge;
    } else if (*mode == "selftest") {
        cfg.mode = RunMode::Selftest;
    } else {
        errs.push_back("[run] mode must be solve, verify, converge, or selftest, got '" + *mode + "'");
    }
    if (const auto v = run.get_double("T")) cfg.T = *v;
    if (const auto v = run.get_double("ode_tol")) cfg.ode_tol = *v;
    if (const auto v = run.get_double("s")) cfg.s = *v;
    if (const auto v = run.get_integer("l")) cfg.l = *v;
    if (const auto v = run.get("output")) cfg.output = *v;
    if (const auto v = run.get_integer("workers")) cfg.workers = *v;
    run.finish();
    if (!(cfg.T > 0.0)) errs.push_back("[run] T must be positive");
    if (!(cfg.ode_tol > 0.0)) errs.push_back("[run] ode_tol must be positive");
    if (cfg.s < 0.0) errs.push_back("[run] s must be nonnegative");
    if (cfg.l < 0) errs.push_back("[run] l must be nonnegative");
    if (cfg.workers < 0) errs.push_back("[run] workers must be nonnegative");
    if (cfg.output.empty()) errs.push_back("[run] output must not be empty");

    const bool needs_problem = cfg.mode != RunMode::Selftest;

    detail::SectionReader grid(find("grid"), "grid", errs);
    if (grid.present()) {
        if (const auto v = grid.get_integer("n")) cfg.n = *v;
        if (const auto v = grid.get_integer("N")) cfg.N = *v;
        if (const auto v = grid.get_double("L")) cfg.L = *v;
        if (const auto raw = grid.get("hbar")) {
            for (const auto& tok : detail::split_ws(*raw)) {
                const auto v = detail::parse_double(tok);
                if (!v || !(*v > 0.0)) errs.push_back("[grid] hbar entry is not a positive number: '" + tok + "'");
                else cfg.hbars.push_back(*v);
            }
        }
        grid.finish();
    } else if (needs_problem) {
        errs.push_back("missing [grid] section");
    }

    if (needs_problem) {
        if (cfg.n < 1 || cfg.n > 3) errs.push_back("[grid] n must be 1, 2, or 3");
        if (cfg.mode == RunMode::Converge) {
            if (cfg.N != 0) errs.push_back("[grid] N does not apply to converge, it is derived from each hbar");
            if (!(cfg.L > 0.0)) errs.push_back("[grid] converge requires L > 0");
            if (cfg.hbars.size() < 2) errs.push_back("[grid] converge requires at least two hbar values");
            for (std::size_t i = 0; i + 1 < cfg.hbars.size(); ++i)
                if (!(cfg.hbars[i + 1] < cfg.hbars[i])) errs.push_back("[grid] hbar list must be strictly decreasing");
            if (cfg.L > 0.0) {
                for (double h : cfg.hbars) {
                    const double ratio = cfg.L / h;
                    const long long Nh = std::llround(ratio);
                    if (Nh < 2 || std::abs(ratio - static_cast<double>(Nh)) > 1e-9 * ratio || Nh % 2 != 0)
                        errs.push_back("[grid] hbar=" + detail::format_double(h) + ": N=L/hbar not an even integer");
                }
            }
        } else {
            if (cfg.hbars.size() != 1) errs.push_back("[grid] " + std::string(to_string(cfg.mode)) + " requires exactly one hbar");
            if (cfg.N < 2 || cfg.N % 2 != 0) errs.push_back("[grid] N must be an even integer >= 2");
            if (!cfg.hbars.empty() && !(cfg.hbars.front() > 0.0)) errs.push_back("[grid] hbar must be positive");
            if (cfg.L > 0.0 && !cfg.hbars.empty() && cfg.N > 0 && std::abs(cfg.N * cfg.hbars.front() - cfg.L) > 1e-9 * cfg.L)
                errs.push_back("[grid] L does not equal N * hbar");
            if (cfg.L == 0.0 && !cfg.hbars.empty() && cfg.N > 0) cfg.L = cfg.N * cfg.hbars.front();
        }
    }

    detail::SectionReader ca(find("a"), "a", errs);
    if (ca.present()) detail::validate_coeff(cfg.a, "a", false, ca, errs);
    else if (needs_problem) errs.push_back("missing [a] section");

    detail::SectionReader cb(find("b"), "b", errs);
    if (cb.present()) detail::validate_coeff(cfg.b, "b", true, cb, errs);
    else if (needs_problem) errs.push_back("missing [b] section");

    detail::SectionReader data(find("data"), "data", errs);
    if (data.present()) {
        const auto preset = data.get("preset");
        const auto dm = data.get_integer("m");
        const auto band = data.get_integer("band");
        const auto u0re = data.get_double("u0_re");
        const auto u0im = data.get_double("u0_im");
        const auto u1re = data.get_double("u1_re");
        const auto u1im = data.get_double("u1_im");
        if (dm) cfg.data.m = *dm;
        if (band) cfg.data.band = *band;
        if (u0re) cfg.data.u0_amp.real(*u0re);
        if (u0im) cfg.data.u0_amp.imag(*u0im);
        if (u1re) cfg.data.u1_amp.real(*u1re);
        if (u1im) cfg.data.u1_amp.imag(*u1im);
        const auto u0_lines = data.get_all("u0");
        const auto u1_lines = data.get_all("u1");
        data.finish();
        if (!preset) {
            errs.push_back("[data] requires 'preset'");
        } else {
            cfg.data.preset = *preset;
            const bool is_series = *preset == "series";
            const bool is_single = *preset == "single_mode";
            const bool is_gauss = *preset == "gaussian_series";
            if (*preset != "delta" && !is_gauss && !is_single && !is_series) errs.push_back("[data] unknown preset '" + *preset + "'");
            // a grid delta has no fixed band, so there is no continuum limit to converge to
            if (*preset == "delta" && cfg.mode == RunMode::Converge) errs.push_back("[data] preset delta does not apply to converge");
            auto reject = [&](bool given, const char* key) {
                if (given) errs.push_back("key '" + std::string(key) + "' does not apply to preset " + *preset + " in [data]");
            };
            reject(dm.has_value() && !is_single, "m");
            reject(band.has_value() && !is_gauss, "band");
            reject((u0re.has_value() || u0im.has_value() || u1re.has_value() || u1im.has_value()) && !is_single, "u0_re/u0_im/u1_re/u1_im");
            if (!is_series && (!u0_lines.empty() || !u1_lines.empty())) errs.push_back("[data] u0/u1 term lines apply to preset series only");
            if (is_series && u0_lines.empty() && u1_lines.empty()) errs.push_back("[data] preset series needs at least one u0 or u1 term");
            if (is_gauss && cfg.data.band < 1) errs.push_back("[data] gaussian_series band must be >= 1");
            detail::parse_terms(u0_lines, cfg.n, "u0", "data", cfg.data.u0_terms, errs);
            detail::parse_terms(u1_lines, cfg.n, "u1", "data", cfg.data.u1_terms, errs);
        }
    } else if (needs_problem) {
        errs.push_back("missing [data] section");
    }

    detail::SectionReader forcing(find("forcing"), "forcing", errs);
    if (forcing.present()) {
        const auto fkind = forcing.get("kind");
        const auto fm = forcing.get_integer("m");
        const auto fomega = forcing.get_double("omega");
        const auto fre = forcing.get_double("f_re");
        const auto fim = forcing.get_double("f_im");
        if (fkind) cfg.forcing.kind = *fkind;
        if (fm) cfg.forcing.m = *fm;
        if (fomega) cfg.forcing.omega = *fomega;
        if (fre) cfg.forcing.amp.real(*fre);
        if (fim) cfg.forcing.amp.imag(*fim);
        forcing.finish();
        const bool is_zero = cfg.forcing.kind == "zero";
        const bool is_cos = cfg.forcing.kind == "cosine";
        if (!is_zero && !is_cos && cfg.forcing.kind != "one")
            errs.push_back("[forcing] kind must be zero, one, or cosine, got '" + cfg.forcing.kind + "'");
        if (is_zero && (fm || fomega || fre || fim)) errs.push_back("[forcing] kind zero takes no other keys");
        if (!is_cos && fomega) errs.push_back("key 'omega' does not apply to kind " + cfg.forcing.kind + " in [forcing]");
    }

    if (!errs.empty()) throw ConfigError(std::move(errs));
    return cfg;
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    using detail::format_double;
    std::string out;
    out += "[run]\n";
    out += "mode = " + std::string(to_string(cfg.mode)) + "\n";
    out += "T = " + format_double(cfg.T) + "\n";
    out += "ode_tol = " + format_double(cfg.ode_tol) + "\n";
    if (cfg.s != 0.0) out += "s = " + format_double(cfg.s) + "\n";
    if (cfg.l != 0) out += "l = " + std::to_string(cfg.l) + "\n";
    out += "output = " + cfg.output + "\n";
    if (cfg.workers != 0) out += "workers = " + std::to_string(cfg.workers) + "\n";

    if (cfg.mode != RunMode::Selftest) {
        out += "\n[grid]\n";
        out += "n = " + std::to_string(cfg.n) + "\n";
        if (cfg.mode != RunMode::Converge) out += "N = " + std::to_string(cfg.N) + "\n";
        out += "hbar =";
        for (double h : cfg.hbars) out += " " + format_double(h);
        out += "\n";
        if (cfg.L > 0.0) out += "L = " + format_double(cfg.L) + "\n";

        auto emit_coeff = [&](const CoeffConfig& c, const char* name, bool is_b) {
            out += std::string("\n[") + name + "]\n";
            out += "kind = " + c.kind + "\n";
            if (!c.case_tag.empty()) out += "case_tag = " + c.case_tag + "\n";
            if (is_b || c.kind == "constant" || c.kind == "linear" || c.kind == "abs_sin") out += "c0 = " + format_double(c.c0) + "\n";
            if (!is_b && (c.kind == "linear" || c.kind == "abs_sin") && c.c1 != 0.0) out += "c1 = " + format_double(c.c1) + "\n";
            if (!is_b && c.kind == "abs_sin" && c.omega != 1.0) out += "omega = " + format_double(c.omega) + "\n";
            if (c.kind == "weierstrass") {
                out += "alpha = " + format_double(c.alpha) + "\n";
                if (c.depth != 12) out += "depth = " + std::to_string(c.depth) + "\n";
                if (c.floor_value != 0.0) out += "floor = " + format_double(c.floor_value) + "\n";
            }
            if (c.kind == "degenerate_smooth") {
                if (c.m != 1) out += "m = " + std::to_string(c.m) + "\n";
                if (c.l != 2) out += "l = " + std::to_string(c.l) + "\n";
            }
        };
        emit_coeff(cfg.a, "a", false);
        emit_coeff(cfg.b, "b", true);

        out += "\n[data]\n";
        out += "preset = " + cfg.data.preset + "\n";
        if (cfg.data.preset == "single_mode") {
            out += "m = " + std::to_string(cfg.data.m) + "\n";
            if (cfg.data.u0_amp != cdouble{1.0, 0.0}) {
                out += "u0_re = " + format_double(cfg.data.u0_amp.real()) + "\n";
                out += "u0_im = " + format_double(cfg.data.u0_amp.imag()) + "\n";
            }
            if (cfg.data.u1_amp != cdouble{0.0, 0.0}) {
                out += "u1_re = " + format_double(cfg.data.u1_amp.real()) + "\n";
                out += "u1_im = " + format_double(cfg.data.u1_amp.imag()) + "\n";
            }
        }
        if (cfg.data.preset == "gaussian_series" && cfg.data.band != 4) out += "band = " + std::to_string(cfg.data.band) + "\n";
        auto emit_terms = [&](const std::vector<std::pair<std::array<int, 3>, cdouble>>& terms, const char* key) {
            for (const auto& [m, c] : terms) {
                out += std::string(key) + " =";
                for (int axis = 0; axis < cfg.n; ++axis) out += " " + std::to_string(m[axis]);
                out += " " + format_double(c.real()) + " " + format_double(c.imag()) + "\n";
            }
        };
        emit_terms(cfg.data.u0_terms, "u0");
        emit_terms(cfg.data.u1_terms, "u1");

        if (cfg.forcing.kind != "zero") {
            out += "\n[forcing]\n";
            out += "kind = " + cfg.forcing.kind + "\n";
            out += "m = " + std::to_string(cfg.forcing.m) + "\n";
            if (cfg.forcing.kind == "cosine") out += "omega = " + format_double(cfg.forcing.omega) + "\n";
            if (cfg.forcing.amp != cdouble{1.0, 0.0}) {
                out += "f_re = " + format_double(cfg.forcing.amp.real()) + "\n";
                out += "f_im = " + format_double(cfg.forcing.amp.imag()) + "\n";
            }
        }
    }
    return out;
}

}  // namespace latwave
