#pragma once

// The Emden-Fowler right-hand-side family y^(n) = phi(t)|y|^lambda sgn y:
// a catalog of phi functions with known growth exponents, exact power-law
// particular solutions, and finite-sample falsification checkers for the
// superlinear-case assumptions on F.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eflab/asymptotics.hpp"
#include "eflab/common.hpp"
#include "eflab/extreal.hpp"
#include "eflab/ode.hpp"

namespace eflab {

inline int sgn(double x) { return (x > 0) - (x < 0); }

/// A coefficient function phi with (when known) its exact growth exponents
/// and a classification horizon that keeps evaluation inside double range.
class PhiSpec {
  public:
    enum class Tag { Power, ExpRoot, ExpQuadratic, OscillatingMix, BoundedOscillation, Custom };

    static PhiSpec power(double coefficient, double sigma) {
        if (coefficient == 0.0) throw ConfigError("PhiSpec::power: coefficient must be nonzero");
        PhiSpec p;
        p.tag_ = Tag::Power;
        p.coefficient_ = coefficient;
        p.sigma_ = sigma;
        p.known_pi_ = ExtReal::finite(sigma);
        p.known_xi_ = ExtReal::finite(sigma);
        p.horizon_ = 1e6;
        return p;
    }

    /// e^{+sqrt t} (sign=+1) or e^{-sqrt t} (sign=-1).
    static PhiSpec exp_root(int sign) {
        PhiSpec p;
        p.tag_ = Tag::ExpRoot;
        p.sign_ = require_sign(sign);
        p.known_pi_ = sign > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
        p.known_xi_ = p.known_pi_;
        p.horizon_ = 1e5;
        return p;
    }

    /// e^{+t^2} or e^{-t^2}; overflows fast, hence the short horizon.
    static PhiSpec exp_quadratic(int sign) {
        PhiSpec p;
        p.tag_ = Tag::ExpQuadratic;
        p.sign_ = require_sign(sign);
        p.known_pi_ = sign > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
        p.known_xi_ = p.known_pi_;
        p.horizon_ = 25.0;
        return p;
    }

    /// t + e^t cos t. Only the upper exponent is recorded: the function
    /// vanishes in every period at large t, so the lower envelope gives
    /// the -inf sentinel rather than the polynomial exponent; see the
    /// discrepancy note emitted by the corpus runner.
    static PhiSpec oscillating_mix() {
        PhiSpec p;
        p.tag_ = Tag::OscillatingMix;
        p.known_xi_ = ExtReal::pos_inf();
        p.horizon_ = 200.0;
        return p;
    }

    /// t (2 + cos t): oscillation squeezed between t and 3t.
    static PhiSpec bounded_oscillation() {
        PhiSpec p;
        p.tag_ = Tag::BoundedOscillation;
        p.known_pi_ = ExtReal::finite(1.0);
        p.known_xi_ = ExtReal::finite(1.0);
        p.horizon_ = 1e6;
        return p;
    }

    static PhiSpec custom(std::function<double(double)> evaluator, std::string label,
                          std::optional<ExtReal> known_pi = std::nullopt,
                          std::optional<ExtReal> known_xi = std::nullopt,
                          double horizon = 1e6) {
        if (!evaluator) throw ConfigError("PhiSpec::custom: missing evaluator");
        PhiSpec p;
        p.tag_ = Tag::Custom;
        p.custom_ = std::move(evaluator);
        p.custom_label_ = std::move(label);
        p.known_pi_ = known_pi;
        p.known_xi_ = known_xi;
        p.horizon_ = horizon;
        return p;
    }

    double operator()(double t) const {
        switch (tag_) {
            case Tag::Power:
                if (t <= 0.0 && needs_positive_t())
                    throw DomainError("phi=power(sigma=" + std::to_string(sigma_) +
                                      ") undefined at t=" + std::to_string(t));
                return coefficient_ * std::pow(t, sigma_);
            case Tag::ExpRoot:
                if (t < 0.0) throw DomainError("phi=exp_root undefined for t < 0");
                return std::exp(sign_ * std::sqrt(t));
            case Tag::ExpQuadratic:
                return std::exp(sign_ * t * t);
            case Tag::OscillatingMix:
                return t + std::exp(t) * std::cos(t);
            case Tag::BoundedOscillation:
                return t * (2.0 + std::cos(t));
            default:
                return custom_(t);
        }
    }

    Tag tag() const { return tag_; }
    double coefficient() const { return coefficient_; }
    double sigma() const { return sigma_; }
    int sign() const { return sign_; }
    std::optional<ExtReal> known_pi() const { return known_pi_; }
    std::optional<ExtReal> known_xi() const { return known_xi_; }
    double classification_horizon() const { return horizon_; }

    /// True when evaluation requires t > 0 (fractional or negative powers).
    bool needs_positive_t() const {
        return tag_ == Tag::Power && (sigma_ < 0 || sigma_ != std::floor(sigma_));
    }

    /// Smallest t0 this phi admits as an integration start.
    double min_t0() const {
        if (needs_positive_t()) return std::nexttoward(0.0, 1.0);
        if (tag_ == Tag::ExpRoot) return 0.0;
        return -std::numeric_limits<double>::infinity();
    }

    std::string label() const {
        switch (tag_) {
            case Tag::Power: {
                char buf[80];
                std::snprintf(buf, sizeof(buf), "power(%g, %g)", coefficient_, sigma_);
                return buf;
            }
            case Tag::ExpRoot: return sign_ > 0 ? "exp_root(+1)" : "exp_root(-1)";
            case Tag::ExpQuadratic: return sign_ > 0 ? "exp_quadratic(+1)" : "exp_quadratic(-1)";
            case Tag::OscillatingMix: return "oscillating_mix";
            case Tag::BoundedOscillation: return "bounded_oscillation";
            default: return custom_label_.empty() ? "custom" : custom_label_;
        }
    }

    /// Scenario-file tag name.
    std::string tag_name() const {
        switch (tag_) {
            case Tag::Power: return "power";
            case Tag::ExpRoot: return "exp_root";
            case Tag::ExpQuadratic: return "exp_quadratic";
            case Tag::OscillatingMix: return "oscillating_mix";
            case Tag::BoundedOscillation: return "bounded_oscillation";
            default: return "custom";
        }
    }

  private:
    PhiSpec() = default;
    static int require_sign(int s) {
        if (s != 1 && s != -1) throw ConfigError("PhiSpec: sign must be +1 or -1");
        return s;
    }

    Tag tag_ = Tag::Power;
    double coefficient_ = 1.0;
    double sigma_ = 0.0;
    int sign_ = 1;
    std::function<double(double)> custom_;
    std::string custom_label_;
    std::optional<ExtReal> known_pi_;
    std::optional<ExtReal> known_xi_;
    double horizon_ = 1e6;
};

/// The equation family y^(n) = phi(t) |y|^lambda sgn y.
struct EFEquation {
    int order = 2;
    PhiSpec phi = PhiSpec::power(1.0, 0.0);
    double lambda = 2.0;

    bool superlinear() const { return lambda > 1.0; }

    void validate() const {
        if (order < 1) throw ConfigError("EFEquation: order must be >= 1");
        if (!(lambda > 0)) throw ConfigError("EFEquation: lambda must be > 0");
    }

    std::string label() const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "y^(%d) = %s * |y|^%g sgn y", order,
                      phi.label().c_str(), lambda);
        return buf;
    }
};

/// (t, y) -> phi(t) |y|^lambda sgn y. Odd in y; F(t, 0) = 0 since sgn(0)=0.
inline std::function<double(double, double)> make_ef_rhs(const EFEquation& equation) {
    equation.validate();
    const PhiSpec phi = equation.phi;
    const double lambda = equation.lambda;
    return [phi, lambda](double t, double y) {
        const int s = sgn(y);
        if (s == 0) return 0.0;
        return phi(t) * std::pow(std::abs(y), lambda) * s;
    };
}

/// Builds a ready-to-integrate problem for an EF equation.
inline IVProblem make_problem(const EFEquation& equation, double t0, std::vector<double> init,
                              std::string label = "") {
    equation.validate();
    if (!(t0 >= equation.phi.min_t0()))
        throw ConfigError("make_problem: t0=" + std::to_string(t0) + " outside the domain of phi=" +
                          equation.phi.label());
    IVProblem p;
    p.order = equation.order;
    p.rhs = make_ef_rhs(equation);
    p.t0 = t0;
    p.init = std::move(init);
    p.label = label.empty() ? equation.label() : std::move(label);
    return p;
}

/// The Thomas-Fermi special case y'' = t^{-1/2} y^{3/2}. Starts require
/// t0 >= 1: the coefficient is singular at t = 0 and only the t -> infinity
/// regime is studied.
struct ThomasFermiPreset {
    EFEquation equation{2, PhiSpec::power(1.0, -0.5), 1.5};

    IVProblem make_problem(double t0, double y0, double y1) const {
        if (!(t0 >= 1.0)) throw ConfigError("thomas_fermi_preset: t0 must be >= 1");
        return eflab::make_problem(equation, t0, {y0, y1}, "thomas_fermi");
    }
};

inline ThomasFermiPreset thomas_fermi_preset() { return {}; }

/// Parameters of the superlinear-case assumptions: nu for assumption (i),
/// (mu, c) for assumption (ii).
struct AssumptionParams {
    double nu;
    double mu;
    double c;

    void validate(int order) const {
        if (!(nu > 1)) throw ConfigError("AssumptionParams: nu must be > 1");
        if (!(mu > 1)) throw ConfigError("AssumptionParams: mu must be > 1");
        if (!(c > -order)) throw ConfigError("AssumptionParams: c must exceed -n");
    }
};

/// Exact solution sign * C * t^m of y^(n) = phi0 t^sigma |y|^lambda sgn y,
/// with m = (sigma + n)/(1 - lambda) and C^(lambda-1) = P/phi0 where
/// P = m(m-1)...(m-n+1).
struct PowerLawSolution {
    double amplitude;          // C > 0
    double exponent;           // m
    double sigma;
    double lambda;
    int order;
    int sign;
    double falling_factorial;  // P

    double operator()(double t) const { return sign * amplitude * std::pow(t, exponent); }

    /// j-th derivative of sign * C * t^m.
    double derivative(int j, double t) const {
        double coeff = sign * amplitude;
        for (int i = 0; i < j; ++i) coeff *= exponent - i;
        return coeff * std::pow(t, exponent - j);
    }
};

inline PowerLawSolution power_law_solution(int n, double sigma, double lambda, double phi0) {
    if (n < 1) throw ConfigError("power_law_solution: order must be >= 1");
    if (!(lambda > 1)) throw ConfigError("power_law_solution: lambda must be > 1");
    if (!(sigma + n > 0)) throw ConfigError("power_law_solution: need sigma + n > 0");
    if (phi0 == 0.0) throw ConfigError("power_law_solution: phi0 must be nonzero");

    const double m = (sigma + n) / (1.0 - lambda);
    double P = 1.0;
    for (int i = 0; i < n; ++i) P *= m - i;
    if (!(P / phi0 > 0))
        throw ConstructionError("power_law_solution: no real positive amplitude, P=" +
                                std::to_string(P) + " has P/phi0 <= 0");
    const double C = std::pow(P / phi0, 1.0 / (lambda - 1.0));

    PowerLawSolution sol{C, m, sigma, lambda, n, +1, P};

    // Residual check by substitution at a handful of points.
    for (double t : {1.0, 2.0, 5.0, 10.0, 100.0}) {
        const double lhs = sol.derivative(n, t);
        const double y = sol(t);
        const double rhs = phi0 * std::pow(t, sigma) * std::pow(std::abs(y), lambda) * sgn(y);
        if (std::abs(lhs - rhs) > 1e-10 * std::abs(lhs))
            throw ConstructionError("power_law_solution: residual check failed at t=" +
                                    std::to_string(t));
    }
    return sol;
}

/// A corpus member for assumption falsification: an evaluator, the largest
/// t where it stays inside double range, and its exact lower exponent when
/// one exists.
struct CorpusFunction {
    std::string label;
    std::function<double(double)> f;
    double horizon;
    std::optional<ExtReal> known_pi;
};

inline std::vector<CorpusFunction> default_s1_corpus() {
    return {
        {"e^sqrt(t)", [](double t) { return std::exp(std::sqrt(t)); }, 1e5, std::nullopt},
        {"e^(t^2)", [](double t) { return std::exp(t * t); }, 25.0, std::nullopt},
        {"t*e^sqrt(t)", [](double t) { return t * std::exp(std::sqrt(t)); }, 1e5, std::nullopt},
    };
}

inline std::vector<CorpusFunction> default_s3_corpus() {
    std::vector<CorpusFunction> corpus;
    for (double d : {-3.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "t^%g", d);
        corpus.push_back({buf, [d](double t) { return std::pow(t, d); }, 1e6,
                          ExtReal::finite(d)});
    }
    corpus.push_back({"t(2+cos t)", [](double t) { return t * (2.0 + std::cos(t)); }, 1e6,
                      ExtReal::finite(1.0)});
    return corpus;
}

enum class EntryOutcome { Pass, Fail, Indeterminate };

inline const char* to_string(EntryOutcome o) {
    switch (o) {
        case EntryOutcome::Pass: return "PASS";
        case EntryOutcome::Fail: return "FAIL";
        default: return "INDETERMINATE";
    }
}

struct FalsificationEntry {
    std::string label;
    EntryOutcome outcome = EntryOutcome::Indeterminate;
    std::optional<GrowthReport> report;  // of the composed/ratio function
    std::optional<double> margin;        // assumption (ii) only
    std::string note;
};

/// Result of checking an assumption over a finite corpus. This is
/// falsification on samples, never a proof; samples_only stays true.
struct FalsificationReport {
    std::string assumption;
    bool passed = true;
    bool samples_only = true;
    bool empty_corpus_warning = false;
    std::vector<FalsificationEntry> entries;
};

namespace detail {

/// Samples g on a geometric grid over [1, horizon], truncating at the first
/// non-finite value (overflow trimming). Returns nullopt when too little
/// survives to classify.
inline std::optional<SampleSeries> sample_trimmed(const std::function<double(double)>& g,
                                                  double horizon, const ClassifierConfig& config,
                                                  const std::string& label) {
    auto grid = geometric_grid(1.0, horizon, config.grid_ratio);
    std::vector<double> ts, vs;
    ts.reserve(grid.size());
    vs.reserve(grid.size());
    for (double t : grid) {
        const double v = g(t);
        if (!std::isfinite(v)) break;
        ts.push_back(t);
        vs.push_back(v);
    }
    if (ts.size() < 64) return std::nullopt;
    return SampleSeries(std::move(ts), std::move(vs), label);
}

}  // namespace detail

/// Assumption (i): F(., f(.))/f(.)^nu should land back in S1 for S1 corpus
/// functions. Overflowing entries are Indeterminate, not failures.
inline FalsificationReport check_assumption_i(const std::function<double(double, double)>& F,
                                              double nu,
                                              const std::vector<CorpusFunction>& corpus,
                                              double horizon,
                                              const ClassifierConfig& config = {}) {
    if (!(nu > 1)) throw ConfigError("check_assumption_i: nu must be > 1");
    FalsificationReport report;
    report.assumption = "i";
    if (corpus.empty()) {
        report.empty_corpus_warning = true;
        return report;
    }
    for (const auto& entry : corpus) {
        FalsificationEntry out;
        out.label = entry.label;
        const double eff_horizon = std::min(horizon, entry.horizon);
        auto ratio = [&](double t) {
            const double ft = entry.f(t);
            if (!(ft > 0))
                throw HypothesisError("check_assumption_i: corpus function " + entry.label +
                                      " not positive at t=" + std::to_string(t));
            return F(t, ft) / std::pow(ft, nu);
        };
        auto series = detail::sample_trimmed(ratio, eff_horizon, config, entry.label);
        if (!series) {
            out.outcome = EntryOutcome::Indeterminate;
            out.note = "ratio overflows before enough samples accumulate";
        } else {
            try {
                GrowthReport rep = classify_growth(*series, config);
                out.report = rep;
                out.outcome = rep.growth_class == GrowthClass::S1 ? EntryOutcome::Pass
                                                                  : EntryOutcome::Fail;
                if (out.outcome == EntryOutcome::Fail)
                    out.note = std::string("ratio classifies ") + to_string(rep.growth_class);
            } catch (const ResolutionError& e) {
                out.outcome = EntryOutcome::Indeterminate;
                out.note = e.what();
            }
        }
        if (out.outcome == EntryOutcome::Fail) report.passed = false;
        report.entries.push_back(std::move(out));
    }
    return report;
}

/// Assumption (ii): the composed function F(., f(.)) stays in S3 with
/// lower exponent at least mu*Pi(f) + c (slack 0.1 for estimator noise).
inline FalsificationReport check_assumption_ii(const std::function<double(double, double)>& F,
                                               const AssumptionParams& params, int n,
                                               const std::vector<CorpusFunction>& corpus,
                                               const ClassifierConfig& config = {}) {
    params.validate(n);
    FalsificationReport report;
    report.assumption = "ii";
    if (corpus.empty()) {
        report.empty_corpus_warning = true;
        return report;
    }
    for (const auto& entry : corpus) {
        FalsificationEntry out;
        out.label = entry.label;

        ExtReal pi_f;
        if (entry.known_pi) {
            pi_f = *entry.known_pi;
        } else {
            auto fs = detail::sample_trimmed(entry.f, entry.horizon, config, entry.label);
            if (!fs) {
                out.outcome = EntryOutcome::Indeterminate;
                out.note = "corpus function overflows; Pi estimate unavailable";
                report.entries.push_back(std::move(out));
                continue;
            }
            pi_f = classify_growth(*fs, config).pi_hat;
        }
        if (!pi_f.is_finite()) {
            out.outcome = EntryOutcome::Indeterminate;
            out.note = "corpus function lacks a finite Pi estimate";
            report.entries.push_back(std::move(out));
            continue;
        }

        auto composed = [&](double t) { return F(t, entry.f(t)); };
        auto series = detail::sample_trimmed(composed, entry.horizon, config,
                                             "F(., " + entry.label + ")");
        if (!series) {
            out.outcome = EntryOutcome::Indeterminate;
            out.note = "composed function overflows before enough samples accumulate";
            report.entries.push_back(std::move(out));
            continue;
        }
        GrowthReport rep = classify_growth(*series, config);
        out.report = rep;
        if (rep.growth_class != GrowthClass::S3 || !rep.pi_hat.is_finite()) {
            out.outcome = EntryOutcome::Fail;
            out.note = std::string("composed function classifies ") +
                       to_string(rep.growth_class) +
                       (rep.growth_class == GrowthClass::S3 ? " with sentinel Pi" : "");
        } else {
            const double bound = params.mu * pi_f.value() + params.c;
            out.margin = rep.pi_hat.value() - bound;
            out.outcome = *out.margin >= -0.1 ? EntryOutcome::Pass : EntryOutcome::Fail;
            if (out.outcome == EntryOutcome::Fail) out.note = "exponent bound violated";
        }
        if (out.outcome == EntryOutcome::Fail) report.passed = false;
        report.entries.push_back(std::move(out));
    }
    return report;
}

}  // namespace eflab
