#pragma once

// Checks of the asymptotic assertions on concrete instances: derivative
// exponent rules, the exponent identity for the Emden-Fowler right-hand
// side, exclusion of S1 solutions, vanishing subsequences of derivatives,
// the attained exponent bound, and the oscillation / monotone-decay
// dichotomy. Everything here is finite-window falsification, not proof.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "eflab/asymptotics.hpp"
#include "eflab/common.hpp"
#include "eflab/equations.hpp"
#include "eflab/extreal.hpp"
#include "eflab/ode.hpp"

namespace eflab {

enum class VerdictOutcome { Holds, Fails, NotApplicable, Undetermined };

inline const char* to_string(VerdictOutcome o) {
    switch (o) {
        case VerdictOutcome::Holds: return "holds";
        case VerdictOutcome::Fails: return "fails";
        case VerdictOutcome::NotApplicable: return "not-applicable";
        default: return "undetermined";
    }
}

struct TheoremVerdict {
    std::string clause;               // T1.i, T1.ii, T1.iii, T1.cor, T3.bound, L2
    VerdictOutcome outcome = VerdictOutcome::NotApplicable;
    std::optional<ExtReal> margin;    // inequality clauses only
    std::string details;

    bool holds() const { return outcome == VerdictOutcome::Holds; }
};

/// Derivative rules for growth classes, checked on a classified pair
/// (f, f'): (i) if both are S3 the lower exponent drops by at least one;
/// (ii) an S2 function has an S2 derivative or an S3 one with sentinel
/// lower exponent; (iii) an S1 derivative forces f itself into S1; plus
/// the corollary that a sentinel lower exponent propagates to f'.
inline std::vector<TheoremVerdict> check_theorem1(const GrowthReport& f_report,
                                                  const GrowthReport& fprime_report) {
    const bool undetermined = !f_report.confident || !fprime_report.confident;
    std::vector<TheoremVerdict> verdicts;

    auto emit = [&](std::string clause, bool applicable, bool holds,
                    std::optional<ExtReal> margin, std::string details) {
        TheoremVerdict v;
        v.clause = std::move(clause);
        if (undetermined) v.outcome = VerdictOutcome::Undetermined;
        else if (!applicable) v.outcome = VerdictOutcome::NotApplicable;
        else v.outcome = holds ? VerdictOutcome::Holds : VerdictOutcome::Fails;
        if (applicable && !undetermined) v.margin = margin;
        v.details = std::move(details);
        verdicts.push_back(std::move(v));
    };

    const bool f_s3 = f_report.growth_class == GrowthClass::S3;
    const bool fp_s3 = fprime_report.growth_class == GrowthClass::S3;

    // (i) both S3: Pi(f') <= Pi(f) - 1, slack 0.1 for estimator noise.
    {
        const bool applicable = f_s3 && fp_s3;
        bool holds = false;
        std::optional<ExtReal> margin;
        std::string details = "requires f and f' in S3";
        if (applicable) {
            const ExtReal pf = f_report.pi_hat, pfp = fprime_report.pi_hat;
            if (pfp.is_neg_inf()) {
                margin = ExtReal::pos_inf();
                holds = true;
            } else if (pf.is_neg_inf()) {
                margin = ExtReal::neg_inf();
                holds = false;
            } else {
                margin = ExtReal::finite((pf.value() - 1.0) - pfp.value());
                holds = margin->value() >= -0.1;
            }
            details = "Pi(f')=" + pfp.str() + " vs Pi(f)-1=" +
                      (pf.is_finite() ? ExtReal::finite(pf.value() - 1).str() : pf.str());
        }
        emit("T1.i", applicable, holds, margin, std::move(details));
    }

    // (ii) f in S2: f' in S2, or in S3 with sentinel lower exponent.
    {
        const bool applicable = f_report.growth_class == GrowthClass::S2;
        const bool holds = fprime_report.growth_class == GrowthClass::S2 ||
                           (fp_s3 && fprime_report.pi_hat.is_neg_inf());
        emit("T1.ii", applicable, holds, std::nullopt,
             std::string("f' classifies ") + to_string(fprime_report.growth_class));
    }

    // (iii) f' in S1 forces f in S1.
    {
        const bool applicable = fprime_report.growth_class == GrowthClass::S1;
        const bool holds = f_report.growth_class == GrowthClass::S1;
        emit("T1.iii", applicable, holds, std::nullopt,
             std::string("f classifies ") + to_string(f_report.growth_class));
    }

    // Corollary: Pi(f) = -inf propagates to Pi(f') = -inf (or f' in S2).
    {
        const bool applicable = f_s3 && f_report.pi_hat.is_neg_inf();
        const bool holds = fprime_report.growth_class == GrowthClass::S2 ||
                           (fp_s3 && fprime_report.pi_hat.is_neg_inf());
        emit("T1.cor", applicable, holds, std::nullopt,
             "Pi(f')=" + fprime_report.pi_hat.str());
    }

    return verdicts;
}

/// Residual of the composition identity Pi(phi |y|^lambda sgn y) =
/// lambda Pi(y) + Pi(phi), valid when Pi(phi) = Xi(phi). All three reports
/// must carry finite exponents.
inline double pi_identity_residual(const GrowthReport& phi_report, const GrowthReport& y_report,
                                   double lambda, const GrowthReport& composed_report) {
    if (phi_report.growth_class != GrowthClass::S3 || !phi_report.pi_hat.is_finite() ||
        !phi_report.xi_hat.is_finite())
        throw HypothesisError("pi_identity_residual: phi must be S3 with finite exponents");
    if (std::abs(phi_report.xi_hat.value() - phi_report.pi_hat.value()) > 0.05)
        throw HypothesisError("pi_identity_residual: requires Pi(phi) = Xi(phi) within 0.05");
    if (y_report.growth_class != GrowthClass::S3 || !y_report.pi_hat.is_finite())
        throw HypothesisError("pi_identity_residual: y must be S3 with finite Pi");
    if (!composed_report.pi_hat.is_finite())
        throw HypothesisError("pi_identity_residual: composed report has a sentinel exponent");
    return composed_report.pi_hat.value() -
           (lambda * y_report.pi_hat.value() + phi_report.pi_hat.value());
}

/// The exponent bound -(n + c)/(mu - 1); negative whenever mu > 1, c > -n.
inline double theorem3_bound(int n, double c, double mu) {
    if (!(mu > 1)) throw ConfigError("theorem3_bound: mu must be > 1");
    if (!(c > -n)) throw ConfigError("theorem3_bound: c must exceed -n");
    return -(n + c) / (mu - 1.0);
}

/// Candidate times t_k with y^(j)(t_k) -> 0: zero crossings plus running
/// minima of |y^(j)|, filtered to a nonincreasing-magnitude subsequence.
struct VanishingReport {
    int derivative_index = 0;
    std::vector<double> times;
    std::vector<double> values;
    bool trend_established = false;
};

namespace detail {

inline VanishingReport vanishing_from_series(const SampleSeries& series, int j) {
    VanishingReport report;
    report.derivative_index = j;

    struct Candidate {
        double t;
        double value;
        bool is_crossing;
    };
    std::vector<Candidate> candidates;

    for (double tc : sign_changes(series)) candidates.push_back({tc, 0.0, true});

    double running_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double mag = std::abs(series.values[i]);
        if (mag <= running_min) {
            running_min = mag;
            candidates.push_back({series.times[i], series.values[i], false});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.t < b.t; });

    double last_kept = std::numeric_limits<double>::infinity();
    double last_t = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        if (c.t <= last_t) continue;
        if (std::abs(c.value) <= last_kept) {
            report.times.push_back(c.t);
            report.values.push_back(c.value);
            last_kept = std::abs(c.value);
            last_t = c.t;
        }
    }

    const double t0 = series.times.front();
    const double t1 = series.times.back();
    const double final_quarter = t1 - 0.25 * (t1 - t0);
    bool crossing_in_tail = false;
    for (const auto& c : candidates)
        if (c.is_crossing && c.t >= final_quarter) crossing_in_tail = true;

    const bool decayed = report.times.size() >= 5 &&
                         std::abs(report.values.back()) <= 0.1 * std::abs(report.values.front());
    report.trend_established = decayed || crossing_in_tail;
    return report;
}

inline std::vector<double> uniform_grid(double a, double b, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = a + (b - a) * i / (count - 1);
    g.back() = b;
    return g;
}

}  // namespace detail

/// Vanishing-subsequence search for y^(j), 0 <= j <= n-1, on a trajectory
/// that reached its end time.
inline VanishingReport find_vanishing_subsequence(const Trajectory& trajectory, int j,
                                                  int grid_points = 4001) {
    if (j < 0 || j >= trajectory.order())
        throw ConfigError("find_vanishing_subsequence: j must lie in [0, n-1]");
    if (!trajectory.status().reached_end())
        throw HypothesisError("find_vanishing_subsequence: trajectory did not reach t_end");
    if (trajectory.accepted_steps() < 10)
        throw ResolutionError("find_vanishing_subsequence: trajectory too short (< 10 steps)");
    auto grid = detail::uniform_grid(trajectory.t_begin(), trajectory.t_last(), grid_points);
    return detail::vanishing_from_series(resample(trajectory, grid, j), j);
}

/// Smallest index i such that every derivative order j in [i, n] shows a
/// vanishing subsequence; i = n+1 signals falsification (not even y^(n)
/// vanishes along the window).
struct Theorem3Result {
    bool applicable = false;  // false when the solution is not on [t0, t_end]
    TerminationStatus status;
    int smallest_i = 0;
    std::vector<VanishingReport> reports;  // j = 0..n
};

inline Theorem3Result check_theorem3(const IVProblem& problem,
                                     const IntegrationControls& controls,
                                     int grid_points = 4001) {
    Theorem3Result result;
    Trajectory traj = integrate(problem, controls);
    result.status = traj.status();
    if (!traj.status().reached_end()) return result;
    result.applicable = true;

    const int n = problem.order;
    auto grid = detail::uniform_grid(traj.t_begin(), traj.t_last(), grid_points);
    for (int j = 0; j < n; ++j)
        result.reports.push_back(
            detail::vanishing_from_series(resample(traj, grid, j), j));

    // y^(n) read off the equation itself along the trajectory.
    std::vector<double> top(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        top[i] = problem.rhs(grid[i], traj.eval(grid[i], 0));
    result.reports.push_back(
        detail::vanishing_from_series(SampleSeries(grid, std::move(top), "y^(n)"), n));

    int i = n + 1;
    for (int j = n; j >= 0; --j) {
        if (!result.reports[j].trend_established) break;
        i = j;
    }
    result.smallest_i = i;
    return result;
}

/// Long-term behavior of a trajectory judged on its final window.
struct LongTermClass {
    enum class Kind { Oscillatory, MonotoneToZero, BlowUp, Undetermined };
    Kind kind = Kind::Undetermined;
    int crossing_count = 0;    // Oscillatory
    double window_start = 0;   // MonotoneToZero
    double t_star = 0;         // BlowUp
    std::string reason;        // Undetermined

    std::string str() const {
        switch (kind) {
            case Kind::Oscillatory: return "Oscillatory(" + std::to_string(crossing_count) + ")";
            case Kind::MonotoneToZero: return "MonotoneToZero";
            case Kind::BlowUp: return "BlowUp";
            default: return "Undetermined(" + reason + ")";
        }
    }
};

/// Dichotomy classification: blow-up as recorded; oscillatory when y
/// alternates sign at least 5 times in the final window; monotone decay
/// when |y| is nonincreasing there and the run as a whole has decayed to
/// at most 0.2 of |y(t0)|; Undetermined otherwise, with the reason
/// spelled out.
inline LongTermClass classify_longterm(const Trajectory& trajectory,
                                       double window_fraction = 0.25) {
    if (!(window_fraction > 0 && window_fraction <= 1))
        throw ConfigError("classify_longterm: window_fraction must lie in (0, 1]");

    LongTermClass out;
    if (trajectory.status().blew_up()) {
        out.kind = LongTermClass::Kind::BlowUp;
        out.t_star = trajectory.status().where;
        return out;
    }
    if (!trajectory.status().reached_end()) {
        out.kind = LongTermClass::Kind::Undetermined;
        out.reason = "integration ended early: " + trajectory.status().str();
        return out;
    }

    const double t0 = trajectory.t_begin();
    const double t1 = trajectory.t_last();
    const double w0 = t1 - window_fraction * (t1 - t0);
    auto grid = detail::uniform_grid(w0, t1, 2001);
    SampleSeries window = resample(trajectory, grid, 0);

    const int alternations = count_alternations(window);
    if (alternations >= 5) {
        out.kind = LongTermClass::Kind::Oscillatory;
        out.crossing_count = alternations;
        return out;
    }

    bool nonincreasing = true;
    for (std::size_t i = 1; i < window.size(); ++i) {
        if (std::abs(window.values[i]) >
            std::abs(window.values[i - 1]) * (1.0 + 1e-9) + 1e-300) {
            nonincreasing = false;
            break;
        }
    }
    // Decay is judged over the whole run: a quarter-window of a power-law
    // decay loses far less than the 0.2 factor, but the run as a whole must.
    const double head = std::abs(trajectory.state(0, 0));
    const double tail = std::abs(window.values.back());
    if (nonincreasing && tail <= 0.2 * head) {
        out.kind = LongTermClass::Kind::MonotoneToZero;
        out.window_start = w0;
        return out;
    }

    out.kind = LongTermClass::Kind::Undetermined;
    if (!nonincreasing)
        out.reason = "only " + std::to_string(alternations) +
                     " sign changes and |y| not monotone in the final window";
    else
        out.reason = "|y| monotone but decayed only to " +
                     std::to_string(head > 0 ? tail / head : 1.0) + " of |y(t0)|";
    return out;
}

/// One initial condition of a Lemma-2 scan.
struct Lemma2Entry {
    std::vector<double> init;
    TerminationStatus status;
    std::optional<GrowthReport> report;  // present for classified ReachedEnd runs
    std::string note;
};

/// Scan outcome: the lemma survives falsification when no trajectory that
/// exists on the whole window classifies S1 with confidence. Blow-ups are
/// consistent with the lemma (no solution on [a, inf)) and tallied apart.
struct Lemma2Report {
    std::string equation_label;
    bool passed = true;
    bool samples_only = true;
    int blowup_count = 0;
    int reached_count = 0;
    int stepfail_count = 0;
    std::vector<Lemma2Entry> entries;
};

inline Lemma2Report lemma2_harness(const EFEquation& equation, double t0,
                                   const std::vector<std::vector<double>>& ic_grid,
                                   const IntegrationControls& controls,
                                   const ClassifierConfig& config = {}, int jobs = 1) {
    equation.validate();
    if (!equation.superlinear())
        throw ConfigError("lemma2_harness: requires a superlinear equation (lambda > 1)");
    for (const auto& ic : ic_grid)
        if (static_cast<int>(ic.size()) != equation.order)
            throw ConfigError("lemma2_harness: initial vector length must equal the order");
    const double classify_from = std::max(t0, 1.0);
    if (!(controls.t_end > classify_from * 1.5))
        throw ConfigError("lemma2_harness: t_end leaves no classification window above t = 1");

    Lemma2Report report;
    report.equation_label = equation.label();
    report.entries.resize(ic_grid.size());

    auto run_one = [&](std::size_t idx) {
        Lemma2Entry entry;
        entry.init = ic_grid[idx];
        try {
            Trajectory traj = integrate(make_problem(equation, t0, ic_grid[idx]), controls);
            entry.status = traj.status();
            if (traj.status().reached_end()) {
                try {
                    auto grid = geometric_grid(classify_from, traj.t_last(), config.grid_ratio);
                    entry.report = classify_growth(resample(traj, grid, 0), config);
                } catch (const ResolutionError& e) {
                    entry.note = e.what();
                }
            }
        } catch (const std::exception& e) {
            // per-IC failures are recorded, never thrown out of a worker
            entry.status = {TerminationStatus::Kind::StepFailure, t0};
            entry.note = e.what();
        }
        report.entries[idx] = std::move(entry);
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < ic_grid.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t stride = static_cast<std::size_t>(jobs);
        for (std::size_t w = 0; w < stride; ++w)
            pool.emplace_back([&, w]() {
                for (std::size_t i = w; i < ic_grid.size(); i += stride) run_one(i);
            });
        for (auto& th : pool) th.join();
    }

    for (const auto& entry : report.entries) {
        switch (entry.status.kind) {
            case TerminationStatus::Kind::BlowUp: ++report.blowup_count; break;
            case TerminationStatus::Kind::ReachedEnd: ++report.reached_count; break;
            default: ++report.stepfail_count; break;
        }
        if (entry.report && entry.report->growth_class == GrowthClass::S1 &&
            entry.report->confident)
            report.passed = false;
    }
    return report;
}

}  // namespace eflab
