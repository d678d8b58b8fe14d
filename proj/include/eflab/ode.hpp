#pragma once

// Adaptive integration of n-th order scalar initial-value problems
// y^(n) = F(t, y), reduced to a first-order system. The stepper is the
// Dormand-Prince embedded 5(4) pair with PI step-size control, a quartic
// dense-output interpolant per accepted step, interpolant bisection for
// finite-time blow-up location, and zero-crossing extraction on sampled
// series. Explicit method only; stiff problems are out of scope.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eflab/common.hpp"
#include "eflab/series.hpp"

namespace eflab {

/// An n-th order scalar IVP: y^(n) = rhs(t, y) with the derivative stack
/// (y, y', ..., y^(n-1)) given at t0.
struct IVProblem {
    int order = 1;
    std::function<double(double, double)> rhs;
    double t0 = 0.0;
    std::vector<double> init;
    std::string label;

    void validate() const {
        if (order < 1) throw ConfigError("IVProblem: order must be >= 1");
        if (!rhs) throw ConfigError("IVProblem: missing right-hand side");
        if (!std::isfinite(t0)) throw ConfigError("IVProblem: t0 not finite");
        if (static_cast<int>(init.size()) != order)
            throw ConfigError("IVProblem: init must hold exactly `order` entries");
        for (double v : init)
            if (!std::isfinite(v)) throw ConfigError("IVProblem: non-finite initial value");
    }
};

struct IntegrationControls {
    double rtol = 1e-9;
    double atol = 1e-12;
    double t_end = 0.0;
    double max_step = 0.0;           // 0: use t_end - t0
    double blowup_threshold = 1e12;
    double min_step = 0.0;           // 0: use 1e-13 * (t_end - t0)

    struct Resolved {
        double rtol, atol, t_end, max_step, blowup_threshold, min_step;
    };

    Resolved resolve(double t0) const {
        if (!(rtol > 0)) throw ConfigError("IntegrationControls: rtol must be > 0");
        if (!(atol > 0)) throw ConfigError("IntegrationControls: atol must be > 0");
        if (!(t_end > t0)) throw ConfigError("IntegrationControls: t_end must exceed t0");
        if (!(blowup_threshold > 0))
            throw ConfigError("IntegrationControls: blowup_threshold must be > 0");
        Resolved r;
        r.rtol = rtol;
        r.atol = atol;
        r.t_end = t_end;
        r.blowup_threshold = blowup_threshold;
        r.max_step = max_step > 0 ? max_step : (t_end - t0);
        r.min_step = min_step > 0 ? min_step : 1e-13 * (t_end - t0);
        if (!(r.min_step > 0 && r.min_step < r.max_step))
            throw ConfigError("IntegrationControls: need 0 < min_step < max_step");
        return r;
    }
};

struct TerminationStatus {
    enum class Kind { ReachedEnd, BlowUp, StepFailure };
    Kind kind = Kind::ReachedEnd;
    double where = 0.0;  // t* for BlowUp, t_fail for StepFailure

    bool reached_end() const { return kind == Kind::ReachedEnd; }
    bool blew_up() const { return kind == Kind::BlowUp; }

    std::string str() const {
        switch (kind) {
            case Kind::ReachedEnd: return "ReachedEnd";
            case Kind::BlowUp: return "BlowUp(t*=" + std::to_string(where) + ")";
            default: return "StepFailure(t=" + std::to_string(where) + ")";
        }
    }
};

/// First-order system map for Eq. y^(n) = F(t, y): shifts the derivative
/// stack and closes with the right-hand side. Pure.
inline std::vector<double> state_derivative(const IVProblem& problem, double t,
                                            std::span<const double> state) {
    if (static_cast<int>(state.size()) != problem.order)
        throw ConfigError("state_derivative: state size mismatch");
    std::vector<double> d(state.size());
    for (std::size_t i = 0; i + 1 < state.size(); ++i) d[i] = state[i + 1];
    const double f = problem.rhs(t, state[0]);
    if (!std::isfinite(f))
        throw RhsEvaluationError(t, state[0],
                                 "rhs evaluation not finite at t=" + std::to_string(t) +
                                     ", y=" + std::to_string(state[0]));
    d.back() = f;
    return d;
}

namespace detail {

// Dormand-Prince 5(4) tableau, error weights and dense-output weights.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

inline constexpr double kSafety = 0.9;
inline constexpr double kBeta = 0.04;      // Lund stabilization exponent
inline constexpr double kFacMin = 0.2;     // sharpest allowed step decrease
inline constexpr double kFacMax = 10.0;    // largest allowed step increase

/// One trial Dormand-Prince step. `sys` maps (t, state, out) and throws
/// RhsEvaluationError on non-finite values. k[0] must hold sys(t, y) on
/// entry (FSAL); fills k[1..6], the 5th-order result y5 and the embedded
/// error estimate per component.
template <typename Sys>
void dopri5_stages(Sys&& sys, double t, const std::vector<double>& y, double h,
                   std::array<std::vector<double>, 7>& k, std::vector<double>& y5,
                   std::vector<double>& err) {
    const std::size_t n = y.size();
    std::vector<double> w(n);

    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] + h * a21 * k[0][i];
    sys(t + c2 * h, w, k[1]);
    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    sys(t + c3 * h, w, k[2]);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    sys(t + c4 * h, w, k[3]);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    sys(t + c5 * h, w, k[4]);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] +
               h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                    a65 * k[4][i]);
    sys(t + h, w, k[5]);
    for (std::size_t i = 0; i < n; ++i)
        y5[i] = y[i] +
                h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                     a76 * k[5][i]);
    sys(t + h, y5, k[6]);
    for (std::size_t i = 0; i < n; ++i)
        err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                      e7 * k[6][i]);
}

/// Fixed-step driver without error control; used by convergence-order tests.
template <typename Sys>
std::vector<double> dopri5_fixed(Sys&& sys, double t0, std::vector<double> y, double t_end,
                                 int steps) {
    const double h = (t_end - t0) / steps;
    const std::size_t n = y.size();
    std::array<std::vector<double>, 7> k;
    for (auto& ki : k) ki.resize(n);
    std::vector<double> y5(n), err(n);
    double t = t0;
    for (int s = 0; s < steps; ++s) {
        sys(t, y, k[0]);
        dopri5_stages(sys, t, y, h, k, y5, err);
        y = y5;
        t = t0 + (s + 1) * (t_end - t0) / steps;
    }
    return y;
}

/// Standard initial step-size heuristic (scaled norms of f and an Euler probe).
template <typename Sys>
double initial_step(Sys&& sys, double t0, const std::vector<double>& y0,
                    const std::vector<double>& f0, double atol, double rtol, double max_step) {
    const std::size_t n = y0.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = atol + rtol * std::abs(y0[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y0[i] / sk) * (y0[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, max_step);

    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
    double der2 = 0.0;
    try {
        sys(t0 + h, y1, f1);
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = atol + rtol * std::abs(y0[i]);
            der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
        }
        der2 = std::sqrt(der2) / h;
    } catch (const RhsEvaluationError&) {
        der2 = 0.0;
    }
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                       : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, max_step});
}

}  // namespace detail

/// Dense numerical solution: accepted times, the state matrix, a quartic
/// interpolant per step interval, and how the run ended.
class Trajectory {
  public:
    Trajectory(int order, TerminationStatus status, std::vector<double> times,
               std::vector<double> states_flat, std::vector<double> dense_flat,
               std::vector<double> spans, long accepted, long rejected)
        : order_(order),
          status_(status),
          times_(std::move(times)),
          states_(std::move(states_flat)),
          dense_(std::move(dense_flat)),
          spans_(std::move(spans)),
          accepted_steps_(accepted),
          rejected_steps_(rejected) {}

    int order() const { return order_; }
    const TerminationStatus& status() const { return status_; }
    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    long accepted_steps() const { return accepted_steps_; }
    long rejected_steps() const { return rejected_steps_; }

    double time(std::size_t i) const { return times_[i]; }
    double state(std::size_t i, int j) const { return states_[i * order_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return {states_.data() + i * order_, static_cast<std::size_t>(order_)};
    }

    double t_begin() const { return times_.front(); }
    double t_last() const { return times_.back(); }

    /// Dense evaluation of y^(j) at time t within [t_begin, t_last].
    /// Accepted-step endpoints return the stored states exactly.
    double eval(double t, int j) const {
        if (j < 0 || j >= order_) throw DomainError("Trajectory::eval: derivative index out of range");
        if (t < t_begin() || t > t_last())
            throw DomainError("Trajectory::eval: t=" + std::to_string(t) +
                              " outside trajectory domain [" + std::to_string(t_begin()) + ", " +
                              std::to_string(t_last()) + "]");
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        if (it != times_.end() && *it == t)
            return state(static_cast<std::size_t>(it - times_.begin()), j);
        const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
        // spans_ holds the step length the interpolant was built over; the
        // final interval of a blow-up run is a truncated piece of it.
        const double theta = (t - times_[i]) / spans_[i];
        const double* c = dense_.data() + i * 5 * order_;
        const double c1 = c[0 * order_ + j], c2 = c[1 * order_ + j], c3 = c[2 * order_ + j],
                     c4 = c[3 * order_ + j], c5 = c[4 * order_ + j];
        const double omt = 1.0 - theta;
        return c1 + theta * (c2 + omt * (c3 + theta * (c4 + omt * c5)));
    }

  private:
    int order_;
    TerminationStatus status_;
    std::vector<double> times_;
    std::vector<double> states_;  // row-major, `order_` columns
    std::vector<double> dense_;   // 5 * order_ coefficients per interval
    std::vector<double> spans_;   // original step length per interval
    long accepted_steps_;
    long rejected_steps_;
};

/// Integrates the problem with the embedded 5(4) pair. Termination:
/// ReachedEnd at t_end; BlowUp(t*) when |y| crosses blowup_threshold, t*
/// located on the interpolant to within 10*min_step; StepFailure when the
/// controller is driven below min_step without a magnitude crossing.
inline Trajectory integrate(const IVProblem& problem, const IntegrationControls& controls) {
    problem.validate();
    const auto ctl = controls.resolve(problem.t0);
    const std::size_t n = static_cast<std::size_t>(problem.order);

    auto sys = [&problem, n](double t, const std::vector<double>& y, std::vector<double>& out) {
        for (std::size_t i = 0; i + 1 < n; ++i) out[i] = y[i + 1];
        const double f = problem.rhs(t, y[0]);
        if (!std::isfinite(f))
            throw RhsEvaluationError(t, y[0], "rhs evaluation not finite");
        out[n - 1] = f;
    };

    std::vector<double> y = problem.init;
    double t = problem.t0;

    if (std::abs(y[0]) >= ctl.blowup_threshold)
        throw ConfigError("integrate: |y(t0)| already exceeds blowup_threshold");

    std::array<std::vector<double>, 7> k;
    for (auto& ki : k) ki.resize(n);
    std::vector<double> y5(n), err(n);

    try {
        sys(t, y, k[0]);
    } catch (const RhsEvaluationError& e) {
        throw ConfigError(std::string("integrate: rhs not finite at the initial point: ") +
                          e.what());
    }

    std::vector<double> times{t};
    std::vector<double> states(y.begin(), y.end());
    std::vector<double> dense;
    std::vector<double> spans;
    long accepted = 0, rejected = 0;

    auto push_dense = [&](double h) {
        // Quartic interpolant coefficients for the accepted interval.
        for (std::size_t i = 0; i < n; ++i) dense.push_back(y[i]);                    // c1
        for (std::size_t i = 0; i < n; ++i) dense.push_back(y5[i] - y[i]);            // c2
        for (std::size_t i = 0; i < n; ++i) dense.push_back(h * k[0][i] - (y5[i] - y[i]));  // c3
        for (std::size_t i = 0; i < n; ++i)
            dense.push_back((y5[i] - y[i]) - h * k[6][i] - (h * k[0][i] - (y5[i] - y[i])));  // c4
        for (std::size_t i = 0; i < n; ++i)
            dense.push_back(h * (detail::d1 * k[0][i] + detail::d3 * k[2][i] +
                                 detail::d4 * k[3][i] + detail::d5 * k[4][i] +
                                 detail::d6 * k[5][i] + detail::d7 * k[6][i]));       // c5
    };

    auto finish = [&](TerminationStatus st) {
        return Trajectory(problem.order, st, std::move(times), std::move(states),
                          std::move(dense), std::move(spans), accepted, rejected);
    };

    // Dense evaluation inside the most recent (not yet finalized) interval.
    auto interp_y0 = [&](double t_lo, double h, double tq) {
        const double theta = (tq - t_lo) / h;
        const double omt = 1.0 - theta;
        const double ydiff = y5[0] - y[0];
        const double bspl = h * k[0][0] - ydiff;
        const double c5v = h * (detail::d1 * k[0][0] + detail::d3 * k[2][0] +
                                detail::d4 * k[3][0] + detail::d5 * k[4][0] +
                                detail::d6 * k[5][0] + detail::d7 * k[6][0]);
        return y[0] + theta * (ydiff + omt * (bspl + theta * ((ydiff - h * k[6][0] - bspl) +
                                                              omt * c5v)));
    };

    double h = detail::initial_step(sys, t, y, k[0], ctl.atol, ctl.rtol, ctl.max_step);
    double facold = 1e-4;
    const double uround = std::numeric_limits<double>::epsilon();

    while (true) {
        if (0.1 * std::abs(h) <= std::abs(t) * uround || h < ctl.min_step)
            return finish({TerminationStatus::Kind::StepFailure, t});

        bool last = false;
        if (t + 1.01 * h >= ctl.t_end) {
            h = ctl.t_end - t;
            last = true;
        }

        bool stage_failure = false;
        double err_norm = 0.0;
        try {
            detail::dopri5_stages(sys, t, y, h, k, y5, err);
            for (std::size_t i = 0; i < n; ++i) {
                const double sk = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err_norm += (err[i] / sk) * (err[i] / sk);
            }
            err_norm = std::sqrt(err_norm / n);
            if (!std::isfinite(err_norm)) stage_failure = true;
        } catch (const RhsEvaluationError&) {
            stage_failure = true;
        }

        if (stage_failure) {
            ++rejected;
            h *= 0.5;
            continue;
        }

        const double fac11 = std::pow(err_norm, 0.2 - detail::kBeta * 0.75);
        if (err_norm > 1.0) {
            ++rejected;
            h /= std::min(1.0 / detail::kFacMin, fac11 / detail::kSafety);
            continue;
        }

        // Step accepted.
        ++accepted;
        push_dense(h);
        spans.push_back(h);
        const double t_new = last ? ctl.t_end : t + h;

        if (std::abs(y5[0]) >= ctl.blowup_threshold) {
            // Locate the first |y| = threshold crossing inside this step.
            double lo = t, hi = t_new;
            while (hi - lo > 10.0 * ctl.min_step) {
                const double mid = 0.5 * (lo + hi);
                if (std::abs(interp_y0(t, h, mid)) >= ctl.blowup_threshold) hi = mid;
                else lo = mid;
            }
            const double t_star = hi;
            const double theta = (t_star - t) / h;
            const double omt = 1.0 - theta;
            times.push_back(t_star);
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = y5[i] - y[i];
                const double bspl = h * k[0][i] - ydiff;
                const double c4v = ydiff - h * k[6][i] - bspl;
                const double c5v = h * (detail::d1 * k[0][i] + detail::d3 * k[2][i] +
                                        detail::d4 * k[3][i] + detail::d5 * k[4][i] +
                                        detail::d6 * k[5][i] + detail::d7 * k[6][i]);
                states.push_back(y[i] + theta * (ydiff + omt * (bspl + theta * (c4v + omt * c5v))));
            }
            return finish({TerminationStatus::Kind::BlowUp, t_star});
        }

        times.push_back(t_new);
        states.insert(states.end(), y5.begin(), y5.end());
        y = y5;
        t = t_new;
        k[0] = k[6];  // FSAL

        if (last) return finish({TerminationStatus::Kind::ReachedEnd, ctl.t_end});

        // Lund-stabilized step proposal built on the previous accepted error.
        double fac = fac11 / std::pow(facold, detail::kBeta);
        fac = std::clamp(fac / detail::kSafety, 1.0 / detail::kFacMax, 1.0 / detail::kFacMin);
        facold = std::max(err_norm, 1e-4);
        h = std::min(h / fac, ctl.max_step);
    }
}

/// Evaluates y^(j) on a strictly increasing grid inside the trajectory
/// domain via the dense interpolant.
inline SampleSeries resample(const Trajectory& trajectory, const std::vector<double>& grid,
                             int derivative_index) {
    if (grid.empty()) throw ConfigError("resample: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw ConfigError("resample: grid not strictly increasing at index " +
                              std::to_string(i));
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (double t : grid) vals.push_back(trajectory.eval(t, derivative_index));
    return SampleSeries(grid, std::move(vals),
                        "trajectory d^" + std::to_string(derivative_index));
}

/// Times of strict sign alternations (linearly interpolated) plus sample
/// times whose value is exactly zero; each zero sample counts once and
/// suppresses interpolated crossings against its neighbors.
inline std::vector<double> sign_changes(const SampleSeries& series) {
    if (series.empty()) throw ConfigError("sign_changes: empty series");
    std::vector<double> crossings;
    const auto& t = series.times;
    const auto& v = series.values;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) {
            crossings.push_back(t[i]);
            continue;
        }
        if (i > 0 && v[i - 1] != 0.0 && ((v[i] > 0) != (v[i - 1] > 0))) {
            const double frac = v[i - 1] / (v[i - 1] - v[i]);
            crossings.push_back(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
    }
    return crossings;
}

/// Sign alternation count with zero samples transparent: the number of
/// times consecutive nonzero samples flip sign. The identically-zero
/// series has no alternations.
inline int count_alternations(const SampleSeries& series) {
    int count = 0, last = 0;
    for (double v : series.values) {
        const int s = (v > 0) - (v < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

}  // namespace eflab
