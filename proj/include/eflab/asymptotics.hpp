#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "eflab/common.hpp"
#include "eflab/extreal.hpp"
#include "eflab/series.hpp"

namespace eflab {

/// Growth classes on [a, ∞): S1 dominates every power of t (in the liminf
/// sense), S2 is dominated by every power (limsup sense), S3 is everything
/// else and carries the two exponents Π̂ (lower) and Ξ̂ (upper).
enum class GrowthClass { S1, S2, S3 };

inline const char* to_string(GrowthClass c) {
    switch (c) {
        case GrowthClass::S1: return "S1";
        case GrowthClass::S2: return "S2";
        default: return "S3";
    }
}

struct ClassifierConfig {
    double grid_ratio = 1.002;        // geometric sample spacing
    int block_count = 16;
    int tail_blocks = 8;              // blocks entering the regression
    double p_max = 16.0;              // largest exponent the estimator resolves
    double slope_escape_margin = 2.0; // beyond p_max this forces a sentinel
    double zero_floor = 1e-300;       // |f| floor before taking logs

    friend bool operator==(const ClassifierConfig&, const ClassifierConfig&) = default;

    void validate() const {
        if (grid_ratio <= 1.0) throw ConfigError("ClassifierConfig: grid_ratio must be > 1");
        if (block_count < 8) throw ConfigError("ClassifierConfig: block_count must be >= 8");
        if (tail_blocks < 4) throw ConfigError("ClassifierConfig: tail_blocks must be >= 4");
        if (tail_blocks > block_count)
            throw ConfigError("ClassifierConfig: tail_blocks must be <= block_count");
        if (p_max <= 0) throw ConfigError("ClassifierConfig: p_max must be > 0");
        if (slope_escape_margin <= 0)
            throw ConfigError("ClassifierConfig: slope_escape_margin must be > 0");
        if (zero_floor <= 0) throw ConfigError("ClassifierConfig: zero_floor must be > 0");
    }
};

/// Per-block extrema of |f| on a geometric partition of the sample window.
/// Block minima stand in for the liminf envelope, maxima for the limsup
/// envelope. has_sign_change marks blocks where the samples alternate in
/// sign, certifying (for continuous f) that |f| attains zero inside.
struct BlockEnvelope {
    std::vector<double> block_mid_times;
    std::vector<double> block_min_abs;   // floored at zero_floor
    std::vector<double> block_max_abs;   // raw; 0 possible for f ≡ 0
    std::vector<bool> has_sign_change;
    std::vector<bool> min_at_floor;      // true where the raw min |f| <= zero_floor
};

/// Geometric grid t_start·ratio^k, k = 0,1,…, capped strictly below t_end,
/// with t_end appended.
inline std::vector<double> geometric_grid(double t_start, double t_end, double ratio) {
    if (ratio <= 1.0) throw ConfigError("geometric_grid: ratio must be > 1");
    if (!(t_end > t_start)) throw ConfigError("geometric_grid: t_end must exceed t_start");
    if (t_start <= 0) throw ConfigError("geometric_grid: t_start must be positive");
    std::vector<double> grid;
    double t = t_start;
    while (t < t_end) {
        grid.push_back(t);
        t *= ratio;
    }
    grid.push_back(t_end);
    return grid;
}

inline BlockEnvelope block_envelope(const SampleSeries& series, const ClassifierConfig& config) {
    config.validate();
    series.validate();
    if (series.size() < 2) throw ResolutionError("block_envelope: series too short");
    if (series.times.front() < 1.0)
        throw DomainError("block_envelope: times must start at t >= 1 (log grid)");

    const int blocks = config.block_count;
    const double t0 = series.times.front();
    const double t1 = series.times.back();
    const double log_span = std::log(t1 / t0);

    BlockEnvelope env;
    env.block_mid_times.resize(blocks);
    env.block_min_abs.assign(blocks, std::numeric_limits<double>::infinity());
    env.block_max_abs.assign(blocks, 0.0);
    env.has_sign_change.assign(blocks, false);
    env.min_at_floor.assign(blocks, false);
    std::vector<int> counts(blocks, 0);
    std::vector<int> last_sign(blocks, 0);

    for (int b = 0; b < blocks; ++b) {
        const double le = t0 * std::exp(log_span * b / blocks);
        const double re = t0 * std::exp(log_span * (b + 1) / blocks);
        env.block_mid_times[b] = std::sqrt(le * re);
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        int b = static_cast<int>(std::floor(std::log(series.times[i] / t0) / log_span * blocks));
        b = std::clamp(b, 0, blocks - 1);
        const double v = series.values[i];
        const double mag = std::abs(v);
        env.block_min_abs[b] = std::min(env.block_min_abs[b], mag);
        env.block_max_abs[b] = std::max(env.block_max_abs[b], mag);
        const int s = (v > 0) - (v < 0);
        if (s != 0) {
            if (last_sign[b] != 0 && s != last_sign[b]) env.has_sign_change[b] = true;
            last_sign[b] = s;
        }
        ++counts[b];
    }

    for (int b = 0; b < blocks; ++b) {
        if (counts[b] < 4)
            throw ResolutionError("block_envelope: block " + std::to_string(b) + " holds only " +
                                  std::to_string(counts[b]) + " samples (need >= 4)");
        if (env.block_min_abs[b] <= config.zero_floor) {
            env.block_min_abs[b] = config.zero_floor;
            env.min_at_floor[b] = true;
        }
    }
    return env;
}

/// An exponent estimate together with the per-block incremental slope
/// sequence that justified it.
struct SlopeEstimate {
    ExtReal value;
    std::vector<double> slopes;  // block-to-block slopes of the log envelope
};

namespace detail {

inline std::vector<double> incremental_slopes(const std::vector<double>& mids,
                                              const std::vector<double>& env) {
    std::vector<double> s;
    s.reserve(env.size() - 1);
    for (std::size_t i = 0; i + 1 < env.size(); ++i)
        s.push_back((std::log(env[i + 1]) - std::log(env[i])) /
                    (std::log(mids[i + 1]) - std::log(mids[i])));
    return s;
}

inline bool nondecreasing(const std::vector<double>& v, std::size_t from) {
    for (std::size_t i = from + 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - 1e-9) return false;
    return true;
}

inline bool nonincreasing(const std::vector<double>& v, std::size_t from) {
    for (std::size_t i = from + 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + 1e-9) return false;
    return true;
}

inline double regression_slope(const std::vector<double>& mids, const std::vector<double>& env,
                               std::size_t from) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(env.size() - from);
    for (std::size_t i = from; i < env.size(); ++i) {
        const double x = std::log(mids[i]);
        const double y = std::log(env[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline SlopeEstimate estimate_envelope_exponent(const BlockEnvelope& env,
                                                const ClassifierConfig& config, bool use_min) {
    const std::vector<double>& e = use_min ? env.block_min_abs : env.block_max_abs;
    const std::size_t blocks = e.size();
    const std::size_t tail_start = blocks - static_cast<std::size_t>(config.tail_blocks);

    std::vector<double> floored = e;
    for (double& m : floored) m = std::max(m, config.zero_floor);
    std::vector<double> slopes = incremental_slopes(env.block_mid_times, floored);

    // Zero envelope in the tail: the function vanishes (or certifiably
    // attains zero) beyond every power, hence the -∞ sentinel.
    for (std::size_t b = tail_start; b < blocks; ++b) {
        const bool zeroed = use_min
                                ? (env.min_at_floor[b] || env.has_sign_change[b])
                                : (e[b] <= config.zero_floor);
        if (zeroed) return {ExtReal::neg_inf(), std::move(slopes)};
    }

    const std::size_t diag_start = tail_start == 0 ? 0 : tail_start - 1;
    const double final_slope = slopes.back();
    const double escape = config.p_max + config.slope_escape_margin;

    if (nondecreasing(slopes, diag_start) && final_slope > escape)
        return {ExtReal::pos_inf(), std::move(slopes)};
    if (nonincreasing(slopes, diag_start) && final_slope < -escape)
        return {ExtReal::neg_inf(), std::move(slopes)};
    return {ExtReal::finite(regression_slope(env.block_mid_times, e, tail_start)),
            std::move(slopes)};
}

}  // namespace detail

/// Lower growth exponent Π̂ from the block-minimum envelope.
inline SlopeEstimate estimate_pi(const SampleSeries& series, const ClassifierConfig& config) {
    return detail::estimate_envelope_exponent(block_envelope(series, config), config, true);
}

/// Upper growth exponent Ξ̂ from the block-maximum envelope.
inline SlopeEstimate estimate_xi(const SampleSeries& series, const ClassifierConfig& config) {
    return detail::estimate_envelope_exponent(block_envelope(series, config), config, false);
}

struct GrowthReport {
    GrowthClass growth_class = GrowthClass::S3;
    ExtReal pi_hat;
    ExtReal xi_hat;
    std::vector<double> slope_sequence_min;
    std::vector<double> slope_sequence_max;
    bool confident = true;
    std::string source_label;
};

namespace detail {

// Unstable tail: the last three slopes neither rose nor fell monotonically
// and still span more than 0.05.
inline bool tail_unstable(const std::vector<double>& slopes) {
    if (slopes.size() < 3) return false;
    const std::size_t k = slopes.size() - 3;
    const double a = slopes[k], b = slopes[k + 1], c = slopes[k + 2];
    const bool mono = (b >= a - 1e-12 && c >= b - 1e-12) || (b <= a + 1e-12 && c <= b + 1e-12);
    if (mono) return false;
    const double lo = std::min({a, b, c});
    const double hi = std::max({a, b, c});
    return hi - lo > 0.05;
}

}  // namespace detail

/// Classifies a sampled function into S1/S2/S3 with exponent estimates.
inline GrowthReport classify_growth(const SampleSeries& series, const ClassifierConfig& config) {
    const BlockEnvelope env = block_envelope(series, config);
    const SlopeEstimate pi = detail::estimate_envelope_exponent(env, config, true);
    const SlopeEstimate xi = detail::estimate_envelope_exponent(env, config, false);

    GrowthReport report;
    report.slope_sequence_min = pi.slopes;
    report.slope_sequence_max = xi.slopes;
    report.source_label = series.source_label;

    if (pi.value.is_pos_inf()) {
        report.growth_class = GrowthClass::S1;
        report.pi_hat = ExtReal::pos_inf();
        report.xi_hat = ExtReal::pos_inf();
    } else if (xi.value.is_neg_inf()) {
        report.growth_class = GrowthClass::S2;
        report.pi_hat = ExtReal::neg_inf();
        report.xi_hat = ExtReal::neg_inf();
    } else {
        report.growth_class = GrowthClass::S3;
        report.pi_hat = pi.value;
        report.xi_hat = xi.value;
    }
    report.confident =
        !detail::tail_unstable(report.slope_sequence_min) &&
        !detail::tail_unstable(report.slope_sequence_max);
    return report;
}

}  // namespace eflab
