#pragma once

// Machine-readable reports. JSON documents are nlohmann ordered_json trees
// rendered by a local serializer so that every float carries 17 significant
// digits and key order is exactly insertion order; that is what makes
// re-runs byte-identical. CSV output follows RFC 4180 quoting.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eflab/asymptotics.hpp"
#include "eflab/common.hpp"
#include "eflab/equations.hpp"
#include "eflab/extreal.hpp"
#include "eflab/ode.hpp"
#include "eflab/scenario.hpp"
#include "eflab/series.hpp"
#include "eflab/theorems.hpp"

namespace eflab {

using ordered_json = nlohmann::ordered_json;

namespace report_detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void dump(const ordered_json& j, std::string& out) {
    switch (j.type()) {
        case ordered_json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case ordered_json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ',';
                first = false;
                dump(el, out);
            }
            out += ']';
            break;
        }
        case ordered_json::value_t::string:
            out += nlohmann::json(j.get<std::string>()).dump();
            break;
        case ordered_json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case ordered_json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case ordered_json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case ordered_json::value_t::number_float:
            out += fmt17(j.get<double>());
            break;
        default:
            out += "null";
            break;
    }
}

}  // namespace report_detail

/// Renders the document with fixed key order and 17-significant-digit
/// floats; output is byte-identical for identical documents.
inline std::string render_json(const ordered_json& doc) {
    std::string out;
    report_detail::dump(doc, out);
    out += '\n';
    return out;
}

// ---- JSON views of the domain types --------------------------------------

inline ordered_json to_json(const ExtReal& x) {
    if (x.is_pos_inf()) return "+inf";
    if (x.is_neg_inf()) return "-inf";
    return x.value();
}

inline ordered_json to_json(const GrowthReport& r) {
    ordered_json j;
    j["class"] = to_string(r.growth_class);
    j["pi_hat"] = to_json(r.pi_hat);
    j["xi_hat"] = to_json(r.xi_hat);
    j["confident"] = r.confident;
    j["slope_sequence_min"] = r.slope_sequence_min;
    j["slope_sequence_max"] = r.slope_sequence_max;
    if (!r.source_label.empty()) j["source"] = r.source_label;
    return j;
}

inline ordered_json to_json(const TerminationStatus& s) {
    ordered_json j;
    switch (s.kind) {
        case TerminationStatus::Kind::ReachedEnd: j["kind"] = "reached_end"; break;
        case TerminationStatus::Kind::BlowUp:
            j["kind"] = "blow_up";
            j["t_star"] = s.where;
            break;
        default:
            j["kind"] = "step_failure";
            j["t_fail"] = s.where;
            break;
    }
    return j;
}

inline ordered_json to_json(const TheoremVerdict& v) {
    ordered_json j;
    j["clause"] = v.clause;
    j["outcome"] = to_string(v.outcome);
    if (v.margin) j["margin"] = to_json(*v.margin);
    if (!v.details.empty()) j["details"] = v.details;
    return j;
}

inline ordered_json to_json(const LongTermClass& c) {
    ordered_json j;
    switch (c.kind) {
        case LongTermClass::Kind::Oscillatory:
            j["kind"] = "oscillatory";
            j["crossing_count"] = c.crossing_count;
            break;
        case LongTermClass::Kind::MonotoneToZero:
            j["kind"] = "monotone_to_zero";
            j["window_start"] = c.window_start;
            break;
        case LongTermClass::Kind::BlowUp:
            j["kind"] = "blow_up";
            j["t_star"] = c.t_star;
            break;
        default:
            j["kind"] = "undetermined";
            j["reason"] = c.reason;
            break;
    }
    return j;
}

inline ordered_json to_json(const VanishingReport& r) {
    ordered_json j;
    j["derivative_index"] = r.derivative_index;
    j["trend_established"] = r.trend_established;
    j["points"] = r.times.size();
    if (!r.times.empty()) {
        j["first_time"] = r.times.front();
        j["last_time"] = r.times.back();
        j["first_value"] = r.values.front();
        j["last_value"] = r.values.back();
    }
    return j;
}

inline ordered_json to_json(const FalsificationReport& r) {
    ordered_json j;
    j["assumption"] = r.assumption;
    j["passed"] = r.passed;
    j["samples_only"] = r.samples_only;
    if (r.empty_corpus_warning) j["warning"] = "empty corpus: vacuous pass";
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json je;
        je["label"] = e.label;
        je["outcome"] = to_string(e.outcome);
        if (e.report) je["class"] = to_string(e.report->growth_class);
        if (e.margin) je["margin"] = *e.margin;
        if (!e.note.empty()) je["note"] = e.note;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline ordered_json to_json(const Lemma2Report& r) {
    ordered_json j;
    j["equation"] = r.equation_label;
    j["passed"] = r.passed;
    j["samples_only"] = r.samples_only;
    j["blowup_count"] = r.blowup_count;
    j["reached_count"] = r.reached_count;
    j["stepfail_count"] = r.stepfail_count;
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json je;
        je["init"] = e.init;
        je["status"] = to_json(e.status);
        if (e.report) {
            je["class"] = to_string(e.report->growth_class);
            je["pi_hat"] = to_json(e.report->pi_hat);
            je["xi_hat"] = to_json(e.report->xi_hat);
            je["confident"] = e.report->confident;
        }
        if (!e.note.empty()) je["note"] = e.note;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline ordered_json to_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["version"] = cfg.version;
    j["kind"] = to_string(cfg.kind);
    if (cfg.equation) {
        ordered_json e;
        e["order"] = cfg.equation->order;
        e["phi"] = cfg.equation->phi_tag;
        e["phi_coefficient"] = cfg.equation->phi_coefficient;
        e["phi_sigma"] = cfg.equation->phi_sigma;
        e["phi_sign"] = cfg.equation->phi_sign;
        e["lambda"] = cfg.equation->lambda;
        j["equation"] = std::move(e);
    }
    if (cfg.problem) {
        ordered_json p;
        p["t0"] = cfg.problem->t0;
        p["init"] = cfg.problem->init;
        p["t_end"] = cfg.problem->t_end;
        j["problem"] = std::move(p);
    }
    ordered_json c;
    c["rtol"] = cfg.controls.rtol;
    c["atol"] = cfg.controls.atol;
    c["max_step"] = cfg.controls.max_step;
    c["min_step"] = cfg.controls.min_step;
    c["blowup_threshold"] = cfg.controls.blowup_threshold;
    j["controls"] = std::move(c);
    ordered_json cl;
    cl["grid_ratio"] = cfg.classifier.grid_ratio;
    cl["block_count"] = cfg.classifier.block_count;
    cl["tail_blocks"] = cfg.classifier.tail_blocks;
    cl["p_max"] = cfg.classifier.p_max;
    cl["slope_escape_margin"] = cfg.classifier.slope_escape_margin;
    cl["zero_floor"] = cfg.classifier.zero_floor;
    j["classifier"] = std::move(cl);
    if (!cfg.ic_grid.empty()) j["ic_grid"] = cfg.ic_grid;
    if (!cfg.input_csv.empty()) j["input"] = cfg.input_csv;
    return j;
}

// ---- CSV ------------------------------------------------------------------

/// Trajectory rows at accepted steps: t,y0,...,y_{n-1}.
inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (int j = 0; j < traj.order(); ++j) out += ",y" + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += report_detail::fmt17(traj.time(i));
        for (int j = 0; j < traj.order(); ++j) {
            out += ',';
            out += report_detail::fmt17(traj.state(i, j));
        }
        out += '\n';
    }
    return out;
}

inline std::string series_csv(const SampleSeries& s) {
    std::string out = "time,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += report_detail::fmt17(s.times[i]);
        out += ',';
        out += report_detail::fmt17(s.values[i]);
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file for writing: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace eflab
