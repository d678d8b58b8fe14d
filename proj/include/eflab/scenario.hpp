#pragma once

// Scenario files: a versioned sections/key=value format describing one
// experiment. Parsing validates the whole document and reports every
// violation, not just the first. See README for the schema.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eflab/asymptotics.hpp"
#include "eflab/common.hpp"
#include "eflab/equations.hpp"
#include "eflab/ode.hpp"

namespace eflab {

enum class ScenarioKind { Integrate, Classify, Verify, Scan, Corpus };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Integrate: return "integrate";
        case ScenarioKind::Classify: return "classify";
        case ScenarioKind::Verify: return "verify";
        case ScenarioKind::Scan: return "scan";
        default: return "corpus";
    }
}

inline std::optional<ScenarioKind> scenario_kind_from(const std::string& s) {
    if (s == "integrate") return ScenarioKind::Integrate;
    if (s == "classify") return ScenarioKind::Classify;
    if (s == "verify") return ScenarioKind::Verify;
    if (s == "scan") return ScenarioKind::Scan;
    if (s == "corpus") return ScenarioKind::Corpus;
    return std::nullopt;
}

/// Serializable description of an EF equation ([equation] section).
struct EquationSpec {
    int order = 2;
    std::string phi_tag = "power";
    double phi_coefficient = 1.0;  // power only
    double phi_sigma = 0.0;        // power only
    int phi_sign = 1;              // exp_root / exp_quadratic only
    double lambda = 2.0;

    friend bool operator==(const EquationSpec&, const EquationSpec&) = default;

    PhiSpec make_phi() const {
        if (phi_tag == "power") return PhiSpec::power(phi_coefficient, phi_sigma);
        if (phi_tag == "exp_root") return PhiSpec::exp_root(phi_sign);
        if (phi_tag == "exp_quadratic") return PhiSpec::exp_quadratic(phi_sign);
        if (phi_tag == "oscillating_mix") return PhiSpec::oscillating_mix();
        if (phi_tag == "bounded_oscillation") return PhiSpec::bounded_oscillation();
        throw ConfigError("equation.phi: unknown tag '" + phi_tag + "'");
    }

    EFEquation make_equation() const { return EFEquation{order, make_phi(), lambda}; }
};

/// [problem] section: start point and window.
struct ProblemSpec {
    double t0 = 1.0;
    std::vector<double> init;
    double t_end = 100.0;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// [controls] section: tolerances and thresholds (zero means resolved
/// default).
struct ControlsSpec {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = 0.0;
    double min_step = 0.0;
    double blowup_threshold = 1e12;

    friend bool operator==(const ControlsSpec&, const ControlsSpec&) = default;

    IntegrationControls to_controls(double t_end) const {
        IntegrationControls c;
        c.rtol = rtol;
        c.atol = atol;
        c.t_end = t_end;
        c.max_step = max_step;
        c.min_step = min_step;
        c.blowup_threshold = blowup_threshold;
        return c;
    }
};

struct ScenarioConfig {
    int version = kSchemaVersion;
    ScenarioKind kind = ScenarioKind::Corpus;
    std::optional<EquationSpec> equation;
    std::optional<ProblemSpec> problem;
    ControlsSpec controls;
    ClassifierConfig classifier;
    std::vector<std::vector<double>> ic_grid;  // [scan] ic = ... lines
    std::string input_csv;                     // [data] input
    std::string out_path;                      // [output] path ("" = stdout)
    std::string out_format = "json";           // json | csv

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_int(const std::string& s, int& out) {
    try {
        std::size_t pos = 0;
        out = std::stoi(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_vector(const std::string& s, std::vector<double>& out) {
    std::string cleaned = s;
    for (char& c : cleaned)
        if (c == ',') c = ' ';
    std::istringstream ss(cleaned);
    out.clear();
    std::string tok;
    while (ss >> tok) {
        double v;
        if (!parse_double(tok, v)) return false;
        out.push_back(v);
    }
    return !out.empty();
}

}  // namespace detail

/// Parses scenario text; returns the config or the full list of schema
/// violations (empty config on failure).
inline std::optional<ScenarioConfig> parse_scenario_text(const std::string& text,
                                                         std::vector<std::string>& violations) {
    ScenarioConfig cfg;
    bool saw_version = false, saw_kind = false;
    bool saw_equation = false, saw_problem = false;
    std::string section;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = detail::trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                violations.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section == "equation") { cfg.equation.emplace(); saw_equation = true; }
            else if (section == "problem") { cfg.problem.emplace(); saw_problem = true; }
            else if (section != "controls" && section != "classifier" && section != "scan" &&
                     section != "data" && section != "output")
                violations.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                                     section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            violations.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string path = section.empty() ? key : section + "." + key;

        auto bad = [&](const std::string& why) { violations.push_back(path + ": " + why); };
        auto need_double = [&](double& slot) {
            double v;
            if (!detail::parse_double(value, v)) bad("not a number: '" + value + "'");
            else if (!std::isfinite(v)) bad("must be finite");
            else slot = v;
        };
        auto need_int = [&](int& slot) {
            int v;
            if (!detail::parse_int(value, v)) bad("not an integer: '" + value + "'");
            else slot = v;
        };

        if (section.empty()) {
            if (key == "version") { need_int(cfg.version); saw_version = true; }
            else if (key == "kind") {
                saw_kind = true;
                if (auto k = scenario_kind_from(value)) cfg.kind = *k;
                else bad("unknown kind '" + value + "'");
            } else bad("unknown top-level key");
        } else if (section == "equation") {
            if (key == "order") need_int(cfg.equation->order);
            else if (key == "phi") cfg.equation->phi_tag = value;
            else if (key == "phi_coefficient") need_double(cfg.equation->phi_coefficient);
            else if (key == "phi_sigma") need_double(cfg.equation->phi_sigma);
            else if (key == "phi_sign") need_int(cfg.equation->phi_sign);
            else if (key == "lambda") need_double(cfg.equation->lambda);
            else bad("unknown key");
        } else if (section == "problem") {
            if (key == "t0") need_double(cfg.problem->t0);
            else if (key == "t_end") need_double(cfg.problem->t_end);
            else if (key == "init") {
                if (!detail::parse_vector(value, cfg.problem->init))
                    bad("expected a list of numbers");
            } else bad("unknown key");
        } else if (section == "controls") {
            if (key == "rtol") need_double(cfg.controls.rtol);
            else if (key == "atol") need_double(cfg.controls.atol);
            else if (key == "max_step") need_double(cfg.controls.max_step);
            else if (key == "min_step") need_double(cfg.controls.min_step);
            else if (key == "blowup_threshold") need_double(cfg.controls.blowup_threshold);
            else bad("unknown key");
        } else if (section == "classifier") {
            if (key == "grid_ratio") need_double(cfg.classifier.grid_ratio);
            else if (key == "block_count") need_int(cfg.classifier.block_count);
            else if (key == "tail_blocks") need_int(cfg.classifier.tail_blocks);
            else if (key == "p_max") need_double(cfg.classifier.p_max);
            else if (key == "slope_escape_margin") need_double(cfg.classifier.slope_escape_margin);
            else if (key == "zero_floor") need_double(cfg.classifier.zero_floor);
            else bad("unknown key");
        } else if (section == "scan") {
            if (key == "ic") {
                std::vector<double> ic;
                if (!detail::parse_vector(value, ic)) bad("expected a list of numbers");
                else cfg.ic_grid.push_back(std::move(ic));
            } else bad("unknown key");
        } else if (section == "data") {
            if (key == "input") cfg.input_csv = value;
            else bad("unknown key");
        } else if (section == "output") {
            if (key == "path") cfg.out_path = value;
            else if (key == "format") {
                if (value != "json" && value != "csv") bad("format must be json or csv");
                else cfg.out_format = value;
            } else bad("unknown key");
        }
    }

    // Cross-field schema checks.
    if (!saw_version) violations.push_back("version: required field missing");
    else if (cfg.version != kSchemaVersion)
        violations.push_back("version: unsupported schema version " + std::to_string(cfg.version));
    if (!saw_kind) violations.push_back("kind: required field missing");

    const bool needs_equation = saw_kind && (cfg.kind == ScenarioKind::Integrate ||
                                             cfg.kind == ScenarioKind::Verify ||
                                             cfg.kind == ScenarioKind::Scan);
    const bool needs_init = saw_kind && (cfg.kind == ScenarioKind::Integrate ||
                                         cfg.kind == ScenarioKind::Verify);

    if (needs_equation && !saw_equation)
        violations.push_back("equation: section required for kind = " +
                             std::string(to_string(cfg.kind)));
    if (needs_equation && !saw_problem)
        violations.push_back("problem: section required for kind = " +
                             std::string(to_string(cfg.kind)));

    if (cfg.equation) {
        const auto& e = *cfg.equation;
        if (e.order < 1) violations.push_back("equation.order: must be >= 1");
        if (!(e.lambda > 0)) violations.push_back("equation.lambda: must be > 0");
        if (e.phi_sign != 1 && e.phi_sign != -1)
            violations.push_back("equation.phi_sign: must be +1 or -1");
        try {
            PhiSpec phi = e.make_phi();
            if (cfg.problem && !(cfg.problem->t0 >= phi.min_t0()))
                violations.push_back("problem.t0: singular phi at t0 (phi = " + phi.label() +
                                     " requires t0 > " + detail::fmt17(phi.min_t0()) + ")");
        } catch (const ConfigError& err) {
            violations.push_back(err.what());
        }
        if ((cfg.kind == ScenarioKind::Verify || cfg.kind == ScenarioKind::Scan) &&
            !(e.lambda > 1))
            violations.push_back("equation.lambda: superlinear (lambda > 1) required for " +
                                 std::string(to_string(cfg.kind)));
    }
    if (cfg.problem) {
        if (!(cfg.problem->t_end > cfg.problem->t0))
            violations.push_back("problem.t_end: must exceed problem.t0");
        if (needs_init && cfg.equation &&
            cfg.problem->init.size() != static_cast<std::size_t>(cfg.equation->order))
            violations.push_back("problem.init: expected " +
                                 std::to_string(cfg.equation->order) + " entries, got " +
                                 std::to_string(cfg.problem->init.size()));
    }
    if (cfg.kind == ScenarioKind::Classify && cfg.input_csv.empty())
        violations.push_back("data.input: CSV path required for kind = classify");
    if (cfg.kind == ScenarioKind::Scan) {
        if (cfg.ic_grid.empty()) violations.push_back("scan.ic: at least one initial vector required");
        if (cfg.equation)
            for (std::size_t i = 0; i < cfg.ic_grid.size(); ++i)
                if (cfg.ic_grid[i].size() != static_cast<std::size_t>(cfg.equation->order))
                    violations.push_back("scan.ic[" + std::to_string(i) + "]: expected " +
                                         std::to_string(cfg.equation->order) + " entries");
    }
    if (!(cfg.controls.rtol > 0)) violations.push_back("controls.rtol: must be > 0");
    if (!(cfg.controls.atol > 0)) violations.push_back("controls.atol: must be > 0");
    if (!(cfg.controls.blowup_threshold > 0))
        violations.push_back("controls.blowup_threshold: must be > 0");
    try {
        cfg.classifier.validate();
    } catch (const ConfigError& err) {
        violations.push_back(std::string("classifier: ") + err.what());
    }

    if (!violations.empty()) return std::nullopt;
    return cfg;
}

inline ScenarioConfig parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::vector<std::string> violations;
    auto cfg = parse_scenario_text(buf.str(), violations);
    if (!cfg) {
        std::string msg = path + ": scenario has " + std::to_string(violations.size()) +
                          " schema violation(s):";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw ConfigError(msg);
    }
    return *cfg;
}

/// Canonical text form; parse_scenario_text(serialize_scenario(c)) == c.
inline std::string serialize_scenario(const ScenarioConfig& cfg) {
    using detail::fmt17;
    std::ostringstream out;
    out << "version = " << cfg.version << "\n";
    out << "kind = " << to_string(cfg.kind) << "\n";
    if (cfg.equation) {
        const auto& e = *cfg.equation;
        out << "\n[equation]\n";
        out << "order = " << e.order << "\n";
        out << "phi = " << e.phi_tag << "\n";
        out << "phi_coefficient = " << fmt17(e.phi_coefficient) << "\n";
        out << "phi_sigma = " << fmt17(e.phi_sigma) << "\n";
        out << "phi_sign = " << e.phi_sign << "\n";
        out << "lambda = " << fmt17(e.lambda) << "\n";
    }
    if (cfg.problem) {
        const auto& p = *cfg.problem;
        out << "\n[problem]\n";
        out << "t0 = " << fmt17(p.t0) << "\n";
        if (!p.init.empty()) {
            out << "init =";
            for (double v : p.init) out << " " << fmt17(v);
            out << "\n";
        }
        out << "t_end = " << fmt17(p.t_end) << "\n";
    }
    out << "\n[controls]\n";
    out << "rtol = " << fmt17(cfg.controls.rtol) << "\n";
    out << "atol = " << fmt17(cfg.controls.atol) << "\n";
    out << "max_step = " << fmt17(cfg.controls.max_step) << "\n";
    out << "min_step = " << fmt17(cfg.controls.min_step) << "\n";
    out << "blowup_threshold = " << fmt17(cfg.controls.blowup_threshold) << "\n";
    out << "\n[classifier]\n";
    out << "grid_ratio = " << fmt17(cfg.classifier.grid_ratio) << "\n";
    out << "block_count = " << cfg.classifier.block_count << "\n";
    out << "tail_blocks = " << cfg.classifier.tail_blocks << "\n";
    out << "p_max = " << fmt17(cfg.classifier.p_max) << "\n";
    out << "slope_escape_margin = " << fmt17(cfg.classifier.slope_escape_margin) << "\n";
    out << "zero_floor = " << fmt17(cfg.classifier.zero_floor) << "\n";
    if (!cfg.ic_grid.empty()) {
        out << "\n[scan]\n";
        for (const auto& ic : cfg.ic_grid) {
            out << "ic =";
            for (double v : ic) out << " " << fmt17(v);
            out << "\n";
        }
    }
    if (!cfg.input_csv.empty()) {
        out << "\n[data]\n";
        out << "input = " << cfg.input_csv << "\n";
    }
    out << "\n[output]\n";
    if (!cfg.out_path.empty()) out << "path = " << cfg.out_path << "\n";
    out << "format = " << cfg.out_format << "\n";
    return out.str();
}

}  // namespace eflab
