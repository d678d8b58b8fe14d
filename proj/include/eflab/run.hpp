#pragma once

// Dispatch from a validated scenario to the pipelines, collecting one
// result entry per scenario item into a deterministic report document.

#include <string>
#include <utility>
#include <vector>

#include "eflab/corpus.hpp"
#include "eflab/report.hpp"
#include "eflab/scenario.hpp"

namespace eflab {

struct RunReport {
    ordered_json document;     // serialized via render_json
    std::string csv;           // populated for format=csv items
    int exit_code = 0;         // 0 ok, 1 item/criterion failures
    std::string summary;       // human one-liners for stdout
};

namespace run_detail {

inline ordered_json base_document(const ScenarioConfig& cfg) {
    ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = to_string(cfg.kind);
    doc["scenario"] = to_json(cfg);
    return doc;
}

inline ordered_json trajectory_summary(const Trajectory& traj) {
    ordered_json j;
    j["status"] = to_json(traj.status());
    j["t_begin"] = traj.t_begin();
    j["t_last"] = traj.t_last();
    j["accepted_steps"] = traj.accepted_steps();
    j["rejected_steps"] = traj.rejected_steps();
    ordered_json final_state = ordered_json::array();
    for (int k = 0; k < traj.order(); ++k) final_state.push_back(traj.state(traj.size() - 1, k));
    j["final_state"] = std::move(final_state);
    return j;
}

}  // namespace run_detail

inline RunReport run_scenario(const ScenarioConfig& cfg, int jobs = 1) {
    RunReport out;
    ordered_json doc = run_detail::base_document(cfg);
    ordered_json results = ordered_json::array();
    std::vector<std::string> notes;
    int failures = 0;

    switch (cfg.kind) {
        case ScenarioKind::Integrate: {
            const EFEquation eq = cfg.equation->make_equation();
            auto problem = make_problem(eq, cfg.problem->t0, cfg.problem->init);
            Trajectory traj = integrate(problem, cfg.controls.to_controls(cfg.problem->t_end));
            ordered_json item;
            item["equation"] = eq.label();
            item["trajectory"] = run_detail::trajectory_summary(traj);
            results.push_back(std::move(item));
            if (cfg.out_format == "csv") out.csv = trajectory_csv(traj);
            out.summary = "integrate: " + traj.status().str() + ", " +
                          std::to_string(traj.accepted_steps()) + " steps";
            break;
        }
        case ScenarioKind::Classify: {
            SampleSeries series = csv::read_series(cfg.input_csv);
            GrowthReport rep = classify_growth(series, cfg.classifier);
            ordered_json item;
            item["input"] = cfg.input_csv;
            item["samples"] = series.size();
            item["report"] = to_json(rep);
            results.push_back(std::move(item));
            out.summary = std::string("classify: ") + to_string(rep.growth_class) +
                          " pi_hat=" + rep.pi_hat.str() + " xi_hat=" + rep.xi_hat.str();
            break;
        }
        case ScenarioKind::Verify: {
            const EFEquation eq = cfg.equation->make_equation();
            auto problem = make_problem(eq, cfg.problem->t0, cfg.problem->init);
            const auto controls = cfg.controls.to_controls(cfg.problem->t_end);

            ordered_json item;
            item["equation"] = eq.label();
            Trajectory traj = integrate(problem, controls);
            item["trajectory"] = run_detail::trajectory_summary(traj);

            if (traj.status().reached_end()) {
                const double classify_from = std::max(cfg.problem->t0, 1.0);
                auto grid = geometric_grid(classify_from, traj.t_last(),
                                           cfg.classifier.grid_ratio);
                GrowthReport solution_report =
                    classify_growth(resample(traj, grid, 0), cfg.classifier);
                item["solution_class"] = to_json(solution_report);
                if (solution_report.growth_class == GrowthClass::S1 && solution_report.confident) {
                    ++failures;
                    notes.push_back("solution classified confident S1: exclusion violated");
                }
                Theorem3Result t3 = check_theorem3(problem, controls);
                ordered_json jt3;
                jt3["applicable"] = t3.applicable;
                jt3["smallest_i"] = t3.smallest_i;
                ordered_json reps = ordered_json::array();
                for (const auto& vr : t3.reports) reps.push_back(to_json(vr));
                jt3["reports"] = std::move(reps);
                item["vanishing_subsequences"] = std::move(jt3);
                if (t3.applicable && t3.smallest_i > eq.order) ++failures;
            }
            item["longterm"] = to_json(classify_longterm(traj));

            // Assumption falsification for the equation's own F.
            auto F = make_ef_rhs(eq);
            const double nu = (1.0 + eq.lambda) / 2.0;  // any 1 < nu < lambda
            FalsificationReport rep_i =
                check_assumption_i(F, nu, default_s1_corpus(), 1e5, cfg.classifier);
            item["assumption_i"] = to_json(rep_i);
            if (!rep_i.passed) ++failures;
            if (eq.phi.tag() == PhiSpec::Tag::Power && eq.phi.sigma() > -eq.order) {
                AssumptionParams params{nu, eq.lambda, eq.phi.sigma()};
                FalsificationReport rep_ii =
                    check_assumption_ii(F, params, eq.order, default_s3_corpus(), cfg.classifier);
                item["assumption_ii"] = to_json(rep_ii);
                if (!rep_ii.passed) ++failures;
                item["theorem3_bound"] = theorem3_bound(eq.order, eq.phi.sigma(), eq.lambda);
            }
            results.push_back(std::move(item));
            out.summary = "verify: " + std::to_string(failures) + " failure(s)";
            break;
        }
        case ScenarioKind::Scan: {
            const EFEquation eq = cfg.equation->make_equation();
            const auto controls = cfg.controls.to_controls(cfg.problem->t_end);
            Lemma2Report rep = lemma2_harness(eq, cfg.problem->t0, cfg.ic_grid, controls,
                                              cfg.classifier, jobs);
            ordered_json item;
            item["lemma2"] = to_json(rep);
            if (!rep.passed) ++failures;

            ordered_json longterm = ordered_json::array();
            int undetermined = 0;
            for (const auto& ic : cfg.ic_grid) {
                Trajectory traj = integrate(make_problem(eq, cfg.problem->t0, ic), controls);
                LongTermClass cls = classify_longterm(traj);
                ordered_json jl;
                jl["init"] = ic;
                jl["class"] = to_json(cls);
                longterm.push_back(std::move(jl));
                if (cls.kind == LongTermClass::Kind::Undetermined) ++undetermined;
            }
            item["longterm"] = std::move(longterm);
            item["undetermined_count"] = undetermined;
            results.push_back(std::move(item));
            out.summary = "scan: " + std::to_string(cfg.ic_grid.size()) + " ICs, lemma2 " +
                          (rep.passed ? "PASS" : "FAIL") + ", " + std::to_string(undetermined) +
                          " undetermined";
            break;
        }
        case ScenarioKind::Corpus: {
            corpus::CorpusOutcome outcome = corpus::run_acceptance_corpus(jobs);
            results.push_back(corpus::to_json(outcome));
            notes = outcome.discrepancy_notes;
            std::string lines;
            for (const auto& c : outcome.criteria) {
                lines += (c.passed ? "PASS" : "FAIL");
                lines += " criterion " + std::to_string(c.id) + " [" + c.name + "]: " +
                         c.details + "\n";
                if (!c.passed) ++failures;
            }
            out.summary = lines + (outcome.all_passed() ? "all criteria passed"
                                                        : "some criteria FAILED");
            break;
        }
    }

    doc["results"] = std::move(results);
    doc["discrepancy_notes"] = notes;
    ordered_json summary;
    summary["items"] = doc["results"].size();
    summary["failures"] = failures;
    doc["summary"] = std::move(summary);
    out.document = std::move(doc);
    out.exit_code = failures > 0 ? 1 : 0;
    return out;
}

}  // namespace eflab
