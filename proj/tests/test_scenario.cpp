#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "eflab/report.hpp"
#include "eflab/run.hpp"
#include "eflab/scenario.hpp"

using namespace eflab;

namespace {

const char* kThomasFermiScenario = R"(# decaying branch regression
version = 1
kind = integrate

[equation]
order = 2
phi = power
phi_coefficient = 1
phi_sigma = -0.5
lambda = 1.5

[problem]
t0 = 1
init = 144, -432
t_end = 10

[controls]
rtol = 1e-9
)";

ScenarioConfig parse_text_or_fail(const std::string& text) {
    std::vector<std::string> violations;
    auto cfg = parse_scenario_text(text, violations);
    INFO("violations: " << [&] {
        std::string all;
        for (const auto& v : violations) all += v + "; ";
        return all;
    }());
    REQUIRE(cfg.has_value());
    return *cfg;
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults filled") {
    ScenarioConfig cfg = parse_text_or_fail(kThomasFermiScenario);
    CHECK(cfg.kind == ScenarioKind::Integrate);
    REQUIRE(cfg.equation.has_value());
    CHECK(cfg.equation->order == 2);
    CHECK(cfg.equation->phi_tag == "power");
    CHECK(cfg.equation->phi_sigma == -0.5);
    CHECK(cfg.equation->lambda == 1.5);
    REQUIRE(cfg.problem.has_value());
    CHECK(cfg.problem->init == std::vector<double>{144.0, -432.0});
    // defaults
    CHECK(cfg.controls.atol == 1e-12);
    CHECK(cfg.controls.blowup_threshold == 1e12);
    CHECK(cfg.classifier.block_count == 16);
    CHECK(cfg.out_format == "json");
}

TEST_CASE("sublinear verify scenarios are rejected") {
    std::string text = kThomasFermiScenario;
    text.replace(text.find("kind = integrate"), 16, "kind = verify");
    text.replace(text.find("lambda = 1.5"), 12, "lambda = 0.5");
    std::vector<std::string> violations;
    CHECK_FALSE(parse_scenario_text(text, violations).has_value());
    bool found = false;
    for (const auto& v : violations)
        if (v.find("superlinear") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("singular phi at t0 is rejected") {
    std::string text = kThomasFermiScenario;
    text.replace(text.find("t0 = 1"), 6, "t0 = 0");
    std::vector<std::string> violations;
    CHECK_FALSE(parse_scenario_text(text, violations).has_value());
    bool found = false;
    for (const auto& v : violations)
        if (v.find("singular") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("all violations are reported, not just the first") {
    const std::string text = R"(
kind = integrate
[equation]
order = 2
phi = warp
lambda = not_a_number
[problem]
t0 = 5
t_end = 2
init = 1 2
)";
    std::vector<std::string> violations;
    CHECK_FALSE(parse_scenario_text(text, violations).has_value());
    // missing version, unknown phi tag, bad lambda, t_end <= t0
    CHECK(violations.size() >= 4);
    bool version = false, phi = false, lambda = false, window = false;
    for (const auto& v : violations) {
        if (v.find("version") != std::string::npos) version = true;
        if (v.find("unknown tag") != std::string::npos) phi = true;
        if (v.find("lambda") != std::string::npos) lambda = true;
        if (v.find("t_end") != std::string::npos) window = true;
    }
    CHECK(version);
    CHECK(phi);
    CHECK(lambda);
    CHECK(window);
}

TEST_CASE("scan scenarios validate the IC grid") {
    const std::string text = R"(
version = 1
kind = scan
[equation]
order = 2
phi = power
phi_coefficient = -1
phi_sigma = 0
lambda = 3
[problem]
t0 = 0
t_end = 50
[scan]
ic = 1 0
ic = 2
)";
    std::vector<std::string> violations;
    CHECK_FALSE(parse_scenario_text(text, violations).has_value());
    bool arity = false;
    for (const auto& v : violations)
        if (v.find("scan.ic[1]") != std::string::npos) arity = true;
    CHECK(arity);
}

TEST_CASE("scenario round-trip through the canonical form") {
    ScenarioConfig cfg = parse_text_or_fail(kThomasFermiScenario);
    ScenarioConfig again = parse_text_or_fail(serialize_scenario(cfg));
    CHECK(again == cfg);

    // with scan + data + output sections populated
    ScenarioConfig full;
    full.kind = ScenarioKind::Scan;
    full.equation = EquationSpec{2, "power", -1.0, 0.0, 1, 3.0};
    full.problem = ProblemSpec{0.0, {}, 100.0};
    full.ic_grid = {{1.0, 0.0}, {2.0, 1.0}};
    full.out_path = "scan.json";
    full.controls.rtol = 1e-7;
    full.classifier.grid_ratio = 1.001;
    ScenarioConfig full_again = parse_text_or_fail(serialize_scenario(full));
    CHECK(full_again == full);
}

TEST_CASE("unreadable scenario paths raise config errors") {
    CHECK_THROWS_AS(parse_scenario("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("json rendering uses 17 significant digits and fixed order") {
    ordered_json doc;
    doc["b_first"] = 0.144;
    doc["a_second"] = 1.0;
    doc["list"] = ordered_json::array({ordered_json(1.5), ordered_json("x")});
    const std::string text = render_json(doc);
    CHECK(text == "{\"b_first\":0.14399999999999999,\"a_second\":1,\"list\":[1.5,\"x\"]}\n");
}

TEST_CASE("json rendering is byte-stable across repeated renders") {
    ordered_json doc;
    doc["pi"] = 3.141592653589793;
    doc["neg"] = -0.0001;
    doc["big"] = 1e300;
    CHECK(render_json(doc) == render_json(doc));
}

TEST_CASE("re-running a scenario yields byte-identical reports") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::Scan;
    cfg.equation = EquationSpec{2, "power", -1.0, 0.0, 1, 3.0};
    cfg.problem = ProblemSpec{0.0, {}, 40.0};
    cfg.controls.rtol = 1e-7;
    cfg.controls.atol = 1e-10;
    cfg.ic_grid = {{1.0, 0.0}, {2.0, 0.0}};
    const std::string a = render_json(run_scenario(cfg).document);
    const std::string b = render_json(run_scenario(cfg).document);
    CHECK(a == b);
    CHECK(a.find("\"lemma2\"") != std::string::npos);
}

TEST_CASE("trajectory CSV starts with the initial condition row") {
    ScenarioConfig cfg = parse_text_or_fail(kThomasFermiScenario);
    cfg.out_format = "csv";
    RunReport rep = run_scenario(cfg);
    REQUIRE(!rep.csv.empty());
    CHECK(rep.csv.rfind("t,y0,y1\n1,144,-432\n", 0) == 0);
}

TEST_CASE("empty scan results still render valid JSON") {
    ordered_json doc;
    doc["results"] = ordered_json::array();
    const std::string text = render_json(doc);
    CHECK(text == "{\"results\":[]}\n");
    CHECK_NOTHROW(nlohmann::json::parse(text));
}

TEST_CASE("rendered reports are valid JSON for a real run") {
    ScenarioConfig cfg = parse_text_or_fail(kThomasFermiScenario);
    RunReport rep = run_scenario(cfg);
    CHECK(rep.exit_code == 0);
    auto parsed = nlohmann::json::parse(render_json(rep.document));
    CHECK(parsed["tool"] == "eflab");
    CHECK(parsed["schema_version"] == 1);
    CHECK(parsed["results"].size() == 1);
}

TEST_CASE("CSV series import accepts headers and bare columns") {
    const char* path = "series_roundtrip_test.csv";
    {
        std::ofstream out(path);
        out << "time,value\n1,1\n2,8\n4,64\n";
    }
    SampleSeries s = csv::read_series(path);
    CHECK(s.times == std::vector<double>{1, 2, 4});
    CHECK(s.values == std::vector<double>{1, 8, 64});

    {
        std::ofstream out(path);
        out << "1,1\n2,8\n4,64\n";
    }
    CHECK(csv::read_series(path).size() == 3);

    {
        std::ofstream out(path);
        out << "time,value\n2,1\n1,1\n";
    }
    CHECK_THROWS_AS(csv::read_series(path), ConfigError);  // not strictly increasing
    std::remove(path);
    CHECK_THROWS_AS(csv::read_series(path), ConfigError);
}

TEST_CASE("RFC-4180 quoting") {
    CHECK(csv::quote_field("plain") == "plain");
    CHECK(csv::quote_field("a,b") == "\"a,b\"");
    CHECK(csv::quote_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::quote_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("shipped scenario presets parse cleanly") {
    for (const char* name :
         {"thomas_fermi_integrate.ini", "thomas_fermi_verify.ini", "oscillator_scan.ini",
          "classify_from_csv.ini", "riccati_blowup.ini"}) {
        const std::string path = std::string(EFLAB_SCENARIO_DIR) + "/" + name;
        INFO(path);
        CHECK_NOTHROW(parse_scenario(path));
    }
}

TEST_CASE("blow-up scenario reports the located escape time") {
    ScenarioConfig cfg =
        parse_scenario(std::string(EFLAB_SCENARIO_DIR) + "/riccati_blowup.ini");
    RunReport rep = run_scenario(cfg);
    CHECK(rep.exit_code == 0);
    auto parsed = nlohmann::json::parse(render_json(rep.document));
    const auto& status = parsed["results"][0]["trajectory"]["status"];
    CHECK(status["kind"] == "blow_up");
    CHECK(std::abs(status["t_star"].get<double>() - 1.0) <= 0.01);
}

TEST_CASE("verify scenario runs the whole pipeline") {
    ScenarioConfig cfg = parse_scenario(std::string(EFLAB_SCENARIO_DIR) +
                                        "/thomas_fermi_verify.ini");
    RunReport rep = run_scenario(cfg);
    CHECK(rep.exit_code == 0);
    auto parsed = nlohmann::json::parse(render_json(rep.document));
    const auto& item = parsed["results"][0];
    CHECK(item["trajectory"]["status"]["kind"] == "reached_end");
    CHECK(item["solution_class"]["class"] == "S3");
    CHECK(item["vanishing_subsequences"]["smallest_i"].get<int>() <= 2);
    CHECK(item["longterm"]["kind"] == "monotone_to_zero");
    CHECK(item["assumption_i"]["passed"] == true);
    CHECK(item["assumption_ii"]["passed"] == true);
    CHECK(item["theorem3_bound"].get<double>() == -3.0);
}

TEST_CASE("scan scenario classifies all oscillator runs as oscillatory") {
    ScenarioConfig cfg = parse_scenario(std::string(EFLAB_SCENARIO_DIR) +
                                        "/oscillator_scan.ini");
    RunReport rep = run_scenario(cfg, 2);
    CHECK(rep.exit_code == 0);
    auto parsed = nlohmann::json::parse(render_json(rep.document));
    const auto& item = parsed["results"][0];
    CHECK(item["lemma2"]["passed"] == true);
    CHECK(item["undetermined_count"].get<int>() == 0);
    REQUIRE(item["longterm"].size() == 9);
    for (const auto& entry : item["longterm"])
        CHECK(entry["class"]["kind"] == "oscillatory");
}

TEST_CASE("classify scenario runs from a CSV of samples") {
    const char* path = "cubic_samples_test.csv";
    {
        std::ofstream out(path);
        out << "time,value\n";
        for (double t = 1.0; t <= 1e6; t *= 1.002) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, t * t * t);
            out << buf;
        }
    }
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::Classify;
    cfg.input_csv = path;
    RunReport rep = run_scenario(cfg);
    std::remove(path);
    auto parsed = nlohmann::json::parse(render_json(rep.document));
    const auto& report = parsed["results"][0]["report"];
    CHECK(report["class"] == "S3");
    CHECK(std::abs(report["pi_hat"].get<double>() - 3.0) <= 0.05);
}
