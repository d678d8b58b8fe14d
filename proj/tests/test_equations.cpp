#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eflab/equations.hpp"

using namespace eflab;

TEST_CASE("make_ef_rhs evaluates phi(t) |y|^lambda sgn y") {
    EFEquation tf{2, PhiSpec::power(1.0, -0.5), 1.5};
    auto F = make_ef_rhs(tf);
    CHECK(F(4.0, 9.0) == Catch::Approx(13.5).epsilon(1e-14));

    EFEquation sq{2, PhiSpec::power(1.0, 0.0), 2.0};
    auto F2 = make_ef_rhs(sq);
    CHECK(F2(7.0, -3.0) == Catch::Approx(-9.0).epsilon(1e-14));

    for (auto& eq : {tf, sq}) CHECK(make_ef_rhs(eq)(5.0, 0.0) == 0.0);
}

TEST_CASE("rhs is odd in y, exactly up to sign") {
    EFEquation eq{2, PhiSpec::power(2.5, -0.5), 1.5};
    auto F = make_ef_rhs(eq);
    for (double t : {1.0, 3.0, 17.5, 400.0})
        for (double y : {1e-8, 0.25, 1.0, 9.0, 1e6})
            CHECK(F(t, -y) == -F(t, y));
}

TEST_CASE("phi domain errors") {
    auto p = PhiSpec::power(1.0, -0.5);
    CHECK_THROWS_AS(p(0.0), DomainError);
    CHECK_THROWS_AS(p(-1.0), DomainError);
    CHECK(PhiSpec::power(1.0, 2.0)(0.0) == 0.0);  // integer powers extend to t = 0
    CHECK_THROWS_AS(PhiSpec::exp_root(1)(-0.5), DomainError);
    CHECK_THROWS_AS(PhiSpec::exp_root(2), ConfigError);
    CHECK_THROWS_AS(PhiSpec::power(0.0, 1.0), ConfigError);
}

TEST_CASE("catalog exponents match the classifier") {
    ClassifierConfig config;
    const PhiSpec specs[] = {
        PhiSpec::power(1.0, -0.5), PhiSpec::power(3.0, 2.0),  PhiSpec::exp_root(1),
        PhiSpec::exp_root(-1),     PhiSpec::exp_quadratic(1), PhiSpec::exp_quadratic(-1),
        PhiSpec::bounded_oscillation(), PhiSpec::oscillating_mix(),
    };
    for (const auto& phi : specs) {
        auto grid = geometric_grid(1.0, phi.classification_horizon(), config.grid_ratio);
        GrowthReport rep =
            classify_growth(sample_function([&](double t) { return phi(t); }, grid, phi.label()),
                            config);
        if (phi.known_pi()) {
            if (phi.known_pi()->is_finite()) {
                REQUIRE(rep.pi_hat.is_finite());
                CHECK(std::abs(rep.pi_hat.value() - phi.known_pi()->value()) <= 0.1);
            } else {
                CHECK(rep.pi_hat == *phi.known_pi());
            }
        }
        if (phi.known_xi()) {
            if (phi.known_xi()->is_finite()) {
                REQUIRE(rep.xi_hat.is_finite());
                CHECK(std::abs(rep.xi_hat.value() - phi.known_xi()->value()) <= 0.1);
            } else {
                CHECK(rep.xi_hat == *phi.known_xi());
            }
        }
    }
}

TEST_CASE("thomas-fermi preset") {
    auto preset = thomas_fermi_preset();
    CHECK(preset.equation.order == 2);
    CHECK(preset.equation.lambda == 1.5);
    auto F = make_ef_rhs(preset.equation);
    CHECK(F(1.0, 1.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(preset.make_problem(0.5, 1.0, 0.0), ConfigError);

    auto problem = preset.make_problem(1.0, 144.0, -432.0);
    IntegrationControls c;
    c.t_end = 3.0;
    c.rtol = 1e-9;
    c.atol = 1e-12;
    auto traj = integrate(problem, c);
    REQUIRE(traj.status().reached_end());
    CHECK(std::abs(traj.eval(3.0, 0) - 144.0 / 27.0) / (144.0 / 27.0) <= 1e-6);
}

TEST_CASE("power-law particular solutions") {
    auto tf = power_law_solution(2, -0.5, 1.5, 1.0);
    CHECK(tf.exponent == -3.0);
    CHECK(tf.amplitude == Catch::Approx(144.0).epsilon(1e-13));
    CHECK(tf.falling_factorial == Catch::Approx(12.0).epsilon(1e-13));
    CHECK(tf.sign == 1);

    auto cubic = power_law_solution(2, 0.0, 3.0, 1.0);
    CHECK(cubic.exponent == -1.0);
    CHECK(cubic.amplitude == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));

    auto riccati = power_law_solution(1, 0.0, 2.0, -1.0);
    CHECK(riccati.exponent == -1.0);
    CHECK(riccati.amplitude == Catch::Approx(1.0).epsilon(1e-13));
    // y = 1/t indeed solves y' = -y^2
    for (double t : {1.0, 4.0}) CHECK(riccati.derivative(1, t) == Catch::Approx(-std::pow(riccati(t), 2)));
}

TEST_CASE("power-law residuals vanish by substitution") {
    struct Case {
        int n;
        double sigma, lambda, phi0;
    };
    for (const Case c : {Case{2, -0.5, 1.5, 1.0}, Case{2, 0.0, 3.0, 1.0}, Case{1, 0.0, 2.0, -1.0},
                         Case{3, 1.0, 2.0, -1.0}}) {
        auto sol = power_law_solution(c.n, c.sigma, c.lambda, c.phi0);
        for (double t : {1.0, 2.0, 5.0, 10.0, 100.0}) {
            const double lhs = sol.derivative(c.n, t);
            const double y = sol(t);
            const double rhs = c.phi0 * std::pow(t, c.sigma) * std::pow(std::abs(y), c.lambda) *
                               sgn(y);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
        }
    }
}

TEST_CASE("power-law construction rejections") {
    // n=1, sigma=0, lambda=2, phi0=+1: P = m = -1, so P/phi0 < 0
    CHECK_THROWS_AS(power_law_solution(1, 0.0, 2.0, 1.0), ConstructionError);
    CHECK_THROWS_AS(power_law_solution(2, -2.5, 3.0, 1.0), ConfigError);  // sigma + n <= 0
    CHECK_THROWS_AS(power_law_solution(2, 0.0, 1.0, 1.0), ConfigError);   // lambda <= 1
    CHECK_THROWS_MATCHES(power_law_solution(1, 0.0, 2.0, 1.0), ConstructionError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("P=")));
}

TEST_CASE("assumption params validation") {
    AssumptionParams tf{1.25, 1.5, -0.5};
    CHECK_NOTHROW(tf.validate(2));  // -1/2 > -2
    CHECK_THROWS_AS((AssumptionParams{1.0, 1.5, -0.5}).validate(2), ConfigError);
    CHECK_THROWS_AS((AssumptionParams{1.25, 0.5, -0.5}).validate(2), ConfigError);
    CHECK_THROWS_AS((AssumptionParams{1.25, 1.5, -2.5}).validate(2), ConfigError);
}

TEST_CASE("assumption (i) falsification") {
    EFEquation tf{2, PhiSpec::power(1.0, -0.5), 1.5};
    auto F = make_ef_rhs(tf);

    // ratio t^{-1/2} e^{sqrt t / 4} outgrows every power
    auto rep = check_assumption_i(F, 1.25, default_s1_corpus(), 1e5);
    CHECK(rep.passed);
    CHECK(rep.samples_only);
    REQUIRE(rep.entries.size() == 3);
    for (const auto& e : rep.entries) CHECK(e.outcome != EntryOutcome::Fail);
    CHECK(rep.entries[0].report->growth_class == GrowthClass::S1);

    // constant ratio 1 is S3, so nu = lambda falsifies assumption (i)
    EFEquation flat{2, PhiSpec::power(1.0, 0.0), 1.5};
    auto rep_fail = check_assumption_i(make_ef_rhs(flat), 1.5,
                                       {{"e^sqrt(t)",
                                         [](double t) { return std::exp(std::sqrt(t)); },
                                         1e5,
                                         std::nullopt}},
                                       1e5);
    CHECK_FALSE(rep_fail.passed);
    CHECK(rep_fail.entries[0].outcome == EntryOutcome::Fail);

    auto rep_empty = check_assumption_i(F, 1.25, {}, 1e5);
    CHECK(rep_empty.passed);
    CHECK(rep_empty.empty_corpus_warning);
    CHECK(rep_empty.entries.empty());
}

TEST_CASE("assumption (ii) falsification") {
    EFEquation tf{2, PhiSpec::power(1.0, -0.5), 1.5};
    auto F = make_ef_rhs(tf);
    AssumptionParams params{1.25, 1.5, -0.5};

    auto rep = check_assumption_ii(F, params, 2, default_s3_corpus());
    CHECK(rep.passed);
    for (const auto& e : rep.entries) {
        CHECK(e.outcome == EntryOutcome::Pass);
        REQUIRE(e.margin.has_value());
        CHECK(*e.margin >= -0.1);
    }

    // composed exponent arithmetic: F(., t^-3) ~ t^-5 = (3/2)(-3) - 1/2
    {
        auto entry = rep.entries[0];
        REQUIRE(entry.report.has_value());
        REQUIRE(entry.report->pi_hat.is_finite());
        CHECK(std::abs(entry.report->pi_hat.value() - (-5.0)) <= 0.1);
    }
    // and F(., t) ~ t^1 = (3/2)(1) - 1/2
    {
        auto entry = rep.entries[3];
        REQUIRE(entry.report.has_value());
        CHECK(std::abs(entry.report->pi_hat.value() - 1.0) <= 0.1);
    }

    // e^t * t escapes every power: composed function classifies S1 -> FAIL
    auto rep_fail = check_assumption_ii(
        [](double t, double y) { return std::exp(t) * y; }, AssumptionParams{1.5, 2.0, 0.0}, 1,
        {{"t", [](double t) { return t; }, 200.0, ExtReal::finite(1.0)}});
    CHECK_FALSE(rep_fail.passed);
    CHECK(rep_fail.entries[0].outcome == EntryOutcome::Fail);
    REQUIRE(rep_fail.entries[0].report.has_value());
    CHECK(rep_fail.entries[0].report->growth_class == GrowthClass::S1);
}

TEST_CASE("make_problem guards the phi domain") {
    EFEquation tf{2, PhiSpec::power(1.0, -0.5), 1.5};
    CHECK_THROWS_AS(make_problem(tf, 0.0, {1.0, 0.0}), ConfigError);
    CHECK_NOTHROW(make_problem(tf, 1.0, {1.0, 0.0}));
    EFEquation constant{2, PhiSpec::power(-1.0, 0.0), 3.0};
    CHECK_NOTHROW(make_problem(constant, 0.0, {1.0, 0.0}));
}
