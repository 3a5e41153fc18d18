#include <doctest.h>

#include <cmath>

#include "snls/experiments.hpp"
#include "snls/grid.hpp"

using namespace snls;

// The full-size experiments run in the CLI and the acceptance suite; here we
// exercise the machinery at reduced size and the report plumbing.

TEST_CASE("subcritical limit report is green and decreasing") {
    SubcriticalLimitOptions opts;
    opts.n = 128;
    opts.dt = 2e-3;
    const ExperimentReport report = subcritical_limit(opts);
    CHECK(report.passed());
    CHECK(report.name == "subcritical-limit");
}

TEST_CASE("uniform bound sweep is green at reduced size") {
    UniformBoundOptions opts;
    opts.n = 128;
    opts.dt = 2e-3;
    CHECK(uniform_bound_sweep(opts).passed());
}

TEST_CASE("stability experiment is green at reduced size") {
    StabilityOptions opts;
    opts.n = 128;
    opts.dt = 2e-3;
    opts.epsilons = {0.0, 0.5, 1.0};
    CHECK(stability_experiment(opts).passed());
}

TEST_CASE("perturbed duhamel: stochastic and smooth forcing channels") {
    PerturbedDuhamelOptions opts;
    opts.n = 128;
    opts.dt = 5e-3;
    CHECK(perturbed_duhamel_experiment(opts).passed());
    opts.stochastic_forcing = false;
    CHECK(perturbed_duhamel_experiment(opts).passed());
}

TEST_CASE("forced duhamel solve rejects g(a) != 0") {
    const GridPtr g = make_grid(16.0, 64);
    const ComplexField u0 = make_field(g, [](double x) {
        return cdouble(std::exp(-0.5 * x * x), 0.0);
    });
    EquationSpec spec;
    std::vector<ComplexField> bad(11, u0);  // g(a) = u0 != 0
    CHECK_THROWS_AS(forced_duhamel_solve(u0, spec, bad, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("mass growth at reduced size: rates, drift, closed form") {
    MassGrowthOptions opts;
    opts.n = 128;
    opts.paths = 32;
    opts.modes = 8;
    const ExperimentReport report = mass_growth_no_correction(opts);
    CHECK(report.passed());
}

TEST_CASE("experiments are bitwise reproducible for a fixed seed") {
    MassGrowthOptions opts;
    opts.n = 128;
    opts.paths = 8;
    opts.modes = 4;
    const ExperimentReport a = mass_growth_no_correction(opts);
    const ExperimentReport b = mass_growth_no_correction(opts);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].value == b.rows[i].value);  // bitwise
    }
    CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("burkholder experiment report plumbing") {
    BurkholderOptions opts;
    opts.samples = 400;
    opts.steps = 64;
    const ExperimentReport report = burkholder_experiment(opts);
    CHECK(report.passed());
    const std::string text = report.to_text();
    CHECK(text.find("scalar_bm_ratio") != std::string::npos);
    CHECK(text.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("experiment dispatch knows its names") {
    CHECK_THROWS_AS(run_experiment("no-such-thing", 1), std::invalid_argument);
    const auto names = experiment_names();
    CHECK(names.size() == 7);
}
