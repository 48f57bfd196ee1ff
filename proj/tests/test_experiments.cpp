#include <doctest.h>

#include <cmath>

#include "mvns/experiments.hpp"
#include "mvns/field_sampling.hpp"

using namespace mvns;

namespace {

ExperimentInputs small_inputs(double epsilon = 0.5) {
    ExperimentInputs in;
    in.grid.modes_per_axis = 4;
    in.params.nu = 2.5;
    in.params.epsilon = epsilon;
    in.params.kappa = {0.3, 0.1};
    in.params.noise_modes = 8;
    in.params.drift.phi1 = {0.01, 0.0};
    in.params.drift.psi1 = {0.002, 0.0};
    in.params.drift.phi2 = in.params.drift.phi1;
    in.params.drift.psi2 = in.params.drift.psi1;
    in.params.diffusion = DiffusionSpec::geometric(8, 0.03, 0.03, 1.0 / std::numbers::sqrt2);
    in.symbol.g.terms.push_back({1.0, 0.0, pattern_field(in.grid, "tg", 0.3)});
    in.symbol.h.terms.push_back({1.0, 0.0, pattern_field(in.grid, "tg", 0.15)});
    in.symbol.h.terms.push_back(
        {std::numbers::sqrt2, 0.0, pattern_field(in.grid, "shear_x", 0.15)});
    in.ledger = constant_ledger(in.params, in.symbol, in.grid, 300, 7);
    in.sizing.seeds = 6;
    in.sizing.particles = 6;
    in.sizing.dt = 1.0 / 32.0;
    in.sizing.workers = 2;
    in.sizing.pooled_atoms_cap = 18;
    return in;
}

void check_report(const ExperimentReport& rep) {
    for (const auto& a : rep.assertions) {
        INFO(rep.kind, "/", a.id, " observed=", a.observed, " bound=", a.bound,
             " se=", a.stderr_);
        CHECK(a.pass);
        CHECK(!a.constant_ref.empty());
    }
    CHECK(rep.pass());
}

} // namespace

TEST_CASE("moment experiment passes the M1/M2 bounds on the default family") {
    const auto in = small_inputs();
    REQUIRE(in.ledger.dissipative);
    const auto rep = moment_experiment(in, 10.0);
    REQUIRE(rep.assertions.size() == 3);
    check_report(rep);
    CHECK(!rep.curves.empty());
}

TEST_CASE("moment experiment: zero forcing degenerates to a decay check") {
    auto in = small_inputs(0.0);
    in.symbol = Symbol{};
    in.ledger = constant_ledger(in.params, in.symbol, in.grid, 100, 7);
    const auto rep = moment_experiment(in, 4.0);
    REQUIRE(rep.assertions.size() == 1);
    CHECK(rep.assertions[0].id == "m2-monotone-decay");
    check_report(rep);
}

TEST_CASE("moment experiment refuses a non-dissipative ledger unless forced") {
    auto in = small_inputs();
    in.params.nu = 0.05;  // far below 2 k0 / lambda
    in.ledger = constant_ledger(in.params, in.symbol, in.grid, 100, 7);
    REQUIRE(!in.ledger.dissipative);
    CHECK_THROWS_AS(moment_experiment(in, 10.0), NonDissipativeError);

    in.sizing.force = true;
    in.sizing.seeds = 2;
    const auto rep = moment_experiment(in, 1.0);
    CHECK(rep.assertions.empty());  // bounds skipped
    CHECK(!rep.notes.empty());
}

TEST_CASE("fourth-moment experiment passes the M3 bound") {
    const auto in = small_inputs();
    const auto rep = moment4_experiment(in, 100.0);
    REQUIRE(rep.assertions.size() == 2);
    check_report(rep);
}

TEST_CASE("regularity experiment passes the M4 bound") {
    const auto in = small_inputs();
    const auto rep = regularity_experiment(in, 10.0);
    REQUIRE(rep.assertions.size() == 1);
    CHECK(rep.assertions[0].constant_ref == "M4");
    check_report(rep);
}

TEST_CASE("stability experiment: monotone ladder, floor, gronwall envelope") {
    auto in = small_inputs();
    in.sizing.seeds = 6;
    StabilityKnobs k;
    k.levels = 4;
    k.offset0 = 1.0;
    k.symbol_offset0 = 0.5;
    k.t_fix = 1.5;
    const auto rep = stability_experiment(in, k);
    REQUIRE(rep.assertions.size() == 3);
    check_report(rep);

    // ladder curve actually decreases overall
    double first = -1.0, last = -1.0;
    for (const auto& c : rep.curves) {
        if (c.curve == "stability-ladder") {
            if (first < 0.0) first = c.y;
            last = c.y;
        }
    }
    CHECK(last < first);
}

TEST_CASE("translation identity: pathwise and coupled-noise forms") {
    auto in = small_inputs();
    in.sizing.seeds = 4;
    TranslationKnobs k;
    k.shifts = {0.0, 0.5, std::numbers::pi};
    k.horizon = 1.0;
    k.coupled_shift = 0.5;
    const auto rep = translation_experiment(in, k);
    REQUIRE(rep.assertions.size() == 4);
    check_report(rep);

    // the s = 0 gap is exactly zero
    for (const auto& a : rep.assertions) {
        if (a.id == "pathwise-eps0-s0") CHECK(a.observed == 0.0);
    }
}

TEST_CASE("absorbing experiment: entry and containment") {
    auto in = small_inputs();
    in.sizing.seeds = 4;
    AbsorbingKnobs k;
    k.radius_factors = {3.0, 10.0};
    k.hull_samples = 2;
    k.extra_horizon = 2.0;
    const auto rep = absorbing_experiment(in, k);
    REQUIRE(rep.assertions.size() == 2 * 2 + 1);
    check_report(rep);
}

TEST_CASE("attractor experiment: ladder, attraction, quasi-invariance") {
    auto in = small_inputs();
    in.sizing.particles = 6;
    AttractorKnobs k;
    k.hull_samples = 2;
    k.ladder = {1.0, 2.0, 4.0};
    k.probe_dt = 0.5;
    k.attraction_times = {0.5, 1.0, 2.0};
    k.pullback_seeds = 2;
    const auto rep = attractor_experiment(in, k);
    REQUIRE(rep.assertions.size() == 4);
    check_report(rep);
}

TEST_CASE("attractor collapses to the rest state without forcing or noise") {
    auto in = small_inputs(0.0);
    in.symbol = Symbol{};
    in.params.drift.phi1 = {0.0, 0.0};
    in.params.drift.psi1 = {0.0, 0.0};
    in.params.drift.phi2 = in.params.drift.phi1;
    in.params.drift.psi2 = in.params.drift.psi1;
    in.params.diffusion = DiffusionSpec::geometric(8, 0.0, 0.0, 0.5);
    in.ledger = constant_ledger(in.params, in.symbol, in.grid, 100, 7);

    AttractorKnobs k;
    k.hull_samples = 1;
    k.ladder = {1.0, 2.0, 4.0};
    k.probe_dt = 0.5;
    k.attraction_times = {0.5, 1.0, 2.0};
    k.pullback_seeds = 2;
    k.start_radius4 = 16.0;  // atoms of H norm 2
    const auto rep = attractor_experiment(in, k);

    // attraction curve decays toward the rest state
    double final_alpha = -1.0;
    for (const auto& c : rep.curves) {
        if (c.curve == "attraction") final_alpha = c.y;
    }
    CHECK(final_alpha >= 0.0);
    CHECK(final_alpha < 0.1);
}

TEST_CASE("hull members preserve sup norms and index 0 is the base") {
    const auto in = small_inputs();
    const Symbol m0 = hull_member(in.symbol, 0);
    CHECK(m0.g.terms[0].theta == in.symbol.g.terms[0].theta);
    for (int j = 1; j < 4; ++j) {
        const Symbol m = hull_member(in.symbol, j);
        CHECK(m.g.sup_norm() == doctest::Approx(in.symbol.g.sup_norm()).epsilon(1e-12));
        CHECK(m.h.grad_window_bound() ==
              doctest::Approx(in.symbol.h.grad_window_bound()).epsilon(1e-12));
    }
}
