#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvns/field_sampling.hpp"
#include "mvns/forcing.hpp"
#include "mvns/operators.hpp"

using namespace mvns;

namespace {

GridSpec grid4() {
    GridSpec g;
    g.modes_per_axis = 4;
    return g;
}

Symbol two_tone_symbol(const GridSpec& g) {
    // g: single tone on the cellular pattern; h: the paper-style two-tone
    // sin t + sin(sqrt 2 t) sharing one smooth profile.
    const double r2 = std::numbers::sqrt2;
    Symbol sym;
    sym.g.terms.push_back({1.0, 0.0, pattern_field(g, "tg", 0.5)});
    const SpectralField prof = pattern_field(g, "tg", 1.0 / std::numbers::sqrt2);
    sym.h.terms.push_back({1.0, 0.0, prof});
    sym.h.terms.push_back({r2, 0.0, prof});
    return sym;
}

} // namespace

TEST_CASE("eval: zero phase argument gives the zero field") {
    const GridSpec g = grid4();
    APSignal sig;
    sig.terms.push_back({2.0, 1.0, pattern_field(g, "shear_x", 1.0)});
    const double t = -0.5;  // omega*t + theta = 0
    CHECK(std::sqrt(norms(sig.eval(g, t)).h_norm_sq) < 1e-14);

    // two-tone analogue of the separated-variable example vanishes at t = 0
    const Symbol sym = two_tone_symbol(g);
    CHECK(std::sqrt(norms(sym.h.eval(g, 0.0)).h_norm_sq) < 1e-14);
}

TEST_CASE("eval: quarter period returns the amplitude exactly") {
    const GridSpec g = grid4();
    const SpectralField amp = pattern_field(g, "mode11", 0.7);
    APSignal sig;
    sig.terms.push_back({1.0, 0.0, amp});
    const SpectralField v = sig.eval(g, std::numbers::pi / 2.0);
    CHECK(std::sqrt(norms(v - amp).h_norm_sq) < 1e-14);
}

TEST_CASE("translation group: identity, composition, eval shift") {
    const GridSpec g = grid4();
    const Symbol sym = two_tone_symbol(g);

    const Symbol same = translate(sym, 0.0);
    for (size_t i = 0; i < sym.h.terms.size(); ++i)
        CHECK(same.h.terms[i].theta == sym.h.terms[i].theta);

    const double s = 1.37, r = -2.11;
    const Symbol a = translate(translate(sym, r), s);
    const Symbol b = translate(sym, s + r);
    for (size_t i = 0; i < sym.g.terms.size(); ++i)
        CHECK(a.g.terms[i].theta == doctest::Approx(b.g.terms[i].theta).epsilon(1e-12));

    for (int j = 0; j < 100; ++j) {
        const double t = -7.0 + 0.137 * j;
        const auto lhs = eval(translate(sym, s), g, t);
        const auto rhs = eval(sym, g, t + s);
        CHECK(std::sqrt(norms(lhs.g_field - rhs.g_field).h_norm_sq) < 1e-12);
        CHECK(std::sqrt(norms(lhs.h_field - rhs.h_field).h_norm_sq) < 1e-12);
    }
}

TEST_CASE("hull sampling: offsets, common-shift equivalence, invariants") {
    const GridSpec g = grid4();
    const Symbol sym = two_tone_symbol(g);

    const auto fg = distinct_frequencies(sym.g);
    const auto fh = distinct_frequencies(sym.h);
    CHECK(fg.size() == 1);
    CHECK(fh.size() == 2);

    const Symbol same = hull_sample(sym, {0.0}, {0.0, 0.0});
    CHECK(same.h.terms[1].theta == sym.h.terms[1].theta);

    // offsets realizing a common shift s equal translate(base, s)
    const double s = 0.77;
    const Symbol via_hull = hull_sample(sym, {fg[0] * s}, {fh[0] * s, fh[1] * s});
    const Symbol via_translate = translate(sym, s);
    for (int j = 0; j < 20; ++j) {
        const double t = 0.31 * j;
        const auto a = eval(via_hull, g, t);
        const auto b = eval(via_translate, g, t);
        CHECK(std::sqrt(norms(a.h_field - b.h_field).h_norm_sq) < 1e-12);
    }

    const Symbol random_member = hull_sample(sym, {2.13}, {0.4, 5.1});
    CHECK(random_member.g.sup_norm() == doctest::Approx(sym.g.sup_norm()).epsilon(1e-12));
    CHECK(random_member.h.grad_window_bound() ==
          doctest::Approx(sym.h.grad_window_bound()).epsilon(1e-12));

    CHECK_THROWS_AS(hull_sample(sym.h, {0.1}), std::invalid_argument);
}

TEST_CASE("sup norm bounds a dense time sweep and is attained for one tone") {
    const GridSpec g = grid4();
    const SpectralField amp = pattern_field(g, "tg", 0.9);
    APSignal single;
    single.terms.push_back({std::numbers::sqrt3, 0.3, amp});
    CHECK(single.sup_norm() == doctest::Approx(std::sqrt(norms(amp).h_norm_sq)));

    APSignal two;
    two.terms.push_back({1.0, 0.0, pattern_field(g, "tg", 0.4)});
    two.terms.push_back({std::numbers::sqrt2, 0.0, pattern_field(g, "shear_x", 0.6)});
    const double bound = two.sup_norm();
    double seen = 0.0;
    for (int j = 0; j < 20000; ++j) {
        const double t = 0.5 * j;  // sweep through [0, 1e4]
        seen = std::max(seen, std::sqrt(norms(two.eval(g, t)).h_norm_sq));
    }
    CHECK(seen <= bound * (1.0 + 1e-12));

    // With a shared profile the incommensurate tones align arbitrarily well,
    // so the triangle bound is asymptotically attained.
    APSignal shared;
    shared.terms.push_back({1.0, 0.0, pattern_field(g, "tg", 0.5)});
    shared.terms.push_back({std::numbers::sqrt2, 0.0, pattern_field(g, "tg", 0.5)});
    const double shared_bound = shared.sup_norm();
    double shared_seen = 0.0;
    for (int j = 0; j < 20000; ++j) {
        const double t = 0.5 * j;
        shared_seen = std::max(shared_seen, std::sqrt(norms(shared.eval(g, t)).h_norm_sq));
    }
    CHECK(shared_seen <= shared_bound * (1.0 + 1e-12));
    CHECK(shared_seen > 0.95 * shared_bound);
}

TEST_CASE("gradient window bound covers the sampled integral; two-tone case <= 4|O|") {
    const GridSpec g = grid4();
    const Symbol sym = two_tone_symbol(g);

    // Profile chosen with ||grad a||_H^2 = |O|/2 (pointwise gradient <= 1), so
    // the two-tone window bound must sit below 4|O|.
    const double c_hat = sym.h.grad_window_bound();
    CHECK(c_hat <= 4.0 * GridSpec::area() * (1.0 + 1e-12));

    // Sampled windowed integral at several window starts stays below c_hat.
    const double dt = 0.01;
    for (double t0 : {-3.0, 0.0, 1.7, 12.9}) {
        double acc = 0.0;
        for (int j = 0; j < 100; ++j) {
            const double t = t0 + (j + 0.5) * dt;
            acc += norms(sym.h.eval(g, t)).v_norm_sq * dt;
        }
        CHECK(acc <= c_hat * (1.0 + 1e-9));
    }
}

TEST_CASE("evaluated forcing fields satisfy the field invariants") {
    const GridSpec g = grid4();
    const Symbol sym = two_tone_symbol(g);
    for (int j = 0; j < 25; ++j) {
        const auto fields = eval(sym, g, -4.0 + 0.63 * j);
        CHECK(fields.g_field.max_divergence() < 1e-12);
        CHECK(fields.g_field.max_reality_defect() < 1e-12);
        CHECK(fields.h_field.max_divergence() < 1e-12);
        CHECK(fields.h_field.max_reality_defect() < 1e-12);
    }
}
