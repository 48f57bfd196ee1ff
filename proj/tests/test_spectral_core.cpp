#include <doctest.h>

#include <cmath>

#include "mvns/field_sampling.hpp"
#include "mvns/operators.hpp"
#include "test_support.hpp"

using namespace mvns;

namespace {

GridSpec grid_n(int n) {
    GridSpec g;
    g.modes_per_axis = n;
    return g;
}

RawCoeffMap random_raw(const GridSpec& g, uint64_t seed, uint32_t stream) {
    // Hermitian but not divergence-free.
    CounterRng rng(seed, StreamTag::metric_test);
    RawCoeffMap raw;
    const int n = g.modes_per_axis;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
            const uint64_t c0 = static_cast<uint64_t>(g.index(k1, k2));
            std::array<Complex, 2> v;
            for (int c = 0; c < 2; ++c) {
                const auto z = rng.normal_pair(c0, stream, static_cast<uint32_t>(c));
                v[c] = Complex(z[0], z[1]);
            }
            raw[{k1, k2}] = v;
            raw[{-k1, -k2}] = {std::conj(v[0]), std::conj(v[1])};
        }
    }
    return raw;
}

} // namespace

TEST_CASE("leray projection: gradients in the kernel, divergence-free fixed") {
    const GridSpec g = grid_n(4);
    // Pure gradient: u_hat(k) = i k phi_hat(k)
    RawCoeffMap grad;
    grad[{1, 2}] = {Complex(0, 1) * 1.0, Complex(0, 1) * 2.0};
    grad[{-1, -2}] = {std::conj(grad[{1, 2}][0]), std::conj(grad[{1, 2}][1])};
    grad[{3, 0}] = {Complex(0, 3) * 0.7, Complex(0, 0)};
    grad[{-3, 0}] = {std::conj(grad[{3, 0}][0]), Complex(0, 0)};
    const SpectralField zero = leray_project(grad, g);
    CHECK(norms(zero).h_norm_sq < 1e-24);

    const SpectralField u = random_divfree_field(g, 7, StreamTag::metric_test, 0);
    RawCoeffMap as_map;
    for (int k1 = -4; k1 <= 4; ++k1)
        for (int k2 = -4; k2 <= 4; ++k2)
            if (k1 || k2) as_map[{k1, k2}] = {u.at(0, k1, k2), u.at(1, k1, k2)};
    const SpectralField again = leray_project(as_map, g);
    const SpectralField diff = again - u;
    CHECK(std::sqrt(norms(diff).h_norm_sq) < 1e-13);
}

TEST_CASE("leray projection rejects out-of-range wavevectors") {
    const GridSpec g = grid_n(2);
    RawCoeffMap raw;
    raw[{3, 0}] = {Complex(1, 0), Complex(0, 0)};
    CHECK_THROWS_AS(leray_project(raw, g), std::out_of_range);
}

TEST_CASE("leray projection equals the dense mode-block projector (N=4)") {
    const GridSpec g = grid_n(4);
    const RawCoeffMap raw = random_raw(g, 11, 1);
    const SpectralField proj = leray_project(raw, g);
    // Oracle: per mode, the explicit 2x2 matrix I - k k^T / |k|^2 applied to
    // the stacked coefficient vector.
    for (const auto& [k, v] : raw) {
        const double k1 = k[0], k2 = k[1];
        const double ksq = k1 * k1 + k2 * k2;
        const Complex e0 = (1.0 - k1 * k1 / ksq) * v[0] + (-k1 * k2 / ksq) * v[1];
        const Complex e1 = (-k2 * k1 / ksq) * v[0] + (1.0 - k2 * k2 / ksq) * v[1];
        CHECK(std::abs(proj.at(0, k[0], k[1]) - e0) < 1e-12);
        CHECK(std::abs(proj.at(1, k[0], k[1]) - e1) < 1e-12);
    }
}

TEST_CASE("leray projection is idempotent and self-adjoint") {
    const GridSpec g = grid_n(5);
    for (uint32_t s = 0; s < 20; ++s) {
        const SpectralField a = leray_project(random_raw(g, 23, 2 * s), g);
        SpectralField aa = a;
        leray_project_inplace(aa);
        CHECK(std::sqrt(norms(aa - a).h_norm_sq) < 1e-12);

        // <P x, y> = <x, P y> for raw hermitian x, y
        const SpectralField x = field_from_map(random_raw(g, 29, 2 * s), g);
        const SpectralField y = field_from_map(random_raw(g, 31, 2 * s + 1), g);
        SpectralField px = x, py = y;
        leray_project_inplace(px);
        leray_project_inplace(py);
        CHECK(inner_h(px, y) == doctest::Approx(inner_h(x, py)).epsilon(1e-12));
    }
}

TEST_CASE("stokes operator: eigenvalues and quadratic form") {
    const GridSpec g = grid_n(4);
    SpectralField u = pattern_field(g, "shear_x", 1.3);  // |k|^2 = 1 eigenfield
    const SpectralField au = stokes_apply(u);
    CHECK(std::sqrt(norms(au - u).h_norm_sq) < 1e-14);

    SpectralField z(g);
    CHECK(norms(stokes_apply(z)).h_norm_sq == 0.0);

    for (uint32_t s = 0; s < 10; ++s) {
        const SpectralField r = random_divfree_field(g, 37, StreamTag::metric_test, s);
        const auto nr = norms(r);
        CHECK(inner_h(stokes_apply(r), r) ==
              doctest::Approx(nr.v_norm_sq).epsilon(1e-12));
        CHECK(stokes_apply(r).max_divergence() < 1e-12);
    }
}

TEST_CASE("stokes operator matches a high-order FD laplacian oracle (N=4)") {
    const GridSpec g = grid_n(4);
    const SpectralField u = random_divfree_field(g, 41, StreamTag::metric_test, 0);
    const SpectralField au = stokes_apply(u);

    // Oracle: 8th-order centered second differences of the sampled field on a
    // 64^2 grid (2nd order cannot reach the required tolerance at N=4),
    // quadrature back to modes, then projected. A = -P(laplacian).
    const int p = 64;
    const double h = 2.0 * std::numbers::pi / p;
    static const double c[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                -1.0 / 560.0};
    RawCoeffMap lap_modes;
    for (int comp = 0; comp < 2; ++comp) {
        const auto s = oracle::sample_component(u, comp, p);
        std::vector<double> lap(s.size(), 0.0);
        auto at = [&](int j1, int j2) {
            return s[static_cast<size_t>((j1 % p + p) % p) * p + ((j2 % p + p) % p)];
        };
        for (int j1 = 0; j1 < p; ++j1) {
            for (int j2 = 0; j2 < p; ++j2) {
                double acc = 2.0 * c[0] * at(j1, j2);
                for (int o = 1; o <= 4; ++o) {
                    acc += c[o] * (at(j1 + o, j2) + at(j1 - o, j2) + at(j1, j2 + o) +
                                   at(j1, j2 - o));
                }
                lap[static_cast<size_t>(j1) * p + j2] = -acc / (h * h);
            }
        }
        for (int k1 = -4; k1 <= 4; ++k1) {
            for (int k2 = -4; k2 <= 4; ++k2) {
                if (!k1 && !k2) continue;
                auto& slot = lap_modes[{k1, k2}];
                slot[comp] = oracle::quadrature_mode(lap, p, k1, k2);
            }
        }
    }
    const SpectralField oracle_field = leray_project(lap_modes, g);
    const double rel = std::sqrt(norms(oracle_field - au).h_norm_sq / norms(au).h_norm_sq);
    CHECK(rel < 1e-6);
}

TEST_CASE("bilinear form: trivial kernels and grid mismatch") {
    const GridSpec g = grid_n(4);
    const SpectralField u = random_divfree_field(g, 43, StreamTag::metric_test, 0);
    SpectralField zero(g);
    CHECK(norms(bilinear_B(zero, u)).h_norm_sq == 0.0);
    CHECK(norms(bilinear_B(u, zero)).h_norm_sq == 0.0);

    const GridSpec other = grid_n(3);
    SpectralField v(other);
    CHECK_THROWS_AS(bilinear_B(u, v), GridMismatchError);
}

TEST_CASE("bilinear form matches the 64^2 pseudo-spectral oracle (N=4)") {
    const GridSpec g = grid_n(4);
    const SpectralField u = random_divfree_field(g, 47, StreamTag::metric_test, 0);
    const SpectralField v = random_divfree_field(g, 47, StreamTag::metric_test, 1);
    const SpectralField b = bilinear_B(u, v);

    const int p = 64;  // >= 3N+1: alias-free for quadratics
    const auto u1 = oracle::sample_component(u, 0, p);
    const auto u2 = oracle::sample_component(u, 1, p);
    RawCoeffMap prod_modes;
    for (int comp = 0; comp < 2; ++comp) {
        const auto d1 = oracle::sample_component(v, comp, p, 0);
        const auto d2 = oracle::sample_component(v, comp, p, 1);
        std::vector<double> prod(u1.size());
        for (size_t i = 0; i < prod.size(); ++i) prod[i] = u1[i] * d1[i] + u2[i] * d2[i];
        for (int k1 = -4; k1 <= 4; ++k1) {
            for (int k2 = -4; k2 <= 4; ++k2) {
                if (!k1 && !k2) continue;
                prod_modes[{k1, k2}][comp] = oracle::quadrature_mode(prod, p, k1, k2);
            }
        }
    }
    const SpectralField expect = leray_project(prod_modes, g);
    const double rel = std::sqrt(norms(expect - b).h_norm_sq / norms(b).h_norm_sq);
    CHECK(rel < 1e-8);
    CHECK(b.max_divergence() < 1e-12);
    CHECK(b.max_reality_defect() < 1e-12);
}

TEST_CASE("trilinear form: antisymmetry and collocation quadrature oracle (N=3)") {
    const GridSpec g = grid_n(3);
    for (uint32_t s = 0; s < 8; ++s) {
        const SpectralField u = random_divfree_field(g, 53, StreamTag::metric_test, 3 * s);
        const SpectralField v = random_divfree_field(g, 53, StreamTag::metric_test, 3 * s + 1);
        const SpectralField w = random_divfree_field(g, 53, StreamTag::metric_test, 3 * s + 2);

        const double buvw = trilinear_b(u, v, w);
        const double buwv = trilinear_b(u, w, v);
        const double scale = std::abs(buvw) + std::abs(buwv) + 1e-30;
        CHECK(std::abs(buvw + buwv) / scale < 1e-10);
        CHECK(std::abs(trilinear_b(u, v, v)) /
                  (norms(u).h_norm_sq + norms(v).v_norm_sq) <
              1e-12);

        // Quadrature oracle: cubic integrand needs P >= 3N+1; use 64.
        const int p = 64;
        const auto u1 = oracle::sample_component(u, 0, p);
        const auto u2 = oracle::sample_component(u, 1, p);
        std::vector<double> integrand(u1.size(), 0.0);
        for (int comp = 0; comp < 2; ++comp) {
            const auto d1 = oracle::sample_component(v, comp, p, 0);
            const auto d2 = oracle::sample_component(v, comp, p, 1);
            const auto wc = oracle::sample_component(w, comp, p);
            for (size_t i = 0; i < integrand.size(); ++i)
                integrand[i] += (u1[i] * d1[i] + u2[i] * d2[i]) * wc[i];
        }
        const double quad = oracle::quadrature_integral(integrand, p);
        CHECK(buvw == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("<B(u,v),w> = b(u,v,w) across the two evaluation paths") {
    const GridSpec g = grid_n(4);
    for (uint32_t s = 0; s < 12; ++s) {
        const SpectralField u = random_divfree_field(g, 59, StreamTag::metric_test, 3 * s);
        const SpectralField v = random_divfree_field(g, 59, StreamTag::metric_test, 3 * s + 1);
        const SpectralField w = random_divfree_field(g, 59, StreamTag::metric_test, 3 * s + 2);
        const double lhs = inner_h(bilinear_B(u, v), w);
        const double rhs = trilinear_b(u, v, w);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("norms: Parseval against collocation quadrature") {
    const GridSpec g = grid_n(4);
    SpectralField zero(g);
    CHECK(norms(zero).h_norm_sq == 0.0);
    CHECK(norms(zero).v_norm_sq == 0.0);

    // |k|^2 = 1 eigenfield: equal H and V norms
    const SpectralField e = pattern_field(g, "shear_x", 0.8);
    CHECK(norms(e).h_norm_sq == doctest::Approx(norms(e).v_norm_sq).epsilon(1e-14));

    const SpectralField u = random_divfree_field(g, 61, StreamTag::metric_test, 0);
    const int p = 32;
    std::vector<double> usq(static_cast<size_t>(p) * p, 0.0), gsq(usq);
    for (int comp = 0; comp < 2; ++comp) {
        const auto s = oracle::sample_component(u, comp, p);
        const auto d1 = oracle::sample_component(u, comp, p, 0);
        const auto d2 = oracle::sample_component(u, comp, p, 1);
        for (size_t i = 0; i < usq.size(); ++i) {
            usq[i] += s[i] * s[i];
            gsq[i] += d1[i] * d1[i] + d2[i] * d2[i];
        }
    }
    const auto n = norms(u);
    CHECK(n.h_norm_sq == doctest::Approx(oracle::quadrature_integral(usq, p)).epsilon(1e-10));
    CHECK(n.v_norm_sq == doctest::Approx(oracle::quadrature_integral(gsq, p)).epsilon(1e-10));
}

TEST_CASE("poincare constant: value, sharpness, sampled inequality") {
    for (int n : {1, 2, 4, 8}) CHECK(poincare_lambda(grid_n(n)) == 1.0);

    const GridSpec g = grid_n(4);
    const SpectralField e = pattern_field(g, "shear_x", 1.0);
    CHECK(norms(e).v_norm_sq == doctest::Approx(poincare_lambda(g) * norms(e).h_norm_sq));

    for (uint32_t s = 0; s < 50; ++s) {
        const SpectralField u = random_divfree_field(g, 67, StreamTag::metric_test, s);
        const auto nu = norms(u);
        CHECK(poincare_lambda(g) * nu.h_norm_sq <= nu.v_norm_sq * (1.0 + 1e-12));
    }
}

TEST_CASE("advection interpolation constant is stable under the truncation") {
    const double c6 = calibrate_advection_constant(grid_n(6), 300, 101);
    const double c8 = calibrate_advection_constant(grid_n(8), 300, 101);
    CHECK(c6 > 0.0);
    CHECK(c8 > 0.0);
    CHECK(std::abs(c8 - c6) / c8 < 0.3);
}
