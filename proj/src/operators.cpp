#include "mvns/operators.hpp"

#include <cmath>

#include "mvns/field_sampling.hpp"

namespace mvns {

void leray_project_inplace(SpectralField& f) {
    const int n = f.grid().modes_per_axis;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            if (k1 == 0 && k2 == 0) {
                f.at(0, 0, 0) = 0.0;
                f.at(1, 0, 0) = 0.0;
                continue;
            }
            const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            const Complex d = (static_cast<double>(k1) * f.at(0, k1, k2) +
                               static_cast<double>(k2) * f.at(1, k1, k2)) /
                              ksq;
            f.at(0, k1, k2) -= static_cast<double>(k1) * d;
            f.at(1, k1, k2) -= static_cast<double>(k2) * d;
        }
    }
}

SpectralField leray_project(const RawCoeffMap& raw, const GridSpec& grid) {
    SpectralField f = field_from_map(raw, grid);
    leray_project_inplace(f);
    return f;
}

SpectralField stokes_apply(const SpectralField& u) {
    SpectralField out = u;
    const int n = u.grid().modes_per_axis;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            out.at(0, k1, k2) *= ksq;
            out.at(1, k1, k2) *= ksq;
        }
    }
    return out;
}

FieldNorms norms(const SpectralField& u) {
    FieldNorms r;
    const int n = u.grid().modes_per_axis;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            const double a = std::norm(u.at(0, k1, k2)) + std::norm(u.at(1, k1, k2));
            r.h_norm_sq += a;
            r.v_norm_sq += ksq * a;
        }
    }
    r.h_norm_sq *= GridSpec::area();
    r.v_norm_sq *= GridSpec::area();
    return r;
}

double poincare_lambda(const GridSpec& grid) {
    grid.validate();
    return 1.0;
}

SpectralField bilinear_B(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u.grid(), v.grid());
    const GridSpec& g = u.grid();
    const int n = g.modes_per_axis;
    const int side = g.side();
    const int p = g.collocation_points();
    const CollocationTransform tr(n, p);

    // d[c][i] = spectral coefficients of d_i v_c
    std::vector<Complex> dv(4 * static_cast<size_t>(g.coeff_count()));
    for (int c = 0; c < 2; ++c) {
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const Complex val = v.at(c, k1, k2);
                const Complex ik1{0.0, static_cast<double>(k1)};
                const Complex ik2{0.0, static_cast<double>(k2)};
                const size_t idx = g.index(k1, k2);
                dv[(2 * c + 0) * g.coeff_count() + idx] = ik1 * val;
                dv[(2 * c + 1) * g.coeff_count() + idx] = ik2 * val;
            }
        }
    }

    const size_t np = tr.phys_size();
    std::vector<double> u1(np), u2(np), w(np), prod(2 * np);
    tr.to_physical({u.component(0), static_cast<size_t>(side) * side}, u1);
    tr.to_physical({u.component(1), static_cast<size_t>(side) * side}, u2);
    for (int c = 0; c < 2; ++c) {
        tr.to_physical({dv.data() + (2 * c + 0) * g.coeff_count(),
                        static_cast<size_t>(g.coeff_count())},
                       w);
        for (size_t i = 0; i < np; ++i) prod[c * np + i] = u1[i] * w[i];
        tr.to_physical({dv.data() + (2 * c + 1) * g.coeff_count(),
                        static_cast<size_t>(g.coeff_count())},
                       w);
        for (size_t i = 0; i < np; ++i) prod[c * np + i] += u2[i] * w[i];
    }

    SpectralField out(g);
    tr.to_modes({prod.data(), np}, {out.component(0), static_cast<size_t>(g.coeff_count())});
    tr.to_modes({prod.data() + np, np}, {out.component(1), static_cast<size_t>(g.coeff_count())});
    leray_project_inplace(out);
    return out;
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    require_same_grid(u.grid(), v.grid());
    require_same_grid(u.grid(), w.grid());
    const GridSpec& g = u.grid();
    const int n = g.modes_per_axis;

    // (2pi)^2 sum_{p+q+r=0} u_i(p) (i q_i) v_j(q) w_j(r); r = -(p+q) must lie
    // in the window, since all three fields are truncated.
    Complex acc{0.0, 0.0};
    for (int p1 = -n; p1 <= n; ++p1) {
        for (int p2 = -n; p2 <= n; ++p2) {
            const Complex up0 = u.at(0, p1, p2);
            const Complex up1 = u.at(1, p1, p2);
            if (up0 == Complex{} && up1 == Complex{}) continue;
            const int q1lo = std::max(-n, -n - p1), q1hi = std::min(n, n - p1);
            const int q2lo = std::max(-n, -n - p2), q2hi = std::min(n, n - p2);
            for (int q1 = q1lo; q1 <= q1hi; ++q1) {
                for (int q2 = q2lo; q2 <= q2hi; ++q2) {
                    const Complex udotq =
                        Complex{0.0, 1.0} *
                        (static_cast<double>(q1) * up0 + static_cast<double>(q2) * up1);
                    if (udotq == Complex{}) continue;
                    const int r1 = -p1 - q1, r2 = -p2 - q2;
                    acc += udotq * (v.at(0, q1, q2) * w.at(0, r1, r2) +
                                    v.at(1, q1, q2) * w.at(1, r1, r2));
                }
            }
        }
    }
    return GridSpec::area() * acc.real();
}

double calibrate_advection_constant(const GridSpec& grid, int samples, uint64_t seed) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const auto u = random_divfree_field(grid, seed, StreamTag::calibration, 3u * s + 0);
        const auto v = random_divfree_field(grid, seed, StreamTag::calibration, 3u * s + 1);
        const auto w = random_divfree_field(grid, seed, StreamTag::calibration, 3u * s + 2);
        const auto nu = norms(u);
        const auto nv = norms(v);
        const auto nw = norms(w);
        const double denom = std::sqrt(nv.v_norm_sq) *
                             std::pow(nu.h_norm_sq * nu.v_norm_sq, 0.25) *
                             std::pow(nw.h_norm_sq * nw.v_norm_sq, 0.25);
        if (denom <= 0.0) continue;
        const double val = std::abs(inner_h(bilinear_B(u, v), w)) / denom;
        worst = std::max(worst, val);
    }
    return worst;
}

} // namespace mvns
