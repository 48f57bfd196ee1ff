#pragma once

#include "mvns/field.hpp"
#include "mvns/transform.hpp"

namespace mvns {

// Mode-wise Leray projection u_hat -> u_hat - k (k.u_hat)/|k|^2, zero mode
// dropped. Idempotent and self-adjoint in the H inner product.
SpectralField leray_project(const RawCoeffMap& raw, const GridSpec& grid);
void leray_project_inplace(SpectralField& f);

// Stokes operator: u_hat(k) -> |k|^2 u_hat(k).
SpectralField stokes_apply(const SpectralField& u);

struct FieldNorms {
    double h_norm_sq = 0.0;  // ||u||_H^2 = (2pi)^2 sum |u_hat|^2
    double v_norm_sq = 0.0;  // ||u||_V^2 = (2pi)^2 sum |k|^2 |u_hat|^2
};
FieldNorms norms(const SpectralField& u);

// Smallest |k|^2 over admissible modes; 1 for the zero-mean torus basis.
double poincare_lambda(const GridSpec& grid);

// B(u,v) = P (u . grad) v, evaluated pointwise on the collocation grid and
// truncated back to the mode window. With GridSpec::dealias the collocation
// resolution is >= 3N+1, which makes the quadratic product alias-free.
SpectralField bilinear_B(const SpectralField& u, const SpectralField& v);

// b(u,v,w) = sum_ij int u_i d_i(v_j) w_j dx, evaluated as the exact triple
// convolution over the retained modes. This route does not share code with
// bilinear_B, so <B(u,v),w> = b(u,v,w) is a genuine two-path check.
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w);

// Empirical constant for |<B(u,v),w>| <= c ||v||_V ||u||_H^1/2 ||u||_V^1/2
// ||w||_H^1/2 ||w||_V^1/2, taken as the max ratio over deterministic random
// triples. The bound constant is domain-dependent and has no closed form
// here; the calibrated value is what the ledger carries.
double calibrate_advection_constant(const GridSpec& grid, int samples, uint64_t seed);

} // namespace mvns
