#pragma once

#include <string>
#include <vector>

#include "mvns/field.hpp"
#include "mvns/forcing.hpp"
#include "mvns/measure.hpp"
#include "mvns/transform.hpp"

namespace mvns {

// Scalar spatial profile c0 + c1 sin(x1) cos(x2), chosen so sup norms,
// gradient sup norms and L2 norms are available in closed form for the
// constant ledger.
struct Profile {
    double c0 = 0.0;
    double c1 = 0.0;

    double eval(double x1, double x2) const;
    double sup_norm() const { return std::abs(c0) + std::abs(c1); }
    double grad_sup_norm() const { return std::abs(c1); }
    // sqrt(c0^2 |O| + c1^2 |O|/4); the cross term integrates to zero.
    double l2_norm() const;
    bool nonnegative() const { return c0 >= std::abs(c1); }

    std::vector<double> sample(int phys_per_axis) const;
};

// Pointwise state shape s: bounded, 1-Lipschitz, s(0) = 0.
enum class ShapeKind { tanh_shape, clipped_linear, zero };
double shape_eval(ShapeKind s, double r);

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Law statistics the default coefficient families consume.
struct LawStats {
    double m2 = 0.0;  // int ||u||_H^2 dmu
    double m4 = 0.0;
};
LawStats law_stats_of(const EmpiricalMeasure& mu);

// Drift f(x,u,mu) = phi1(x) s(u) + psi1(x) sqrt(mu(||.||^2)) e,
// with s applied componentwise and e a fixed unit direction. Vanishes at
// (u, mu) = (0, delta_0) identically.
struct DriftSpec {
    Profile phi1;
    Profile psi1;
    Profile phi2;  // Lipschitz envelope in u; defaults to phi1
    Profile psi2;  // Lipschitz envelope in the law; defaults to psi1
    ShapeKind shape = ShapeKind::tanh_shape;
    Vec2 direction{1.0, 0.0};

    Vec2 pointwise(double phi1x, double psi1x, Vec2 u, double sqrt_m2) const;
    void validate() const;
};

// Per-mode noise coefficients sigma_k(u,mu) = beta_k c(mu) e + ghat_k tanh(u)
// with c(mu) = (1 + tanh(sqrt(mu(||.||^2))))/2 in [0,1]. Lipschitz constants
// L_k default to max(beta_k/2, ghat_k).
struct DiffusionSpec {
    std::vector<double> beta;
    std::vector<double> gamma_hat;
    std::vector<double> lip;
    Vec2 direction{1.0, 0.0};

    int modes() const { return static_cast<int>(beta.size()); }
    double law_factor(double sqrt_m2) const;
    Vec2 pointwise(int k, Vec2 u, double sqrt_m2) const;
    double beta_sq_sum() const;
    double gamma_sq_sum() const;
    double lip_sq_sum() const;
    void validate() const;

    static DiffusionSpec geometric(int modes, double beta0, double ghat0, double ratio);
};

struct ModelParams {
    double nu = 2.5;
    double epsilon = 0.5;  // 0 switches the noise off for deterministic runs
    Profile kappa{0.3, 0.1};
    double lambda = 1.0;
    int noise_modes = 8;
    DriftSpec drift;
    DiffusionSpec diffusion;

    void validate() const;
};

// f evaluated on the collocation grid, truncated and Leray-projected.
SpectralField drift_f(const SpectralField& u, const LawStats& law, const DriftSpec& spec);

// Noise map split into its three field-valued building blocks. Mode k of the
// full map is  delta_{k,1} h(t) + beta_k c(mu) P[kappa e] + ghat_k P[kappa tanh(u)].
// h(t) rides on a single dedicated Wiener mode; spreading it over every mode
// would break the Hilbert-Schmidt growth bound the ledger asserts.
struct DiffusionParts {
    SpectralField h_field;
    SpectralField kappa_dir;    // P[kappa e]
    SpectralField kappa_state;  // P[kappa tanh(u)]
    double c_mu = 0.0;
    const DiffusionSpec* spec = nullptr;

    SpectralField mode(int k) const;  // k = 0 .. modes-1
    double hs_norm_sq() const;
};

DiffusionParts diffusion_parts(const SpectralField& u, const LawStats& law,
                               const SpectralField& h_field, const DiffusionSpec& spec,
                               const Profile& kappa);

// Materialized K-mode output of the noise map.
std::vector<SpectralField> diffusion_sigma(double t, const SpectralField& u,
                                           const LawStats& law, const Symbol& symbol,
                                           const DiffusionSpec& spec,
                                           const ModelParams& params);

// Squared Hilbert-Schmidt gap between two states/laws together with the
// Lipschitz envelope 2 ||kappa||_inf^2 ||L||^2 (1+|O|) (||u1-u2||_H^2 + W2^2).
struct HsGap {
    double lhs = 0.0;
    double rhs = 0.0;
};
HsGap hs_lipschitz_gap(double t, const SpectralField& u1, const SpectralField& u2,
                       const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                       const DiffusionSpec& spec, const ModelParams& params);

// Sampled verification of the structural bounds the coefficient families
// promise. Ratios are max over samples of lhs/rhs; pass iff <= 1 + 1e-9.
struct AssumptionCheck {
    std::string id;
    double max_ratio = 0.0;
    int samples = 0;
    bool pass = true;
};
struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool pass = true;
    std::string first_failure;
};
AssumptionReport check_assumptions(const ModelParams& params, const Symbol& symbol,
                                   const GridSpec& grid, int sample_budget,
                                   uint64_t rng_seed);

} // namespace mvns
