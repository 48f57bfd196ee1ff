#pragma once

#include <memory>
#include <vector>

#include "mvns/field.hpp"

namespace mvns {

// Weighted point cloud of fields in H, approximating a law on H. Weights
// default to uniform. Atom H-norms are cached on first use (single-writer,
// then read-only).
class EmpiricalMeasure {
  public:
    EmpiricalMeasure() = default;
    explicit EmpiricalMeasure(std::vector<SpectralField> atoms,
                              std::vector<double> weights = {});

    static EmpiricalMeasure dirac(SpectralField atom);

    const std::vector<SpectralField>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    size_t size() const { return atoms_.size(); }
    bool uniform() const;

    const std::vector<double>& atom_h_norms() const;  // lazy cache

  private:
    std::vector<SpectralField> atoms_;
    std::vector<double> weights_;
    mutable std::shared_ptr<const std::vector<double>> norm_cache_;
};

// sum_i w_i ||atom_i||_H^p for integer p >= 1.
double moment_p(const EmpiricalMeasure& mu, int p);

// Membership in the closed p-moment ball of radius r: moment_p^{1/p} <= r.
bool in_moment_ball(const EmpiricalMeasure& mu, int p, double radius);

// Exact 2-Wasserstein distance between equal-cardinality uniform clouds via
// minimum-cost assignment on squared H-distances. Throws std::invalid_argument
// for mismatched sizes or non-uniform weights; atom count capped at 256.
double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

// Bounded-Lipschitz metric sup { |(phi,mu)-(phi,nu)| : ||phi||_inf + Lip(phi) <= 1 },
// computed exactly on the union support by linear programming.
// Throws std::runtime_error if the LP solver fails to converge.
double dbl_metric(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

} // namespace mvns
