#include "mvns/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "mvns/assignment.hpp"
#include "mvns/operators.hpp"
#include "mvns/simplex.hpp"

namespace mvns {

namespace {

double pow_int(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double h_distance(const SpectralField& a, const SpectralField& b) {
    return std::sqrt(norms(a - b).h_norm_sq);
}

} // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<SpectralField> atoms,
                                   std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (weights_.empty()) {
        weights_.assign(atoms_.size(), atoms_.empty() ? 0.0 : 1.0 / atoms_.size());
    }
    if (weights_.size() != atoms_.size())
        throw std::invalid_argument("EmpiricalMeasure: weights/atoms size mismatch");
    double total = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw std::invalid_argument("EmpiricalMeasure: negative weight");
        total += w;
    }
    if (!atoms_.empty() && std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("EmpiricalMeasure: weights must sum to 1");
    for (size_t i = 1; i < atoms_.size(); ++i)
        require_same_grid(atoms_[0].grid(), atoms_[i].grid());
}

EmpiricalMeasure EmpiricalMeasure::dirac(SpectralField atom) {
    std::vector<SpectralField> a;
    a.push_back(std::move(atom));
    return EmpiricalMeasure(std::move(a));
}

bool EmpiricalMeasure::uniform() const {
    if (atoms_.empty()) return true;
    const double w0 = 1.0 / atoms_.size();
    for (double w : weights_) {
        if (std::abs(w - w0) > 1e-12) return false;
    }
    return true;
}

const std::vector<double>& EmpiricalMeasure::atom_h_norms() const {
    if (!norm_cache_) {
        auto cache = std::make_shared<std::vector<double>>();
        cache->reserve(atoms_.size());
        for (const auto& a : atoms_) cache->push_back(std::sqrt(norms(a).h_norm_sq));
        norm_cache_ = std::move(cache);
    }
    return *norm_cache_;
}

double moment_p(const EmpiricalMeasure& mu, int p) {
    if (p < 1) throw std::invalid_argument("moment_p: p must be >= 1");
    const auto& n = mu.atom_h_norms();
    double acc = 0.0;
    for (size_t i = 0; i < n.size(); ++i) acc += mu.weights()[i] * pow_int(n[i], p);
    return acc;
}

bool in_moment_ball(const EmpiricalMeasure& mu, int p, double radius) {
    return std::pow(moment_p(mu, p), 1.0 / p) <= radius;
}

double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    const int n = static_cast<int>(mu.size());
    if (n == 0 || static_cast<int>(nu.size()) != n)
        throw std::invalid_argument("wasserstein2: equal nonzero atom counts required");
    if (!mu.uniform() || !nu.uniform())
        throw std::invalid_argument("wasserstein2: uniform weights required");
    if (n > 256) throw std::invalid_argument("wasserstein2: atom count capped at 256");

    std::vector<double> cost(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const auto& nx = norms(mu.atoms()[i]);
        for (int j = 0; j < n; ++j) {
            const auto& ny = norms(nu.atoms()[j]);
            const double ip = inner_h(mu.atoms()[i], nu.atoms()[j]);
            cost[static_cast<size_t>(i) * n + j] =
                std::max(0.0, nx.h_norm_sq + ny.h_norm_sq - 2.0 * ip);
        }
    }
    const double total = min_cost_assignment(cost, n);
    return std::sqrt(total / n);
}

// LP dual of  max sum c_i a_i  over  |a_i| <= S, |a_i - a_j| <= L d_ij,
// S + L <= 1:
//   min t   s.t.   p_i - q_i + sum_j (pi_ij - pi_ji) = c_i,
//                  sum_i (p_i + q_i) <= t,   sum pi_ij d_ij <= t.
// Few rows (n+2), many columns: the shape the simplex here is built for.
double dbl_metric(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    const size_t nm = mu.size(), nn = nu.size();
    const int n = static_cast<int>(nm + nn);
    if (n == 0) return 0.0;
    if (n > 600) throw std::invalid_argument("dbl_metric: union support too large");
    if (nm > 0 && nn > 0) require_same_grid(mu.atoms()[0].grid(), nu.atoms()[0].grid());

    std::vector<const SpectralField*> atom(n);
    std::vector<double> c(n);
    for (size_t i = 0; i < nm; ++i) {
        atom[i] = &mu.atoms()[i];
        c[i] = mu.weights()[i];
    }
    for (size_t j = 0; j < nn; ++j) {
        atom[nm + j] = &nu.atoms()[j];
        c[nm + j] = -nu.weights()[j];
    }

    lp::Problem p;
    p.rows = n + 2;
    const int row_s = n, row_l = n + 1;
    p.rhs.assign(n + 2, 0.0);
    for (int i = 0; i < n; ++i) p.rhs[i] = c[i];

    for (int i = 0; i < n; ++i) {
        p.add_column(0.0, {{i, 1.0}, {row_s, 1.0}});   // p_i
        p.add_column(0.0, {{i, -1.0}, {row_s, 1.0}});  // q_i
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = h_distance(*atom[i], *atom[j]);
            p.add_column(0.0, {{i, 1.0}, {j, -1.0}, {row_l, d}});  // pi_ij
        }
    }
    p.add_column(1.0, {{row_s, -1.0}, {row_l, -1.0}});  // t
    p.add_column(0.0, {{row_s, 1.0}});                  // slack for the S row
    p.add_column(0.0, {{row_l, 1.0}});                  // slack for the L row

    const auto r = lp::solve(p);
    if (r.status != lp::Status::optimal)
        throw std::runtime_error("dbl_metric: LP solver did not converge");
    return std::max(0.0, r.value);
}

} // namespace mvns
