#include "mvns/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "mvns/field_sampling.hpp"
#include "mvns/operators.hpp"

namespace mvns {

LawStats Ensemble::stats() const {
    LawStats s;
    for (const auto& p : particles) {
        const double h2 = norms(p).h_norm_sq;
        s.m2 += h2;
        s.m4 += h2 * h2;
    }
    if (!particles.empty()) {
        s.m2 /= particles.size();
        s.m4 /= particles.size();
    }
    return s;
}

double Trajectory::energy_residual_at(size_t i) const {
    const StepStat& s = stats.at(i);
    return s.m2 - stats.front().m2 + s.acc_visc - s.acc_fwork - s.acc_gwork - s.acc_hs;
}

namespace {

// Per-run state advancing one ensemble; owns every scratch buffer so the
// particle loop allocates nothing.
class Stepper {
  public:
    Stepper(const GridSpec& grid, const Symbol& symbol, const ModelParams& params,
            const NoiseSpec& noise, const SimOptions& options, int n_particles)
        : grid_(grid),
          symbol_(symbol),
          params_(params),
          noise_(noise),
          options_(options),
          tr_(grid.modes_per_axis, grid.collocation_points()),
          rng_(noise.seed, StreamTag::noise),
          kappa_(params.kappa.sample(grid.collocation_points())),
          phi1_(params.drift.phi1.sample(grid.collocation_points())),
          psi1_(params.drift.psi1.sample(grid.collocation_points())),
          g_field_(grid),
          h_field_(grid),
          kappa_dir_(grid),
          adv_(grid),
          fdrift_(grid),
          kstate_(grid) {
        params_.validate();
        if (noise_.wiener_modes != params_.noise_modes)
            throw std::invalid_argument("NoiseSpec: wiener_modes must match the model");
        const size_t np = tr_.phys_size();
        u1_.resize(np);
        u2_.resize(np);
        d1_.resize(np);
        d2_.resize(np);
        w1_.resize(np);
        w2_.resize(np);

        // P[kappa e], constant in time and state.
        const auto& dir = params_.diffusion.direction;
        for (size_t i = 0; i < np; ++i) {
            w1_[i] = kappa_[i] * dir.x;
            w2_[i] = kappa_[i] * dir.y;
        }
        forward_projected(kappa_dir_);
        kdir_sq_ = inner_h(kappa_dir_, kappa_dir_);

        g_.assign(n_particles, 1.0);
        acc_visc_.assign(n_particles, 0.0);
        acc_fwork_.assign(n_particles, 0.0);
        acc_gwork_.assign(n_particles, 0.0);
        acc_hs_.assign(n_particles, 0.0);
        const double c = options_.advection_constant;
        g_rate_ = 27.0 * c * c * c * c / (2.0 * params_.nu * params_.nu * params_.nu);
    }

    void prepare_dt(double dt) {
        dt_ = dt;
        inv_factor_.resize(grid_.coeff_count());
        const int n = grid_.modes_per_axis;
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
                inv_factor_[grid_.index(k1, k2)] = 1.0 / (1.0 + params_.nu * ksq * dt_);
            }
        }
    }

    void advance(Ensemble& ens, uint64_t global_step) {
        const int m = ens.size();
        const size_t nc = static_cast<size_t>(grid_.coeff_count());
        const int K = params_.noise_modes;
        const double eps = params_.epsilon;

        // Pre-step norms; guard; frozen law.
        h2_.resize(m);
        v2_.resize(m);
        double max_v = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto n = norms(ens.particles[i]);
            h2_[i] = n.h_norm_sq;
            v2_[i] = n.v_norm_sq;
            max_v = std::max(max_v, std::sqrt(n.v_norm_sq));
        }
        // The shared law statistic is reduced in sorted order so particle
        // relabeling cannot change it even at roundoff level.
        sorted_ = h2_;
        std::sort(sorted_.begin(), sorted_.end());
        double m2 = 0.0;
        for (double v : sorted_) m2 += v;
        m2 /= m;
        if (options_.advection_constant * max_v * dt_ > options_.guard_factor)
            throw SimError("step-size guard violated", global_step, -1);

        const double t = ens.time;
        g_field_ = symbol_.g.eval(grid_, t);
        h_field_ = symbol_.h.eval(grid_, t);
        const double hh = inner_h(h_field_, h_field_);
        const double hd = inner_h(h_field_, kappa_dir_);
        const double sqrt_m2 = std::sqrt(m2);
        const double c_mu = params_.diffusion.law_factor(sqrt_m2);

        const auto& beta = params_.diffusion.beta;
        const auto& ghat = params_.diffusion.gamma_hat;
        double sum_b2 = 0.0, sum_g2 = 0.0, sum_bg = 0.0;
        for (int k = 0; k < K; ++k) {
            sum_b2 += beta[k] * beta[k];
            sum_g2 += ghat[k] * ghat[k];
            sum_bg += beta[k] * ghat[k];
        }

        const double sqrt_dt = std::sqrt(dt_);
        for (int i = 0; i < m; ++i) {
            SpectralField& u = ens.particles[i];
            tr_.to_physical({u.component(0), nc}, u1_);
            tr_.to_physical({u.component(1), nc}, u2_);

            // transport term (u . grad) u
            tr_.to_physical_deriv({u.component(0), nc}, 0, d1_);
            tr_.to_physical_deriv({u.component(0), nc}, 1, d2_);
            for (size_t j = 0; j < u1_.size(); ++j) w1_[j] = u1_[j] * d1_[j] + u2_[j] * d2_[j];
            tr_.to_physical_deriv({u.component(1), nc}, 0, d1_);
            tr_.to_physical_deriv({u.component(1), nc}, 1, d2_);
            for (size_t j = 0; j < u1_.size(); ++j) w2_[j] = u1_[j] * d1_[j] + u2_[j] * d2_[j];
            forward_projected(adv_);

            // drift f and the noise state block kappa tanh(u)
            const auto shape = params_.drift.shape;
            const auto dir = params_.drift.direction;
            for (size_t j = 0; j < u1_.size(); ++j) {
                w1_[j] = phi1_[j] * shape_eval(shape, u1_[j]) + psi1_[j] * sqrt_m2 * dir.x;
                w2_[j] = phi1_[j] * shape_eval(shape, u2_[j]) + psi1_[j] * sqrt_m2 * dir.y;
            }
            forward_projected(fdrift_);
            for (size_t j = 0; j < u1_.size(); ++j) {
                w1_[j] = kappa_[j] * std::tanh(u1_[j]);
                w2_[j] = kappa_[j] * std::tanh(u2_[j]);
            }
            forward_projected(kstate_);

            // Hilbert-Schmidt norm of the frozen noise map (Gram expansion).
            const double ss = inner_h(kstate_, kstate_);
            const double hs = inner_h(h_field_, kstate_);
            const double ds = inner_h(kappa_dir_, kstate_);
            const double hs_sq = hh + 2.0 * c_mu * beta[0] * hd + 2.0 * ghat[0] * hs +
                                 c_mu * c_mu * kdir_sq_ * sum_b2 + ss * sum_g2 +
                                 2.0 * c_mu * ds * sum_bg;

            double z0 = 0.0, wb = 0.0, wg = 0.0;
            if (eps > 0.0) {
                const uint32_t stream = noise_.stream(i);
                for (int k = 0; k < K; ++k) {
                    const double z =
                        rng_.normal(noise_.step_offset + global_step, stream,
                                    static_cast<uint32_t>(k)) *
                        sqrt_dt;
                    if (k == 0) z0 = z;
                    wb += beta[k] * z;
                    wg += ghat[k] * z;
                }
            }

            // Energy ledger uses the pre-step state for the Ito terms.
            acc_fwork_[i] += 2.0 * dt_ * inner_h(fdrift_, u);
            acc_gwork_[i] += 2.0 * dt_ * inner_h(g_field_, u);
            acc_hs_[i] += eps * eps * dt_ * hs_sq;

            const Complex* gf = g_field_.data();
            const Complex* ff = fdrift_.data();
            const Complex* av = adv_.data();
            const Complex* hf = h_field_.data();
            const Complex* kd = kappa_dir_.data();
            const Complex* ks = kstate_.data();
            Complex* uc = u.data();
            const double cb = c_mu * wb;
            for (size_t j = 0; j < 2 * nc; ++j) {
                Complex val = uc[j] + dt_ * (gf[j] + ff[j] - av[j]);
                if (eps > 0.0)
                    val += eps * (z0 * hf[j] + cb * kd[j] + wg * ks[j]);
                uc[j] = val * inv_factor_[j % nc];
            }
            if (!u.all_finite())
                throw SimError("non-finite state after update", global_step, i);

            const auto npost = norms(u);
            acc_visc_[i] += params_.nu * dt_ * (v2_[i] + npost.v_norm_sq);
            g_[i] *= std::exp(-g_rate_ * 0.5 * dt_ *
                              (h2_[i] * v2_[i] + npost.h_norm_sq * npost.v_norm_sq));
        }
        ens.time += dt_;
    }

    StepStat snapshot_stats(const Ensemble& ens) const {
        StepStat s;
        s.t = ens.time;
        const int m = ens.size();
        for (int i = 0; i < m; ++i) {
            const auto n = norms(ens.particles[i]);
            s.m2 += n.h_norm_sq;
            s.m4 += n.h_norm_sq * n.h_norm_sq;
            s.v2 += n.v_norm_sq;
            s.m2v2 += n.h_norm_sq * n.v_norm_sq;
            s.g_mean += g_[i];
            s.gv2 += g_[i] * n.v_norm_sq;
            s.acc_visc += acc_visc_[i];
            s.acc_fwork += acc_fwork_[i];
            s.acc_gwork += acc_gwork_[i];
            s.acc_hs += acc_hs_[i];
        }
        const double inv = 1.0 / m;
        s.m2 *= inv;
        s.m4 *= inv;
        s.v2 *= inv;
        s.m2v2 *= inv;
        s.g_mean *= inv;
        s.gv2 *= inv;
        s.acc_visc *= inv;
        s.acc_fwork *= inv;
        s.acc_gwork *= inv;
        s.acc_hs *= inv;
        return s;
    }

  private:
    void forward_projected(SpectralField& out) {
        const size_t nc = static_cast<size_t>(grid_.coeff_count());
        tr_.to_modes(w1_, {out.component(0), nc});
        tr_.to_modes(w2_, {out.component(1), nc});
        leray_project_inplace(out);
    }

    GridSpec grid_;
    const Symbol& symbol_;
    const ModelParams& params_;
    const NoiseSpec& noise_;
    SimOptions options_;
    CollocationTransform tr_;
    CounterRng rng_;

    std::vector<double> kappa_, phi1_, psi1_;
    SpectralField g_field_, h_field_, kappa_dir_;
    SpectralField adv_, fdrift_, kstate_;
    std::vector<double> u1_, u2_, d1_, d2_, w1_, w2_;
    std::vector<double> inv_factor_;
    std::vector<double> h2_, v2_, sorted_;
    double kdir_sq_ = 0.0;
    double g_rate_ = 0.0;
    double dt_ = 0.0;

    std::vector<double> g_, acc_visc_, acc_fwork_, acc_gwork_, acc_hs_;
};

} // namespace

Ensemble step(const Ensemble& ens, double dt, const Symbol& symbol,
              const ModelParams& params, const NoiseSpec& noise,
              const SimOptions& options) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
    Ensemble out = ens;
    Stepper st(ens.grid(), symbol, params, noise, options, ens.size());
    st.prepare_dt(dt);
    st.advance(out, 0);
    return out;
}

Trajectory simulate(const Ensemble& initial, double t_end, double dt,
                    const Symbol& symbol, const ModelParams& params,
                    const NoiseSpec& noise, const SimOptions& options) {
    if (dt <= 0.0) throw std::invalid_argument("simulate: dt must be positive");
    const double span = t_end - initial.time;
    if (span < -1e-12) throw std::invalid_argument("simulate: t_end before initial time");
    const auto n_steps = static_cast<uint64_t>(std::llround(span / dt));
    if (std::abs(span - static_cast<double>(n_steps) * dt) > 1e-9 * std::max(1.0, std::abs(span)))
        throw std::invalid_argument("simulate: horizon must be an integer number of steps");

    Trajectory traj;
    traj.dt = dt;
    Ensemble ens = initial;
    Stepper st(ens.grid(), symbol, params, noise, options, ens.size());
    st.prepare_dt(dt);
    traj.stats.push_back(st.snapshot_stats(ens));

    auto want_snapshot = [&](double t) {
        for (double s : options.snapshot_times) {
            if (std::abs(s - t) < 0.5 * dt) return true;
        }
        return false;
    };
    if (want_snapshot(ens.time)) traj.snapshots.emplace_back(ens.time, ens);

    for (uint64_t n = 0; n < n_steps; ++n) {
        st.advance(ens, n);
        traj.stats.push_back(st.snapshot_stats(ens));
        if (want_snapshot(ens.time)) traj.snapshots.emplace_back(ens.time, ens);
    }
    traj.final_state = std::move(ens);
    return traj;
}

std::vector<ResidualPoint> energy_residual(const std::vector<Trajectory>& per_seed) {
    if (per_seed.empty()) throw std::invalid_argument("energy_residual: no trajectories");
    const size_t n = per_seed.front().stats.size();
    for (const auto& t : per_seed) {
        if (t.stats.size() != n)
            throw std::invalid_argument("energy_residual: trajectories disagree in length");
    }
    std::vector<ResidualPoint> out(n);
    const size_t s = per_seed.size();
    for (size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (const auto& t : per_seed) mean += t.energy_residual_at(i);
        mean /= static_cast<double>(s);
        double var = 0.0;
        for (const auto& t : per_seed) {
            const double d = t.energy_residual_at(i) - mean;
            var += d * d;
        }
        out[i] = {per_seed.front().stats[i].t, mean,
                  s > 1 ? std::sqrt(var / (static_cast<double>(s) * (s - 1))) : 0.0};
    }
    return out;
}

std::vector<double> exp_weight_series(const Trajectory& traj, double c_lady, double nu) {
    const double rate = 27.0 * c_lady * c_lady * c_lady * c_lady / (2.0 * nu * nu * nu);
    std::vector<double> g(traj.stats.size(), 1.0);
    for (size_t i = 1; i < traj.stats.size(); ++i) {
        const double mid = 0.5 * (traj.stats[i - 1].m2v2 + traj.stats[i].m2v2);
        g[i] = g[i - 1] * std::exp(-rate * traj.dt * mid);
    }
    return g;
}

Ensemble initial_ensemble(const GridSpec& grid, int particles, uint64_t seed,
                          double norm_h, double time) {
    Ensemble ens;
    ens.time = time;
    ens.particles.reserve(particles);
    for (int i = 0; i < particles; ++i) {
        ens.particles.push_back(random_field_with_h_norm(grid, seed, StreamTag::init,
                                                         static_cast<uint32_t>(i), norm_h));
    }
    return ens;
}

} // namespace mvns
