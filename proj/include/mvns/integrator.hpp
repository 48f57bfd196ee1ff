#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mvns/forcing.hpp"
#include "mvns/ledger.hpp"
#include "mvns/model.hpp"
#include "mvns/rng.hpp"

namespace mvns {

// M interacting particles sharing one empirical law.
struct Ensemble {
    std::vector<SpectralField> particles;
    double time = 0.0;

    int size() const { return static_cast<int>(particles.size()); }
    const GridSpec& grid() const { return particles.at(0).grid(); }
    EmpiricalMeasure law() const { return EmpiricalMeasure(particles); }
    LawStats stats() const;
};

// Wiener increments are a pure function of (seed, particle, mode, step):
// increment(step) uses counter step_offset + step, so two runs can share one
// noise path under a shifted time grid. particle_streams optionally relabels
// the per-particle stream index (identity when empty).
struct NoiseSpec {
    uint64_t seed = 0;
    int wiener_modes = 8;
    uint64_t step_offset = 0;
    std::vector<uint32_t> particle_streams;

    uint32_t stream(int particle) const {
        return particle_streams.empty() ? static_cast<uint32_t>(particle)
                                        : particle_streams.at(particle);
    }
};

struct SimError : std::runtime_error {
    SimError(const std::string& what, uint64_t step, int particle)
        : std::runtime_error(what), step(step), particle(particle) {}
    uint64_t step;
    int particle;
};

// Per-step ensemble means; cumulative energy-ledger terms are means of the
// per-particle accumulators up to that step.
struct StepStat {
    double t = 0.0;
    double m2 = 0.0;      // mean ||u||_H^2
    double m4 = 0.0;      // mean ||u||_H^4
    double v2 = 0.0;      // mean ||u||_V^2
    double m2v2 = 0.0;    // mean ||u||_H^2 ||u||_V^2
    double g_mean = 0.0;  // mean exponential weight
    double gv2 = 0.0;     // mean (weight * ||u||_V^2)
    double acc_visc = 0.0;   // 2 nu int ||u||_V^2
    double acc_fwork = 0.0;  // 2 int (f,u)
    double acc_gwork = 0.0;  // 2 int (g,u)
    double acc_hs = 0.0;     // eps^2 int ||sigma||_HS^2
};

struct Trajectory {
    std::vector<StepStat> stats;  // one entry per step, including the initial state
    Ensemble final_state;
    std::vector<std::pair<double, Ensemble>> snapshots;
    double dt = 0.0;

    // ||u(t)||^2 - ||u_tau||^2 + 2nu int ||u||_V^2 - 2 int (f,u) - 2 int (g,u)
    // - eps^2 int ||sigma||_HS^2, ensemble-averaged; the martingale part has
    // zero mean across seeds.
    double energy_residual_at(size_t step_index) const;
};

struct SimOptions {
    // Step-size guard dt <= guard_factor / (c * max_i ||u_i||_V); c is the
    // calibrated advection constant (ledger c_lady).
    double advection_constant = 0.03;
    double guard_factor = 0.5;
    // Exponential-weight rate 27 c^4 / (2 nu^3) uses the same constant.
    std::vector<double> snapshot_times;
};

// One semi-implicit Euler-Maruyama step: implicit Stokes, explicit transport,
// drift and noise, empirical law frozen at the pre-step state.
Ensemble step(const Ensemble& ens, double dt, const Symbol& symbol,
              const ModelParams& params, const NoiseSpec& noise,
              const SimOptions& options = {});

Trajectory simulate(const Ensemble& initial, double t_end, double dt,
                    const Symbol& symbol, const ModelParams& params,
                    const NoiseSpec& noise, const SimOptions& options = {});

struct ResidualPoint {
    double t = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
};
// Seed-averaged energy-equality residual series over per-seed trajectories.
std::vector<ResidualPoint> energy_residual(const std::vector<Trajectory>& per_seed);

// Exponential weight recomputed from the recorded ensemble-mean norm series
// by trapezoid accumulation; in (0,1] and nonincreasing.
std::vector<double> exp_weight_series(const Trajectory& traj, double c_lady, double nu);

// Deterministic initial ensembles: M fields scaled to a common H norm
// (norm_h == 0 gives the rest state), pairwise independent across particles.
Ensemble initial_ensemble(const GridSpec& grid, int particles, uint64_t seed,
                          double norm_h, double time = 0.0);

} // namespace mvns
