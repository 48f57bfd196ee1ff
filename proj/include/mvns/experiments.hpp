#pragma once

#include <string>
#include <vector>

#include "mvns/integrator.hpp"
#include "mvns/ledger.hpp"
#include "mvns/measure.hpp"

namespace mvns {

// Every asserted inequality names the ledger constant it tests and carries
// the Monte Carlo standard error used in the pass rule; raw-mean comparisons
// are never used.
struct Assertion {
    std::string id;
    std::string constant_ref;
    double observed = 0.0;
    double bound = 0.0;
    double stderr_ = 0.0;
    bool pass = false;
    std::string note;
};

struct CurvePoint {
    std::string curve;
    double x = 0.0;
    double y = 0.0;
    double err = 0.0;
};

struct ExperimentReport {
    std::string kind;
    std::vector<Assertion> assertions;
    std::vector<CurvePoint> curves;
    std::vector<std::string> notes;

    bool pass() const {
        for (const auto& a : assertions) {
            if (!a.pass) return false;
        }
        return true;
    }
};

struct NonDissipativeError : std::runtime_error {
    NonDissipativeError()
        : std::runtime_error("experiment requires a dissipative parameter set") {}
};

struct ExperimentSizing {
    int seeds = 32;
    int particles = 32;
    double dt = 1.0 / 64.0;
    int workers = 2;
    uint64_t base_seed = 1000;
    int pooled_atoms_cap = 48;  // pooled-law size for metric evaluations
    bool force = false;         // run despite a non-dissipative ledger
};

struct ExperimentInputs {
    GridSpec grid;
    ModelParams params;
    Symbol symbol;
    ConstantLedger ledger;
    ExperimentSizing sizing;
};

// Kronecker low-discrepancy phase offsets for hull sampling; index 0 is the
// base symbol itself.
std::vector<double> hull_phases(int sample_index, int frequency_count);
Symbol hull_member(const Symbol& base, int sample_index);

// Long-run second-moment bounds: E||u(t)||^2 plus the gamma-weighted V
// integral against M1, the unit-window V budget against M2, and the running
// weighted V budget against R + M1 at every sampled time.
ExperimentReport moment_experiment(const ExperimentInputs& in, double radius_sq);

// Fourth-moment bound against M3 = 2 k3.
ExperimentReport moment4_experiment(const ExperimentInputs& in, double radius_4);

// Exponentially weighted V bound against M4.
ExperimentReport regularity_experiment(const ExperimentInputs& in, double radius_sq);

struct StabilityKnobs {
    int levels = 4;             // offsets offset0 / 2^l, l = 0..levels-1
    double offset0 = 1.0;       // initial-state H offset at level 0
    double symbol_offset0 = 0.5;  // per-frequency phase offset at level 0
    double t_fix = 2.0;         // comparison time
};
// Law stability under common random numbers: d_P between perturbed and base
// solution laws decreases with the perturbation level and lands below the
// same-law control floor; the deterministic pair obeys the Gronwall envelope
// built from k8, k9 and the calibrated advection constant.
ExperimentReport stability_experiment(const ExperimentInputs& in, const StabilityKnobs& k);

struct TranslationKnobs {
    std::vector<double> shifts{0.5, 1.0, 3.141592653589793};
    double horizon = 2.0;
    double coupled_shift = 1.0;  // must be a multiple of dt
};
// U(t+s, tau+s) with symbol (g,h) against U(t, tau) with symbol T(s)(g,h):
// pathwise for eps = 0, through coupled noise indexing for eps > 0.
ExperimentReport translation_experiment(const ExperimentInputs& in, const TranslationKnobs& k);

struct AbsorbingKnobs {
    std::vector<double> radius_factors{10.0, 100.0};  // radii factor * M3 in P4
    int hull_samples = 3;
    double extra_horizon = 4.0;  // observation window past the common entry time
};
// The closed ball of radius M3^{1/4} in the fourth-moment metric absorbs
// every tested radius and hull sample after one common entry time.
ExperimentReport absorbing_experiment(const ExperimentInputs& in, const AbsorbingKnobs& k);

struct AttractorKnobs {
    int hull_samples = 3;
    std::vector<double> ladder{5.0, 10.0, 20.0};  // pullback horizons
    double probe_dt = 1.0;                        // quasi-invariance evolution span
    std::vector<double> attraction_times{1.0, 2.0, 3.0, 5.0, 8.0};
    double floor_margin = 2.0;   // approximation floor = margin * same-law d_P
    double start_radius4 = 0.0;  // 0: use the absorbing radius M3^{1/4}
    int pullback_seeds = 3;      // seeds per pullback law
};
// Pullback approximation of the kernel-section union: ladder Cauchy gaps,
// uniform attraction curve, and the quasi-invariance probe.
ExperimentReport attractor_experiment(const ExperimentInputs& in, const AttractorKnobs& k);

// max over a of min over b of d_P(a, b).
double hausdorff_semi_dp(const std::vector<EmpiricalMeasure>& from,
                         const std::vector<EmpiricalMeasure>& to);

} // namespace mvns
