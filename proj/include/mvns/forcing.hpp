#pragma once

#include <vector>

#include "mvns/field.hpp"

namespace mvns {

// Finite trigonometric polynomial with field-valued amplitudes:
//   s(t) = sum_i sin(omega_i t + theta_i) * a_i.
// This class is closed under time translation (phase shifts), which is what
// makes the hull of a signal finite-dimensional here.
struct APTerm {
    double omega = 0.0;
    double theta = 0.0;
    SpectralField amplitude;
};

struct APSignal {
    std::vector<APTerm> terms;

    SpectralField eval(const GridSpec& grid, double t) const;
    // Triangle-inequality bound sum ||a_i||_H; an upper bound for
    // sup_t ||s(t)||_H, attained in the limit for incommensurate frequencies.
    double sup_norm() const;
    // (sum ||a_i||_V)^2 bounds the windowed gradient energy
    // int_t^{t+1} ||grad s||_H^2 ds for every t.
    double grad_window_bound() const;
};

// Forcing symbol: deterministic drift signal g and noise modulation signal h.
struct Symbol {
    APSignal g;
    APSignal h;
};

struct SymbolFields {
    SpectralField g_field;
    SpectralField h_field;
};
SymbolFields eval(const Symbol& sym, const GridSpec& grid, double t);

// Time translation T(s): phases advance by omega*s. Exact group:
// T(0) = id, T(s)T(r) = T(s+r), eval(translate(sym,s), t) = eval(sym, t+s).
APSignal translate(const APSignal& sig, double s);
Symbol translate(const Symbol& sym, double s);

// Hull element from per-frequency phase offsets. Offsets are indexed by the
// distinct frequencies of the signal in order of first appearance; a common
// shift s corresponds to offsets omega_i * s.
std::vector<double> distinct_frequencies(const APSignal& sig);
APSignal hull_sample(const APSignal& base, const std::vector<double>& phase_offsets);
Symbol hull_sample(const Symbol& base, const std::vector<double>& g_offsets,
                   const std::vector<double>& h_offsets);

} // namespace mvns
