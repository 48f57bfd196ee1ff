#include "mvns/forcing.hpp"

#include <cmath>
#include <stdexcept>

#include "mvns/operators.hpp"

namespace mvns {

SpectralField APSignal::eval(const GridSpec& grid, double t) const {
    SpectralField out(grid);
    for (const auto& term : terms) {
        require_same_grid(grid, term.amplitude.grid());
        out.axpy(std::sin(term.omega * t + term.theta), term.amplitude);
    }
    return out;
}

double APSignal::sup_norm() const {
    double acc = 0.0;
    for (const auto& term : terms) acc += std::sqrt(norms(term.amplitude).h_norm_sq);
    return acc;
}

double APSignal::grad_window_bound() const {
    double acc = 0.0;
    for (const auto& term : terms) acc += std::sqrt(norms(term.amplitude).v_norm_sq);
    return acc * acc;
}

SymbolFields eval(const Symbol& sym, const GridSpec& grid, double t) {
    return {sym.g.eval(grid, t), sym.h.eval(grid, t)};
}

APSignal translate(const APSignal& sig, double s) {
    APSignal out = sig;
    for (auto& term : out.terms) term.theta += term.omega * s;
    return out;
}

Symbol translate(const Symbol& sym, double s) {
    return {translate(sym.g, s), translate(sym.h, s)};
}

std::vector<double> distinct_frequencies(const APSignal& sig) {
    std::vector<double> freqs;
    for (const auto& term : sig.terms) {
        bool seen = false;
        for (double f : freqs) seen = seen || f == term.omega;
        if (!seen) freqs.push_back(term.omega);
    }
    return freqs;
}

APSignal hull_sample(const APSignal& base, const std::vector<double>& phase_offsets) {
    const auto freqs = distinct_frequencies(base);
    if (phase_offsets.size() != freqs.size())
        throw std::invalid_argument(
            "hull_sample: offsets length must equal the number of distinct frequencies");
    APSignal out = base;
    for (auto& term : out.terms) {
        for (size_t i = 0; i < freqs.size(); ++i) {
            if (freqs[i] == term.omega) {
                term.theta += phase_offsets[i];
                break;
            }
        }
    }
    return out;
}

Symbol hull_sample(const Symbol& base, const std::vector<double>& g_offsets,
                   const std::vector<double>& h_offsets) {
    return {hull_sample(base.g, g_offsets), hull_sample(base.h, h_offsets)};
}

} // namespace mvns
