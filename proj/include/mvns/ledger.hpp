#pragma once

#include <string>
#include <vector>

#include "mvns/forcing.hpp"
#include "mvns/model.hpp"

namespace mvns {

// Closed-form constants of the long-time theory, evaluated from the model
// parameters and the symbol sup norms. Pure function of its inputs: repeated
// evaluation reproduces every field bit for bit.
struct ConstantLedger {
    double k0 = 0.0;   // aggregate drift/noise constant entering dissipativity
    double k1 = 0.0;   // H^2 Gronwall coefficient
    double k2 = 0.0;   // H^2 inhomogeneous term
    double k3 = 0.0;   // H^4 inhomogeneous term
    double k4 = 0.0;   // H^4 Gronwall coefficient
    double k5 = 0.0;   // weighted-V Gronwall coefficient
    double k6 = 0.0;   // weighted-V mean-coupling coefficient
    double k7 = 0.0;   // weighted-V inhomogeneous term
    double k8 = 0.0;   // pathwise stability coefficient (per-path terms)
    double k9 = 0.0;   // pathwise stability coefficient (mean terms)
    double k10 = 0.0;  // k9 + (2 c^2/nu) * reference V budget
    double k11 = 0.0;  // supremum-estimate coefficient
    double gamma = 0.0;
    double M1 = 0.0;   // long-run bound for E||u||^2 + weighted V integral
    double M2 = 0.0;   // = e^gamma M1, unit-window V budget
    double M3 = 0.0;   // = 2 k3, long-run bound for E||u||^4
    double M4 = 0.0;   // weighted V bound
    double c_hat = 0.0;   // windowed gradient budget of h
    double c_lady = 0.0;  // calibrated advection interpolation constant
    bool dissipative = false;  // nu > 2 k0 / lambda
    bool gamma_ok = false;     // gamma in (0,1/2) and nu lambda/2 - 2 gamma > k0

    double g0_sup = 0.0;
    double h0_sup = 0.0;
    double nu = 0.0;
    double lambda = 0.0;

    // Entry times after which the long-run bounds are asserted. Infinite when
    // the forcing floor is zero (pure decay; nothing to enter).
    double entry_time_m2(double radius_sq) const;
    double entry_time_m4(double radius_4) const;

    struct Row {
        std::string name;
        double value;
        std::string definition;
    };
    std::vector<Row> rows() const;
};

// Calibration cost is a few thousand advection evaluations; the sample count
// and seed are fixed so the ledger stays a pure function.
ConstantLedger constant_ledger(const ModelParams& params, const Symbol& symbol,
                               const GridSpec& grid, int calibration_samples = 2000,
                               uint64_t calibration_seed = 0xC0FFEE);

} // namespace mvns
