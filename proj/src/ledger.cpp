#include "mvns/ledger.hpp"

#include <cmath>
#include <limits>

#include "mvns/operators.hpp"

namespace mvns {

double ConstantLedger::entry_time_m2(double radius_sq) const {
    const double floor = (2.0 / gamma) * (g0_sup * g0_sup / (nu * lambda) + h0_sup * h0_sup);
    if (floor <= 0.0)
        return radius_sq > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (radius_sq <= floor) return 0.0;
    return std::log(radius_sq / floor) / gamma;
}

double ConstantLedger::entry_time_m4(double radius_4) const {
    if (k3 <= 0.0) return radius_4 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (radius_4 <= k3) return 0.0;
    return std::log(radius_4 / k3) / (2.0 * gamma);
}

ConstantLedger constant_ledger(const ModelParams& params, const Symbol& symbol,
                               const GridSpec& grid, int calibration_samples,
                               uint64_t calibration_seed) {
    params.validate();
    const double area = GridSpec::area();
    const double nu = params.nu;
    const double lam = params.lambda;
    const double phi1 = params.drift.phi1.sup_norm();
    const double psi1 = params.drift.psi1.l2_norm();
    const double phi2 = params.drift.phi2.sup_norm();
    const double psi2 = params.drift.psi2.l2_norm();
    const double kinf = params.kappa.sup_norm();
    const double kgrad = params.kappa.grad_sup_norm();
    const double b2 = params.diffusion.beta_sq_sum();
    const double g2 = params.diffusion.gamma_sq_sum();
    const double l2 = params.diffusion.lip_sq_sum();
    const double g0 = symbol.g.sup_norm();
    const double h0 = symbol.h.sup_norm();

    ConstantLedger c;
    c.nu = nu;
    c.lambda = lam;
    c.g0_sup = g0;
    c.h0_sup = h0;
    c.c_hat = symbol.h.grad_window_bound();
    c.c_lady = calibrate_advection_constant(grid, calibration_samples, calibration_seed);

    c.k0 = 6.0 * phi1 + 6.0 * psi1 + 6.0 * b2 + 8.0 * kinf * kinf * g2 +
           16.0 * b2 * kinf * kinf * area;
    c.dissipative = nu > 2.0 * c.k0 / lam;

    const double slack = nu * lam / 2.0 - c.k0;
    // Quarter-of-the-slack selection; any gamma in (0,1/2) with
    // nu lambda/2 - 2 gamma > k0 works. Non-dissipative parameter sets get a
    // placeholder so the gamma-weighted entries stay finite.
    c.gamma = c.dissipative ? std::min(0.49, slack / 4.0) : 0.25;
    c.gamma_ok = c.dissipative && c.gamma > 0.0 && c.gamma < 0.5 &&
                 nu * lam / 2.0 - 2.0 * c.gamma > c.k0;

    const double gam = c.gamma;
    c.k1 = 2.0 * (phi1 + psi1 + 2.0 * kinf * kinf * (2.0 * b2 * area + g2));
    c.k2 = (4.0 * area / gam) * (phi1 * phi1 / (nu * lam) + 2.0 * b2 * kinf * kinf);
    c.M1 = (4.0 / gam) * (g0 * g0 / (nu * lam) + h0 * h0) + c.k2;
    c.M2 = std::exp(gam) * c.M1;

    const double nl3 = nu * nu * nu * lam * lam * lam;
    c.k3 = 27.0 / (2.0 * gam * nl3) * g0 * g0 * g0 * g0 +
           864.0 / (gam * nl3) * phi1 * phi1 * phi1 * phi1 * area * area +
           72.0 / (gam * nu * lam) * h0 * h0 * h0 * h0 +
           12.0 / gam * b2 * kinf * kinf * kinf * kinf * area * area;
    c.k4 = 4.0 * (phi1 + psi1 + 6.0 * b2 + 6.0 * kinf * kinf * g2 +
                  12.0 * b2 * kinf * kinf * area);
    c.M3 = 2.0 * c.k3;

    c.k5 = 2.0 * (8.0 * phi1 / (nu * lam) + l2 * kinf * kinf +
                  (2.0 / lam) * g2 * kgrad * kgrad);
    c.k6 = 8.0 * (psi1 * psi1 / nu + area * b2 * kgrad * kgrad);
    c.k7 = (16.0 / nu) * area * phi1 * phi1 + 2.0 * c.c_hat +
           8.0 * area * b2 * kgrad * kgrad;
    c.M4 = (1.0 + c.k5 + c.k6 / lam) * c.M2 + c.k7 + (4.0 / nu) * g0 * g0;

    c.k8 = 2.0 * phi2 + psi2 + 4.0 * kinf * kinf * l2 * (1.0 + area);
    c.k9 = psi2 + 4.0 * kinf * kinf * l2 * (1.0 + area);
    c.k10 = c.k9 + (2.0 * c.c_lady * c.c_lady / nu) * c.M2;
    c.k11 = 2.0 * c.k9 + 8.0 * kinf * kinf * l2 * (1.0 + area);
    return c;
}

std::vector<ConstantLedger::Row> ConstantLedger::rows() const {
    return {
        {"k0", k0,
         "6|phi1|_inf + 6|psi1|_L2 + 6|beta|^2 + 8|kappa|_inf^2|ghat|^2 + "
         "16|beta|^2|kappa|_inf^2|O|"},
        {"k1", k1, "2(|phi1|_inf + |psi1|_L2 + 2|kappa|_inf^2(2|beta|^2|O| + |ghat|^2))"},
        {"k2", k2, "(4|O|/gamma)(|phi1|_inf^2/(nu lambda) + 2|beta|^2|kappa|_inf^2)"},
        {"k3", k3,
         "27|g0|^4/(2 gamma nu^3 lambda^3) + 864|phi1|_inf^4|O|^2/(gamma nu^3 lambda^3) + "
         "72|h0|^4/(gamma nu lambda) + 12|beta|^2|kappa|_inf^4|O|^2/gamma"},
        {"k4", k4,
         "4(|phi1|_inf + |psi1|_L2 + 6|beta|^2 + 6|kappa|_inf^2|ghat|^2 + "
         "12|beta|^2|kappa|_inf^2|O|)"},
        {"k5", k5,
         "2(8|phi1|_inf/(nu lambda) + |L|^2|kappa|_inf^2 + "
         "2|ghat|^2|grad kappa|_inf^2/lambda)"},
        {"k6", k6, "8(|psi1|_L2^2/nu + |O||beta|^2|grad kappa|_inf^2)"},
        {"k7", k7, "16|O||phi1|_inf^2/nu + 2 c_hat + 8|O||beta|^2|grad kappa|_inf^2"},
        {"k8", k8, "2|phi2|_inf + |psi2|_L2 + 4|kappa|_inf^2|L|^2(1+|O|)"},
        {"k9", k9, "|psi2|_L2 + 4|kappa|_inf^2|L|^2(1+|O|)"},
        {"k10", k10, "k9 + (2 c_lady^2/nu) M2"},
        {"k11", k11, "2 k9 + 8|kappa|_inf^2|L|^2(1+|O|)"},
        {"gamma", gamma, "min(0.49, (nu lambda/2 - k0)/4) when dissipative"},
        {"M1", M1, "(4/gamma)(|g0|^2/(nu lambda) + |h0|^2) + k2"},
        {"M2", M2, "e^gamma M1"},
        {"M3", M3, "2 k3"},
        {"M4", M4, "(1 + k5 + k6/lambda) M2 + k7 + 4|g0|^2/nu"},
        {"c_hat", c_hat, "(sum_i |grad a_i|_H)^2 over the h terms"},
        {"c_lady", c_lady, "calibrated advection interpolation constant"},
        {"dissipative", dissipative ? 1.0 : 0.0, "nu > 2 k0/lambda"},
        {"gamma_ok", gamma_ok ? 1.0 : 0.0, "gamma in (0,1/2), nu lambda/2 - 2 gamma > k0"},
    };
}

} // namespace mvns
