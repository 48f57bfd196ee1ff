#include "mvns/field_sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "mvns/operators.hpp"

namespace mvns {

SpectralField random_divfree_field(const GridSpec& grid, uint64_t seed, StreamTag tag,
                                   uint32_t stream, double decay) {
    CounterRng rng(seed, tag);
    SpectralField f(grid);
    const int n = grid.modes_per_axis;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            // One draw per conjugate pair keeps reality exact.
            if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
            const double damp = std::exp(-decay * (k1 * k1 + k2 * k2));
            const uint64_t c0 = static_cast<uint64_t>(grid.index(k1, k2));
            for (int comp = 0; comp < 2; ++comp) {
                const auto z = rng.normal_pair(c0, stream, static_cast<uint32_t>(comp));
                const Complex v = damp * Complex(z[0], z[1]) / std::sqrt(2.0);
                f.at(comp, k1, k2) = v;
                f.at(comp, -k1, -k2) = std::conj(v);
            }
        }
    }
    leray_project_inplace(f);
    return f;
}

SpectralField random_field_with_h_norm(const GridSpec& grid, uint64_t seed, StreamTag tag,
                                       uint32_t stream, double h_norm, double decay) {
    SpectralField f = random_divfree_field(grid, seed, tag, stream, decay);
    if (h_norm <= 0.0) {
        f.set_zero();
        return f;
    }
    const double cur = std::sqrt(norms(f).h_norm_sq);
    if (cur > 0.0) f.scale(h_norm / cur);
    return f;
}

SpectralField pattern_field(const GridSpec& grid, const std::string& name, double scale) {
    SpectralField f(grid);
    const Complex mi{0.0, -1.0};
    if (name == "tg") {
        // (cos x1 sin x2, -sin x1 cos x2)
        f.at(0, 1, 1) = mi * 0.25;
        f.at(0, 1, -1) = -mi * 0.25;
        f.at(0, -1, 1) = mi * 0.25;
        f.at(0, -1, -1) = -mi * 0.25;
        f.at(1, 1, 1) = -mi * 0.25;
        f.at(1, 1, -1) = -mi * 0.25;
        f.at(1, -1, 1) = mi * 0.25;
        f.at(1, -1, -1) = mi * 0.25;
    } else if (name == "shear_x") {
        // (sin x2, 0)
        f.at(0, 0, 1) = mi * 0.5;
        f.at(0, 0, -1) = -mi * 0.5;
    } else if (name == "shear_y") {
        // (0, sin x1)
        f.at(1, 1, 0) = mi * 0.5;
        f.at(1, -1, 0) = -mi * 0.5;
    } else if (name == "mode11") {
        // (sin(x1+x2), -sin(x1+x2))
        f.at(0, 1, 1) = mi * 0.5;
        f.at(0, -1, -1) = -mi * 0.5;
        f.at(1, 1, 1) = -mi * 0.5;
        f.at(1, -1, -1) = mi * 0.5;
    } else {
        throw std::invalid_argument("pattern_field: unknown pattern '" + name + "'");
    }
    f.scale(scale);
    leray_project_inplace(f);
    return f;
}

} // namespace mvns
