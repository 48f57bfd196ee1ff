#pragma once

#include "mvns/field.hpp"
#include "mvns/rng.hpp"

namespace mvns {

// Deterministic divergence-free Gaussian field: reality-paired coefficients
// with radial decay exp(-decay |k|^2), Leray-projected. `stream` separates
// independent fields drawn from one seed.
SpectralField random_divfree_field(const GridSpec& grid, uint64_t seed, StreamTag tag,
                                   uint32_t stream, double decay = 0.25);

// Same, rescaled to a prescribed H norm (zero target -> zero field).
SpectralField random_field_with_h_norm(const GridSpec& grid, uint64_t seed, StreamTag tag,
                                       uint32_t stream, double h_norm, double decay = 0.25);

// Named low-mode divergence-free patterns used for forcing amplitudes and
// fixed directions. "tg" is the cellular flow (cos x1 sin x2, -sin x1 cos x2);
// "shear_x"/"shear_y" are single-mode shears; "mode11" is the |k|^2 = 2 cell.
SpectralField pattern_field(const GridSpec& grid, const std::string& name, double scale);

} // namespace mvns
