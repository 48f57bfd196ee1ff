#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mvns/field.hpp"
#include "mvns/integrator.hpp"

namespace mvns {

// Raw little-endian field snapshot: u32 N, u32 record count, then per stored
// mode (i32 k1, i32 k2, f64 re/im of both components). Zero coefficients are
// skipped; the reader restores them.
void write_field(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_field(const std::filesystem::path& path, const GridSpec& grid);

// Per-step statistics: t, m2, m4, mean_v2, g, gv2, the cumulative energy
// terms and the running energy residual.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

} // namespace mvns
