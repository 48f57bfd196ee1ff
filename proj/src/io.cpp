#include "mvns/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mvns {

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("field snapshot: truncated file");
    return v;
}

} // namespace

void write_field(const std::filesystem::path& path, const SpectralField& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const int n = f.grid().modes_per_axis;
    uint32_t count = 0;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            if (f.at(0, k1, k2) != Complex{} || f.at(1, k1, k2) != Complex{}) ++count;
        }
    }
    put<uint32_t>(out, static_cast<uint32_t>(n));
    put<uint32_t>(out, count);
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            const Complex a = f.at(0, k1, k2);
            const Complex b = f.at(1, k1, k2);
            if (a == Complex{} && b == Complex{}) continue;
            put<int32_t>(out, k1);
            put<int32_t>(out, k2);
            put<double>(out, a.real());
            put<double>(out, a.imag());
            put<double>(out, b.real());
            put<double>(out, b.imag());
        }
    }
    if (!out) throw std::runtime_error("field snapshot: write failed");
}

SpectralField read_field(const std::filesystem::path& path, const GridSpec& grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const auto n = get<uint32_t>(in);
    if (static_cast<int>(n) != grid.modes_per_axis)
        throw std::runtime_error("field snapshot: mode count mismatch");
    const auto count = get<uint32_t>(in);
    SpectralField f(grid);
    for (uint32_t i = 0; i < count; ++i) {
        const auto k1 = get<int32_t>(in);
        const auto k2 = get<int32_t>(in);
        if (!grid.in_range(k1, k2))
            throw std::runtime_error("field snapshot: wavevector outside truncation");
        const double ar = get<double>(in), ai = get<double>(in);
        const double br = get<double>(in), bi = get<double>(in);
        f.at(0, k1, k2) = Complex(ar, ai);
        f.at(1, k1, k2) = Complex(br, bi);
    }
    return f;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_double(row[i]);
        }
        out << "\n";
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.stats.size());
    for (size_t i = 0; i < traj.stats.size(); ++i) {
        const auto& s = traj.stats[i];
        rows.push_back({s.t, s.m2, s.m4, s.v2, s.g_mean, s.gv2, s.acc_visc, s.acc_fwork,
                        s.acc_gwork, s.acc_hs, traj.energy_residual_at(i)});
    }
    write_csv(path, "t,m2,m4,mean_v2,g,gv2,e_visc,e_fwork,e_gwork,e_hs,residual", rows);
}

} // namespace mvns
