#include "mvns/transform.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace mvns {

CollocationTransform::CollocationTransform(int modes_per_axis, int phys_per_axis)
    : n_(modes_per_axis), p_(phys_per_axis) {
    if (p_ < 2 * n_ + 1)
        throw std::invalid_argument("CollocationTransform: P must be >= 2N+1");
    const int side = 2 * n_ + 1;
    table_.resize(static_cast<size_t>(side) * p_);
    for (int k = -n_; k <= n_; ++k) {
        for (int j = 0; j < p_; ++j) {
            const double x = 2.0 * std::numbers::pi * j / p_;
            table_[static_cast<size_t>(k + n_) * p_ + j] =
                std::complex<double>(std::cos(k * x), std::sin(k * x));
        }
    }
}

void CollocationTransform::to_physical(std::span<const std::complex<double>> modes,
                                       std::span<double> phys) const {
    to_physical_deriv(modes, -1, phys);
}

void CollocationTransform::to_physical_deriv(std::span<const std::complex<double>> modes,
                                             int axis, std::span<double> phys) const {
    const int side = 2 * n_ + 1;
    assert(modes.size() == static_cast<size_t>(side) * side);
    assert(phys.size() == phys_size());

    // tmp[a][j2] = sum_{k2} modes[a,k2] e^{i k2 x_j2}, a = k1 + N
    std::vector<std::complex<double>> tmp(static_cast<size_t>(side) * p_);
    for (int a = 0; a < side; ++a) {
        const std::complex<double>* row = modes.data() + static_cast<size_t>(a) * side;
        std::complex<double>* out = tmp.data() + static_cast<size_t>(a) * p_;
        for (int b = 0; b < side; ++b) {
            std::complex<double> m = row[b];
            if (m.real() == 0.0 && m.imag() == 0.0) continue;
            if (axis == 1) m *= std::complex<double>(0.0, static_cast<double>(b - n_));
            const std::complex<double>* e = table_.data() + static_cast<size_t>(b) * p_;
            for (int j = 0; j < p_; ++j) out[j] += m * e[j];
        }
        if (axis == 0) {
            const std::complex<double> ik(0.0, static_cast<double>(a - n_));
            for (int j = 0; j < p_; ++j) out[j] *= ik;
        }
    }
    // phys[j1][j2] = Re sum_{k1} tmp[k1][j2] e^{i k1 x_j1}
    for (int j1 = 0; j1 < p_; ++j1) {
        double* out = phys.data() + static_cast<size_t>(j1) * p_;
        for (int j2 = 0; j2 < p_; ++j2) out[j2] = 0.0;
        for (int a = 0; a < side; ++a) {
            const std::complex<double> e = table_[static_cast<size_t>(a) * p_ + j1];
            const std::complex<double>* row = tmp.data() + static_cast<size_t>(a) * p_;
            for (int j2 = 0; j2 < p_; ++j2) {
                out[j2] += e.real() * row[j2].real() - e.imag() * row[j2].imag();
            }
        }
    }
}

void CollocationTransform::to_modes(std::span<const double> phys,
                                    std::span<std::complex<double>> modes) const {
    const int side = 2 * n_ + 1;
    assert(phys.size() == phys_size());
    assert(modes.size() == static_cast<size_t>(side) * side);

    // tmp[a][j2] = sum_{j1} phys[j1][j2] e^{-i k1 x_j1}
    std::vector<std::complex<double>> tmp(static_cast<size_t>(side) * p_);
    for (int a = 0; a < side; ++a) {
        std::complex<double>* out = tmp.data() + static_cast<size_t>(a) * p_;
        for (int j1 = 0; j1 < p_; ++j1) {
            const std::complex<double> e = std::conj(table_[static_cast<size_t>(a) * p_ + j1]);
            const double* row = phys.data() + static_cast<size_t>(j1) * p_;
            for (int j2 = 0; j2 < p_; ++j2) out[j2] += e * row[j2];
        }
    }
    const double scale = 1.0 / (static_cast<double>(p_) * p_);
    for (int a = 0; a < side; ++a) {
        const std::complex<double>* row = tmp.data() + static_cast<size_t>(a) * p_;
        for (int b = 0; b < side; ++b) {
            const std::complex<double>* e = table_.data() + static_cast<size_t>(b) * p_;
            std::complex<double> acc{0.0, 0.0};
            for (int j = 0; j < p_; ++j) acc += row[j] * std::conj(e[j]);
            modes[static_cast<size_t>(a) * side + b] = acc * scale;
        }
    }
    // Enforce u_hat(-k) = conj(u_hat(k)) exactly.
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            const size_t i = static_cast<size_t>(a) * side + b;
            const size_t j = static_cast<size_t>(side - 1 - a) * side + (side - 1 - b);
            if (i > j) continue;
            const std::complex<double> half = 0.5 * (modes[i] + std::conj(modes[j]));
            modes[i] = half;
            modes[j] = std::conj(half);
        }
    }
}

} // namespace mvns
