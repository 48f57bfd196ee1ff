#include "mvns/field.hpp"

#include <cmath>

namespace mvns {

void SpectralField::set_zero() {
    std::fill(coeff_.begin(), coeff_.end(), Complex{0.0, 0.0});
}

void SpectralField::scale(double s) {
    for (auto& c : coeff_) c *= s;
}

void SpectralField::axpy(double s, const SpectralField& other) {
    require_same_grid(grid_, other.grid_);
    for (size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += s * other.coeff_[i];
}

bool SpectralField::all_finite() const {
    for (const auto& c : coeff_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

double SpectralField::max_divergence() const {
    const int n = grid_.modes_per_axis;
    double worst = 0.0;
    for (int k1 = -n; k1 <= n; ++k1) {
        for (int k2 = -n; k2 <= n; ++k2) {
            const Complex d = static_cast<double>(k1) * at(0, k1, k2) +
                              static_cast<double>(k2) * at(1, k1, k2);
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

double SpectralField::max_reality_defect() const {
    const int n = grid_.modes_per_axis;
    double worst = 0.0;
    for (int c = 0; c < 2; ++c) {
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const Complex d = at(c, -k1, -k2) - std::conj(at(c, k1, k2));
                worst = std::max(worst, std::abs(d));
            }
        }
    }
    return worst;
}

double inner_h(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u.grid(), v.grid());
    double acc = 0.0;
    const Complex* a = u.data();
    const Complex* b = v.data();
    const size_t n = u.size();
    for (size_t i = 0; i < n; ++i) {
        acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return GridSpec::area() * acc;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    SpectralField r = a;
    r.axpy(1.0, b);
    return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    SpectralField r = a;
    r.axpy(-1.0, b);
    return r;
}

SpectralField operator*(double s, const SpectralField& a) {
    SpectralField r = a;
    r.scale(s);
    return r;
}

SpectralField field_from_map(const RawCoeffMap& raw, const GridSpec& grid) {
    SpectralField f(grid);
    for (const auto& [k, uk] : raw) {
        if (k[0] == 0 && k[1] == 0) continue;
        if (!grid.in_range(k[0], k[1]))
            throw std::out_of_range("field_from_map: wavevector outside grid truncation");
        f.at(0, k[0], k[1]) = uk[0];
        f.at(1, k[0], k[1]) = uk[1];
    }
    return f;
}

} // namespace mvns
