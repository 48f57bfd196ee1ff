#pragma once

#include <array>
#include <complex>
#include <map>
#include <vector>

#include "mvns/grid.hpp"

namespace mvns {

using Complex = std::complex<double>;

// A 2-component velocity field as Fourier coefficients on a GridSpec.
// Invariants maintained by the operator layer:
//   reality           u_hat(-k) = conj(u_hat(k))
//   incompressibility k . u_hat(k) = 0
//   zero mean         u_hat(0) = 0
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& grid)
        : grid_(grid), coeff_(2 * static_cast<size_t>(grid.coeff_count())) {}

    const GridSpec& grid() const { return grid_; }

    Complex& at(int comp, int k1, int k2) {
        return coeff_[static_cast<size_t>(comp) * grid_.coeff_count() + grid_.index(k1, k2)];
    }
    const Complex& at(int comp, int k1, int k2) const {
        return coeff_[static_cast<size_t>(comp) * grid_.coeff_count() + grid_.index(k1, k2)];
    }

    Complex* component(int comp) {
        return coeff_.data() + static_cast<size_t>(comp) * grid_.coeff_count();
    }
    const Complex* component(int comp) const {
        return coeff_.data() + static_cast<size_t>(comp) * grid_.coeff_count();
    }

    size_t size() const { return coeff_.size(); }
    Complex* data() { return coeff_.data(); }
    const Complex* data() const { return coeff_.data(); }

    void set_zero();
    void scale(double s);
    void axpy(double s, const SpectralField& other);  // this += s * other
    bool all_finite() const;

    // Max |k . u_hat(k)| over modes; 0 for an exactly projected field.
    double max_divergence() const;
    // Max |u_hat(-k) - conj(u_hat(k))|.
    double max_reality_defect() const;

  private:
    GridSpec grid_;
    std::vector<Complex> coeff_;
};

// L2(torus) inner product of real fields: (u,v)_H = (2pi)^2 sum Re(u_hat conj(v_hat)).
double inner_h(const SpectralField& u, const SpectralField& v);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);

// Coefficient map as the exchange format for raw (not yet projected) data.
using RawCoeffMap = std::map<std::array<int, 2>, std::array<Complex, 2>>;

// Builds a dense field from a coefficient map. Throws std::out_of_range if a
// wavevector lies outside the grid truncation. The zero mode is discarded.
SpectralField field_from_map(const RawCoeffMap& raw, const GridSpec& grid);

} // namespace mvns
