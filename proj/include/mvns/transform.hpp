#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mvns/grid.hpp"

namespace mvns {

// Dense collocation transform between the (2N+1)^2 mode window and a P x P
// physical grid, evaluated as two separable partial DFTs against a
// precomputed twiddle table. The forward direction is the trapezoid
// quadrature u_hat(k) = P^-2 sum_x u(x) e^{-ik.x}, which is the exact
// Fourier coefficient whenever the integrand is band-limited below P.
class CollocationTransform {
  public:
    CollocationTransform(int modes_per_axis, int phys_per_axis);

    int modes_per_axis() const { return n_; }
    int phys_per_axis() const { return p_; }
    size_t phys_size() const { return static_cast<size_t>(p_) * p_; }

    // modes: (2N+1)^2 dense (k-major as in GridSpec::index); phys: P^2 row-major.
    void to_physical(std::span<const std::complex<double>> modes,
                     std::span<double> phys) const;

    // Samples the partial derivative along the given axis (0 or 1): the
    // coefficients are scaled by i k_axis on the fly.
    void to_physical_deriv(std::span<const std::complex<double>> modes, int axis,
                           std::span<double> phys) const;

    // Quadrature transform. The output is Hermitian-symmetrized so the
    // reality invariant holds exactly, not just to roundoff.
    void to_modes(std::span<const double> phys,
                  std::span<std::complex<double>> modes) const;

  private:
    int n_;
    int p_;
    std::vector<std::complex<double>> table_;  // (2N+1) x P: e^{i k x_j}
};

} // namespace mvns
