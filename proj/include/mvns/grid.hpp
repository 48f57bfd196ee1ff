#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvns {

// Truncated Fourier discretization of the 2-torus [0,2pi)^2.
// Retained wavevectors are k = (k1,k2) with |k1|,|k2| <= N; the zero mode
// is carried in the dense layout but always held at zero for velocity fields.
struct GridSpec {
    int modes_per_axis = 8;   // N
    bool dealias = true;      // alias-free quadratic products
    int collocation = 0;      // physical points per axis; 0 = auto

    int side() const { return 2 * modes_per_axis + 1; }
    int coeff_count() const { return side() * side(); }

    // Collocation resolution used for nonlinear products and pointwise maps.
    // P >= 3N+1 makes quadratic products alias-free; P >= 2N+1 makes the
    // quadrature of |u|^2 exact (discrete Parseval).
    int collocation_points() const {
        if (collocation > 0) return collocation;
        const int n = modes_per_axis;
        return dealias ? 3 * n + 2 : 2 * n + 2;
    }

    static constexpr double domain_length() { return 2.0 * std::numbers::pi; }
    static constexpr double area() { return domain_length() * domain_length(); }

    bool in_range(int k1, int k2) const {
        const int n = modes_per_axis;
        return k1 >= -n && k1 <= n && k2 >= -n && k2 <= n;
    }
    int index(int k1, int k2) const {
        return (k1 + modes_per_axis) * side() + (k2 + modes_per_axis);
    }

    void validate() const {
        if (modes_per_axis < 1)
            throw std::invalid_argument("GridSpec: modes_per_axis must be >= 1");
        if (collocation != 0 && collocation < 2 * modes_per_axis + 1)
            throw std::invalid_argument("GridSpec: collocation below 2N+1 cannot resolve the mode set");
    }

    bool operator==(const GridSpec& o) const {
        return modes_per_axis == o.modes_per_axis && dealias == o.dealias &&
               collocation == o.collocation;
    }
};

class GridMismatchError : public std::invalid_argument {
  public:
    GridMismatchError() : std::invalid_argument("fields live on different grids") {}
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw GridMismatchError();
}

} // namespace mvns
