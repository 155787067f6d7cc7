#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace rsl {

// Physical constants of the rotating/stratified regime. epsilon is the
// Rossby number, froude the Froude number (the dispersive machinery needs
// froude != 1), nu/nu_prime the kinematic viscosity and thermal diffusivity.
struct PhysicalParams {
    double epsilon = 0.1;
    double froude = 2.0;
    double nu = 1.0;
    double nu_prime = 1.0;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
        if (!(froude > 0.0)) throw std::invalid_argument("froude must be > 0");
        if (froude == 1.0) throw std::invalid_argument("froude = 1 is outside the dispersive regime");
        if (!(nu > 0.0) || !(nu_prime > 0.0)) throw std::invalid_argument("viscosities must be > 0");
    }

    bool equal_viscosities(double rel_tol = 1e-14) const {
        return std::abs(nu - nu_prime) <= rel_tol * std::max(nu, nu_prime);
    }

    void require_equal_viscosities() const {
        if (!equal_viscosities())
            throw std::invalid_argument("operation requires nu == nu_prime");
    }
};

using Vec3 = std::array<double, 3>;

inline double norm2(const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }
inline double norm(const Vec3& x) { return std::sqrt(norm2(x)); }

// |xi|_F^2 = xi_1^2 + xi_2^2 + F^2 xi_3^2, the stratified weight that shows up
// in the potential-vorticity inversion and all the dispersive symbols.
inline double normF2(const Vec3& xi, double froude) {
    return xi[0] * xi[0] + xi[1] * xi[1] + froude * froude * xi[2] * xi[2];
}
inline double normF(const Vec3& xi, double froude) { return std::sqrt(normF2(xi, froude)); }

// Periodic cubic lattice: n modes per axis on a box of side box_length.
// Integer frequencies live in [-n/2, n/2) per axis, physical frequencies are
// scaled by 2*pi/box_length. Storage follows FFT order (0..n/2-1, -n/2..-1).
struct TorusGrid {
    int n = 32;
    double box_length = 2.0 * M_PI;

    void validate() const {
        if (n <= 0 || n % 2 != 0) throw std::invalid_argument("grid n must be even and positive");
        if (!(box_length > 0.0)) throw std::invalid_argument("box_length must be > 0");
    }

    long size() const { return static_cast<long>(n) * n * n; }
    double dk() const { return 2.0 * M_PI / box_length; }
    double dx() const { return box_length / n; }
    // quadrature weight of one collocation cell
    double cell_volume() const { return dx() * dx() * dx(); }

    int wrap(int i) const { return i < n / 2 ? i : i - n; }

    long index(int i1, int i2, int i3) const {
        return (static_cast<long>(i1) * n + i2) * n + i3;
    }

    Vec3 freq(int i1, int i2, int i3) const {
        const double s = dk();
        return {s * wrap(i1), s * wrap(i2), s * wrap(i3)};
    }

    Vec3 point(int i1, int i2, int i3) const {
        const double s = dx();
        return {s * i1, s * i2, s * i3};
    }

    bool operator==(const TorusGrid& o) const {
        return n == o.n && box_length == o.box_length;
    }
};

} // namespace rsl
