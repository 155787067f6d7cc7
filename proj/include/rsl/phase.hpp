#pragma once

#include <array>

#include "rsl/dyadic.hpp"
#include "rsl/params.hpp"

namespace rsl {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Dispersion symbol of the wave phase. For the stratified system the symbol
// is p(xi) = |xi|_F / |xi| and the wave phase is (t / (eps F)) p(xi); for the
// purely rotating system p(xi) = xi_3 / |xi| with phase (t / eps) p(xi).
// Both are homogeneous of degree zero and axisymmetric about the xi_3 axis.
struct PhaseSpec {
    enum class Kind { stratified, rotating };
    Kind kind = Kind::stratified;
    double froude = 2.0;

    void validate() const;
    double value(const Vec3& xi) const;
    double value_cyl(double xi_h, double xi_3) const; // same, cylindrical args
    // |grad p| in closed form (axisymmetric, so a function of (xi_h, xi_3));
    // the group velocity of a wave packet at xi is sigma_scale * grad p.
    double gradient_norm_cyl(double xi_h, double xi_3) const;
    // multiplies sigma in the kernel phase: 1/F (stratified) or 1 (rotating)
    double sigma_scale() const;
};

// Closed-form Hessian of the stratified symbol |xi|_F/|xi|; all entries carry
// the common prefactor (1 - F^2) / (|xi|^3 |xi|_F).
Mat3 hessian_bF(const Vec3& xi, double froude);

// Closed-form eigenvalues of that Hessian:
//   prefactor * { xi3^2, (D +/- sqrt(D^2 + 4 xi3^2 |xi_h|^2)) / 2 },
//   D = (F^2 xi3^4 - |xi_h|^4) / |xi|_F^2.
std::array<double, 3> hessian_bF_eigenvalues(const Vec3& xi, double froude);

// Eigenvalues for the rotating symbol xi_3/|xi|:
//   (1/|xi|^3) { -xi3, xi3 +/- sqrt(4 |xi_h|^2 + xi3^2) }.
std::array<double, 3> hessian_rotating_eigenvalues(const Vec3& xi);

// Number of nonzero Hessian eigenvalues (1, 2 or 3): the degenerate zones are
// exactly xi_3 = 0 (one) and xi_h = 0 (two). Zero tests are relative, 1e-12.
int zone_classify(const Vec3& xi, const PhaseSpec& phase);

// Numerical Hessian by second-order central differences (test oracle).
Mat3 hessian_fd(const Vec3& xi, const PhaseSpec& phase, double step = 1e-5);

// Eigenvalues of a symmetric 3x3 matrix (closed-form via the trigonometric
// method), ascending order.
std::array<double, 3> symmetric_eigenvalues(const Mat3& m);

} // namespace rsl
