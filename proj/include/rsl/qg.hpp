#pragma once

#include <functional>

#include "rsl/spectral_field.hpp"

namespace rsl {

// Potential vorticity Omega(U) = d1 v2 - d2 v1 - F d3 theta, as a scalar
// spectral field: i(xi1 v2 - xi2 v1) - i F xi3 theta per mode.
SpectralField potential_vorticity(const StateU& u, const PhysicalParams& p);

// Inverse of Delta_F = d1^2 + d2^2 + F^2 d3^2: division by -|xi|_F^2,
// zero mode -> 0.
SpectralField deltaF_inverse(const SpectralField& f, const PhysicalParams& p);

// Biot-Savart style reconstruction of a quasi-geostrophic state from its
// potential vorticity: (-d2, d1, 0, -F d3) Delta_F^{-1} omega.
StateU q_reconstruct(const SpectralField& omega, const PhysicalParams& p);

// Orthogonal splitting U = QU + PU. Per mode QU is the projection onto
// m(xi) = (-i xi2, i xi1, 0, -i F xi3); PU is the complement.
StateU q_project(const StateU& u, const PhysicalParams& p);
StateU p_project(const StateU& u, const PhysicalParams& p);

// Limit diffusion symbol: xi -> -|xi|^2 (nu xi1^2 + nu xi2^2 + nu' F^2 xi3^2) / |xi|_F^2.
// Reduces to -nu |xi|^2 when nu = nu'.
std::function<cplx(const Vec3&)> gamma_symbol(const PhysicalParams& p);

} // namespace rsl
