#pragma once

#include <functional>

#include "rsl/spectral_field.hpp"

namespace rsl {

// What a Fourier multiplier does at xi = 0. Singular symbols (negative powers
// of |xi|, the Delta_F inverse, ...) use ZeroMode::Zero, matching the
// homogeneous-space convention for mean-free fields.
enum class ZeroMode { Zero, Keep };

// coeffs(xi) <- symbol(xi) * coeffs(xi), symbol scalar (applied to every
// component). Throws if the symbol is non-finite at a nonzero lattice point.
SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<cplx(const Vec3&)>& symbol,
                               ZeroMode zm = ZeroMode::Zero);

// Matrix symbol acting on the component vector of each mode.
SpectralField apply_matrix_multiplier(const SpectralField& f,
                                      const std::function<void(const Vec3&, const cplx*, cplx*)>& symbol,
                                      ZeroMode zm = ZeroMode::Zero);

// |D|^s (fractional Laplacian modulus), s may be negative; zero mode -> 0.
SpectralField fractional_laplacian(const SpectralField& f, double s);

// Heat semigroup e^{nu t Laplacian}.
SpectralField heat_flow(const SpectralField& f, double nu, double t);

// d/dx_i
SpectralField derivative(const SpectralField& f, int axis);

// Zero every mode with an integer frequency component above
// floor(n * fraction / 2). fraction = 2/3 is the usual rule for quadratic
// nonlinearities.
SpectralField dealias(const SpectralField& f, double fraction = 2.0 / 3.0);

// Collocation product of two spectral fields (componentwise if shapes match,
// or scalar * multi), inputs and output truncated by the dealias rule.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g,
                                double fraction = 2.0 / 3.0);

} // namespace rsl
