#pragma once

#include "rsl/spectral_field.hpp"

namespace rsl {

// Unitary 3D DFT between collocation samples and Fourier coefficients
// (1/sqrt(n^3) each way, so Parseval holds with no side factors). Plans are
// cached per (n, comps); FFTW_ESTIMATE keeps planning deterministic.
PhysicalField backward(const SpectralField& f);
SpectralField forward(const PhysicalField& u);

// Convenience: physical samples of a single component.
PhysicalField backward_component(const SpectralField& f, int c);

} // namespace rsl
