#pragma once

#include "rsl/spectral_field.hpp"

namespace rsl {

// i xi . v_hat per mode (scalar field). The theta component is ignored.
SpectralField divergence(const SpectralField& u);

// Mode-wise projection of the velocity onto xi-orthogonal vectors,
// (Id - xi xi^T/|xi|^2); theta untouched; zero mode passed through.
SpectralField leray_project(const SpectralField& u);

double max_divergence(const SpectralField& u);

} // namespace rsl
