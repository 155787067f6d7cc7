#pragma once

#include <random>

#include "rsl/spectral_field.hpp"

namespace rsl {

// Real-valued white noise per component, synthesized in collocation space and
// transformed, so Hermitian symmetry is exact. Deterministic in the seed.
SpectralField random_real_field(const TorusGrid& g, int comps, std::uint64_t seed);

// As above, then spectrally shaped by |xi|^{-slope} * exp(-(|xi|/k_cut)^2),
// mean removed. Band-limited below the dealiasing cutoff when requested.
SpectralField shaped_random_field(const TorusGrid& g, int comps, std::uint64_t seed,
                                  double slope, double k_cut, bool band_limit_two_thirds = true);

// Random divergence-free state (Leray-projected shaped noise, mean-free).
StateU random_state(const TorusGrid& g, std::uint64_t seed,
                    double slope = 1.0, double k_cut_frac = 0.5);

} // namespace rsl
