#pragma once

#include <string>

#include "rsl/spectral_field.hpp"

namespace rsl {

// Binary field snapshot. Layout:
//   magic "RLB1" | u32 comps | u32 n | f64 box_length |
//   interleaved f64 (re,im) pairs, row-major lattice order (FFT axis order),
//   components fastest. Little-endian throughout.
void write_snapshot(const std::string& path, const SpectralField& f);
SpectralField read_snapshot(const std::string& path);

} // namespace rsl
