#pragma once

#include <vector>

#include "rsl/spectral_field.hpp"

namespace rsl {

// C-infinity transition built from exp(-1/t): rises from 0 at t<=0 to 1 at
// t>=1, with the active part confined to the middle `width` fraction of the
// unit interval (width = 1 recovers the plain profile).
double smooth_step(double t, double width = 1.0);

// Radial bump family used everywhere a smooth cutoff is needed. All profiles
// are exact 0 / exact 1 outside their transition zones.
struct BumpProfile {
    double width = 0.5; // transition sharpness, in (0, 1]

    // 1 on r <= 3/4, 0 on r >= 4/3 (the low-pass generator)
    double lowpass(double r) const;
    // the annulus bump phi(r) = lowpass(r/2) - lowpass(r):
    // supported in [3/4, 8/3], dyadic partition of unity by telescoping
    double phi(double r) const;
    // wider annulus bump: supported in [1/2, 3], identically 1 on [3/4, 8/3]
    double phi1(double r) const;
    // kernel-space cutoff: 1 on [0, 1], supported in [0, 4/3)
    double chi(double r) const;
};

// Dyadic filter bank resolvable on a given lattice. j_min..j_max cover every
// nonzero lattice frequency, so sum_j phi(2^{-j} xi) = 1 there exactly.
struct DyadicFilter {
    BumpProfile bump;
    int j_min = 0;
    int j_max = 0;

    // Besov defaults use a sharp transition so that sum_j phi_j^2 stays close
    // to 1 (block overlap stays a small correction in L2 accounting).
    static DyadicFilter for_grid(const TorusGrid& g, BumpProfile b = {0.15});

    int block_count() const { return j_max - j_min + 1; }
};

// Frequency localization to the annulus |xi| ~ 2^j. Throws if j is outside
// the filter's resolvable range.
SpectralField dyadic_block(const SpectralField& u, int j, const DyadicFilter& f);

// All blocks at once (one pass over the lattice).
std::vector<SpectralField> dyadic_blocks(const SpectralField& u, const DyadicFilter& f);

} // namespace rsl
