#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rsl/params.hpp"

namespace rsl {

using cplx = std::complex<double>;

// Multi-component field in Fourier representation. Coefficients are stored
// interleaved, a[mode * comps + c], so that per-mode matrix algebra touches
// contiguous memory. The same container shape is reused for collocation-space
// samples (PhysicalField below); realness of physical fields is an invariant,
// not a type.
struct SpectralField {
    TorusGrid grid;
    int comps = 1;
    std::vector<cplx> a;

    SpectralField() = default;
    SpectralField(const TorusGrid& g, int c) : grid(g), comps(c), a(g.size() * c, cplx(0.0)) {}

    long modes() const { return grid.size(); }

    cplx& at(long mode, int c) { return a[mode * comps + c]; }
    const cplx& at(long mode, int c) const { return a[mode * comps + c]; }

    cplx& at(int i1, int i2, int i3, int c) { return at(grid.index(i1, i2, i3), c); }
    const cplx& at(int i1, int i2, int i3, int c) const { return at(grid.index(i1, i2, i3), c); }

    void set_zero() { std::fill(a.begin(), a.end(), cplx(0.0)); }

    void zero_mean() {
        for (int c = 0; c < comps; ++c) at(long(0), c) = 0.0;
    }

    bool same_shape(const SpectralField& o) const {
        return grid == o.grid && comps == o.comps;
    }

    SpectralField component(int c) const {
        SpectralField out(grid, 1);
        for (long m = 0; m < modes(); ++m) out.a[m] = at(m, c);
        return out;
    }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField l, const SpectralField& r);
SpectralField operator-(SpectralField l, const SpectralField& r);
SpectralField operator*(double s, SpectralField f);

// Collocation samples, same layout as SpectralField.
struct PhysicalField {
    TorusGrid grid;
    int comps = 1;
    std::vector<cplx> a;

    PhysicalField() = default;
    PhysicalField(const TorusGrid& g, int c) : grid(g), comps(c), a(g.size() * c, cplx(0.0)) {}

    long points() const { return grid.size(); }
    cplx& at(long p, int c) { return a[p * comps + c]; }
    const cplx& at(long p, int c) const { return a[p * comps + c]; }
};

// Four-component state (v1, v2, v3, theta) with divergence-free velocity.
using StateU = SpectralField;

inline StateU make_state(const TorusGrid& g) { return StateU(g, 4); }

// Deterministic reduction helpers. Sums always use the same pairwise tree so
// results do not depend on evaluation order or worker count.
double pairwise_sum(std::span<const double> v);

// sum over modes of w(mode) where w is any callable mode -> double
template <typename F>
double pairwise_sum_modes(long n, F&& f) {
    std::vector<double> terms(n);
    for (long i = 0; i < n; ++i) terms[i] = f(i);
    return pairwise_sum(terms);
}

// L2(T^3) inner product / norms computed spectrally (Parseval with the cell
// volume factor, so values match collocation-space quadrature).
cplx inner_l2(const SpectralField& f, const SpectralField& g);
double norm_l2(const SpectralField& f);

// Homogeneous Sobolev norm: zero mode excluded.
double norm_hs(const SpectralField& f, double s);
// Inhomogeneous H^s norm, weight (1 + |xi|^2)^{s/2}.
double norm_hs_inhom(const SpectralField& f, double s);
cplx inner_hs(const SpectralField& f, const SpectralField& g, double s);

double norm_linf_phys(const PhysicalField& f);
double norm_lp_phys(const PhysicalField& f, double p);

// max_k |f_k - g_k| over coefficients
double max_coeff_diff(const SpectralField& f, const SpectralField& g);
double max_abs_coeff(const SpectralField& f);

} // namespace rsl
