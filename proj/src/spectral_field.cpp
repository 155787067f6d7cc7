#include "rsl/spectral_field.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace rsl {

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    assert(same_shape(o));
    for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    assert(same_shape(o));
    for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& x : a) x *= s;
    return *this;
}

SpectralField operator+(SpectralField l, const SpectralField& r) { l += r; return l; }
SpectralField operator-(SpectralField l, const SpectralField& r) { l -= r; return l; }
SpectralField operator*(double s, SpectralField f) { f *= s; return f; }

double pairwise_sum(std::span<const double> v) {
    const size_t n = v.size();
    if (n <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

cplx inner_l2(const SpectralField& f, const SpectralField& g) {
    if (!f.same_shape(g)) throw std::invalid_argument("inner_l2: shape mismatch");
    const long n = static_cast<long>(f.a.size());
    std::vector<double> re(n), im(n);
    for (long i = 0; i < n; ++i) {
        const cplx t = f.a[i] * std::conj(g.a[i]);
        re[i] = t.real();
        im[i] = t.imag();
    }
    const double vol = f.grid.cell_volume();
    return vol * cplx(pairwise_sum(re), pairwise_sum(im));
}

double norm_l2(const SpectralField& f) {
    const long n = static_cast<long>(f.a.size());
    std::vector<double> terms(n);
    for (long i = 0; i < n; ++i) terms[i] = std::norm(f.a[i]);
    return std::sqrt(f.grid.cell_volume() * pairwise_sum(terms));
}

namespace {

template <typename W>
double weighted_norm(const SpectralField& f, W&& w) {
    const TorusGrid& g = f.grid;
    std::vector<double> terms(g.size());
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                double s = 0.0;
                for (int c = 0; c < f.comps; ++c) s += std::norm(f.at(m, c));
                terms[m] = w(g.freq(i1, i2, i3), m) * s;
            }
    return std::sqrt(g.cell_volume() * pairwise_sum(terms));
}

} // namespace

double norm_hs(const SpectralField& f, double s) {
    return weighted_norm(f, [s](const Vec3& xi, long m) {
        if (m == 0) return 0.0;
        return std::pow(norm2(xi), s);
    });
}

double norm_hs_inhom(const SpectralField& f, double s) {
    return weighted_norm(f, [s](const Vec3& xi, long) {
        return std::pow(1.0 + norm2(xi), s);
    });
}

cplx inner_hs(const SpectralField& f, const SpectralField& g, double s) {
    if (!f.same_shape(g)) throw std::invalid_argument("inner_hs: shape mismatch");
    const TorusGrid& gr = f.grid;
    std::vector<double> re(gr.size()), im(gr.size());
    for (int i1 = 0; i1 < gr.n; ++i1)
        for (int i2 = 0; i2 < gr.n; ++i2)
            for (int i3 = 0; i3 < gr.n; ++i3) {
                const long m = gr.index(i1, i2, i3);
                if (m == 0) { re[m] = im[m] = 0.0; continue; }
                const double w = std::pow(norm2(gr.freq(i1, i2, i3)), s);
                cplx t(0.0);
                for (int c = 0; c < f.comps; ++c) t += f.at(m, c) * std::conj(g.at(m, c));
                re[m] = w * t.real();
                im[m] = w * t.imag();
            }
    const double vol = gr.cell_volume();
    return vol * cplx(pairwise_sum(re), pairwise_sum(im));
}

double norm_linf_phys(const PhysicalField& f) {
    double m = 0.0;
    for (const auto& x : f.a) m = std::max(m, std::abs(x));
    return m;
}

double norm_lp_phys(const PhysicalField& f, double p) {
    if (std::isinf(p)) return norm_linf_phys(f);
    const long n = static_cast<long>(f.a.size());
    std::vector<double> terms(n);
    for (long i = 0; i < n; ++i) terms[i] = std::pow(std::abs(f.a[i]), p);
    return std::pow(f.grid.cell_volume() * pairwise_sum(terms), 1.0 / p);
}

double max_coeff_diff(const SpectralField& f, const SpectralField& g) {
    if (!f.same_shape(g)) throw std::invalid_argument("max_coeff_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < f.a.size(); ++i) m = std::max(m, std::abs(f.a[i] - g.a[i]));
    return m;
}

double max_abs_coeff(const SpectralField& f) {
    double m = 0.0;
    for (const auto& x : f.a) m = std::max(m, std::abs(x));
    return m;
}

} // namespace rsl
