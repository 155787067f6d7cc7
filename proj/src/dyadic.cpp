#include "rsl/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace rsl {

namespace {
double raw_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}
} // namespace

double smooth_step(double t, double width) {
    const double lo = 0.5 - 0.5 * width;
    return raw_step((t - lo) / width);
}

double BumpProfile::lowpass(double r) const {
    // transition on [3/4, 4/3]
    return 1.0 - smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75), width);
}

double BumpProfile::phi(double r) const { return lowpass(0.5 * r) - lowpass(r); }

double BumpProfile::phi1(double r) const {
    const double up = smooth_step((r - 0.5) / 0.25, width);
    const double down = 1.0 - smooth_step((r - 8.0 / 3.0) / (3.0 - 8.0 / 3.0), width);
    return up * down;
}

double BumpProfile::chi(double r) const {
    return 1.0 - smooth_step((r - 1.0) * 3.0, width);
}

DyadicFilter DyadicFilter::for_grid(const TorusGrid& g, BumpProfile b) {
    const double xi_min = g.dk();
    const double xi_max = g.dk() * (g.n / 2) * std::sqrt(3.0);
    DyadicFilter f;
    f.bump = b;
    // annulus support is [3/4 * 2^j, 8/3 * 2^j]
    f.j_min = static_cast<int>(std::floor(std::log2(xi_min / (8.0 / 3.0))));
    f.j_max = static_cast<int>(std::ceil(std::log2(xi_max / 0.75)));
    return f;
}

SpectralField dyadic_block(const SpectralField& u, int j, const DyadicFilter& f) {
    if (j < f.j_min || j > f.j_max)
        throw std::out_of_range("dyadic_block: j outside the resolvable range");
    SpectralField out(u.grid, u.comps);
    const TorusGrid& g = u.grid;
    const double scale = std::pow(2.0, -j);
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) continue;
                const double w = f.bump.phi(scale * norm(g.freq(i1, i2, i3)));
                if (w == 0.0) continue;
                for (int c = 0; c < u.comps; ++c) out.at(m, c) = w * u.at(m, c);
            }
    return out;
}

std::vector<SpectralField> dyadic_blocks(const SpectralField& u, const DyadicFilter& f) {
    std::vector<SpectralField> blocks;
    blocks.reserve(f.block_count());
    for (int j = f.j_min; j <= f.j_max; ++j) blocks.push_back(dyadic_block(u, j, f));
    return blocks;
}

} // namespace rsl
