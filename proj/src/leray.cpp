#include "rsl/leray.hpp"

#include <stdexcept>

namespace rsl {

SpectralField divergence(const SpectralField& u) {
    if (u.comps < 3) throw std::invalid_argument("divergence: needs at least 3 components");
    SpectralField out(u.grid, 1);
    const TorusGrid& g = u.grid;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                const Vec3 xi = g.freq(i1, i2, i3);
                out.at(m, 0) = cplx(0.0, 1.0) *
                               (xi[0] * u.at(m, 0) + xi[1] * u.at(m, 1) + xi[2] * u.at(m, 2));
            }
    return out;
}

SpectralField leray_project(const SpectralField& u) {
    if (u.comps < 3) throw std::invalid_argument("leray_project: needs at least 3 components");
    SpectralField out = u;
    const TorusGrid& g = u.grid;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) continue; // zero mode passed through
                const Vec3 xi = g.freq(i1, i2, i3);
                const double k2 = norm2(xi);
                const cplx dot = xi[0] * u.at(m, 0) + xi[1] * u.at(m, 1) + xi[2] * u.at(m, 2);
                for (int c = 0; c < 3; ++c) out.at(m, c) = u.at(m, c) - xi[c] * dot / k2;
            }
    return out;
}

double max_divergence(const SpectralField& u) {
    return max_abs_coeff(divergence(u));
}

} // namespace rsl
