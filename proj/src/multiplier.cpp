#include "rsl/multiplier.hpp"

#include <cmath>
#include <stdexcept>

#include "rsl/transform.hpp"

namespace rsl {

SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<cplx(const Vec3&)>& symbol,
                               ZeroMode zm) {
    SpectralField out(f.grid, f.comps);
    const TorusGrid& g = f.grid;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) {
                    if (zm == ZeroMode::Keep)
                        for (int c = 0; c < f.comps; ++c) out.at(m, c) = f.at(m, c);
                    continue;
                }
                const cplx s = symbol(g.freq(i1, i2, i3));
                if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                    throw std::domain_error("multiplier symbol non-finite at a nonzero lattice point");
                for (int c = 0; c < f.comps; ++c) out.at(m, c) = s * f.at(m, c);
            }
    return out;
}

SpectralField apply_matrix_multiplier(const SpectralField& f,
                                      const std::function<void(const Vec3&, const cplx*, cplx*)>& symbol,
                                      ZeroMode zm) {
    SpectralField out(f.grid, f.comps);
    const TorusGrid& g = f.grid;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) {
                    if (zm == ZeroMode::Keep)
                        for (int c = 0; c < f.comps; ++c) out.at(m, c) = f.at(m, c);
                    continue;
                }
                symbol(g.freq(i1, i2, i3), &f.at(m, 0), &out.at(m, 0));
            }
    return out;
}

SpectralField fractional_laplacian(const SpectralField& f, double s) {
    return apply_multiplier(f, [s](const Vec3& xi) { return cplx(std::pow(norm2(xi), 0.5 * s)); });
}

SpectralField heat_flow(const SpectralField& f, double nu, double t) {
    return apply_multiplier(
        f, [nu, t](const Vec3& xi) { return cplx(std::exp(-nu * t * norm2(xi))); },
        ZeroMode::Keep);
}

SpectralField derivative(const SpectralField& f, int axis) {
    return apply_multiplier(f, [axis](const Vec3& xi) { return cplx(0.0, xi[axis]); });
}

SpectralField dealias(const SpectralField& f, double fraction) {
    SpectralField out = f;
    const TorusGrid& g = f.grid;
    const int kmax = static_cast<int>(g.n * fraction / 2.0);
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                if (std::abs(g.wrap(i1)) <= kmax && std::abs(g.wrap(i2)) <= kmax &&
                    std::abs(g.wrap(i3)) <= kmax)
                    continue;
                const long m = g.index(i1, i2, i3);
                for (int c = 0; c < f.comps; ++c) out.at(m, c) = 0.0;
            }
    return out;
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, double fraction) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("dealiased_product: grid mismatch");
    const PhysicalField fp = backward(dealias(f, fraction));
    const PhysicalField gp = backward(dealias(g, fraction));
    const int comps = std::max(f.comps, g.comps);
    if (f.comps != g.comps && std::min(f.comps, g.comps) != 1)
        throw std::invalid_argument("dealiased_product: incompatible component counts");
    PhysicalField prod(f.grid, comps);
    for (long i = 0; i < prod.points(); ++i)
        for (int c = 0; c < comps; ++c)
            prod.at(i, c) = fp.at(i, f.comps == 1 ? 0 : c) * gp.at(i, g.comps == 1 ? 0 : c);
    return dealias(forward(prod), fraction);
}

} // namespace rsl
