#include "rsl/qg.hpp"

#include <stdexcept>

namespace rsl {

SpectralField potential_vorticity(const StateU& u, const PhysicalParams& p) {
    if (u.comps != 4) throw std::invalid_argument("potential_vorticity: 4-component state expected");
    SpectralField out(u.grid, 1);
    const TorusGrid& g = u.grid;
    const double F = p.froude;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                const Vec3 xi = g.freq(i1, i2, i3);
                out.at(m, 0) = cplx(0.0, 1.0) *
                               (xi[0] * u.at(m, 1) - xi[1] * u.at(m, 0) - F * xi[2] * u.at(m, 3));
            }
    return out;
}

SpectralField deltaF_inverse(const SpectralField& f, const PhysicalParams& p) {
    SpectralField out(f.grid, f.comps);
    const TorusGrid& g = f.grid;
    const double F = p.froude;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) continue;
                const Vec3 xi = g.freq(i1, i2, i3);
                const double d = -normF2(xi, F);
                for (int c = 0; c < f.comps; ++c) out.at(m, c) = f.at(m, c) / d;
            }
    return out;
}

StateU q_reconstruct(const SpectralField& omega, const PhysicalParams& p) {
    if (omega.comps != 1) throw std::invalid_argument("q_reconstruct: scalar field expected");
    StateU out = make_state(omega.grid);
    const TorusGrid& g = omega.grid;
    const double F = p.froude;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) continue;
                const Vec3 xi = g.freq(i1, i2, i3);
                const cplx psi = omega.at(m, 0) / (-normF2(xi, F)); // Delta_F^{-1} omega
                const cplx i_unit(0.0, 1.0);
                out.at(m, 0) = -i_unit * xi[1] * psi;
                out.at(m, 1) = i_unit * xi[0] * psi;
                out.at(m, 2) = 0.0;
                out.at(m, 3) = -i_unit * F * xi[2] * psi;
            }
    return out;
}

StateU q_project(const StateU& u, const PhysicalParams& p) {
    return q_reconstruct(potential_vorticity(u, p), p);
}

StateU p_project(const StateU& u, const PhysicalParams& p) {
    return u - q_project(u, p);
}

std::function<cplx(const Vec3&)> gamma_symbol(const PhysicalParams& p) {
    const double F = p.froude, nu = p.nu, nup = p.nu_prime;
    return [F, nu, nup](const Vec3& xi) {
        const double num = nu * xi[0] * xi[0] + nu * xi[1] * xi[1] + nup * F * F * xi[2] * xi[2];
        return cplx(-norm2(xi) * num / normF2(xi, F));
    };
}

} // namespace rsl
