#include "rsl/nonlinear.hpp"

#include "rsl/leray.hpp"
#include "rsl/multiplier.hpp"
#include "rsl/transform.hpp"

namespace rsl {

StateU nonlinear_term(const StateU& u, const StateU& w, double dealias_fraction) {
    if (!(u.grid == w.grid) || u.comps != 4 || w.comps != 4)
        throw std::invalid_argument("nonlinear_term: expects matching 4-component states");
    const PhysicalField up = backward(dealias(u, dealias_fraction));
    const SpectralField wd = dealias(w, dealias_fraction);

    PhysicalField acc(u.grid, 4);
    for (int axis = 0; axis < 3; ++axis) {
        const PhysicalField gp = backward(derivative(wd, axis));
        for (long i = 0; i < acc.points(); ++i) {
            const cplx vi = up.at(i, axis);
            for (int c = 0; c < 4; ++c) acc.at(i, c) += vi * gp.at(i, c);
        }
    }
    StateU out = leray_project(dealias(forward(acc), dealias_fraction));
    out.zero_mean();
    out *= -1.0;
    return out;
}

SpectralField scalar_advection(const StateU& u, const SpectralField& f, double dealias_fraction) {
    if (f.comps != 1) throw std::invalid_argument("scalar_advection: scalar field expected");
    const PhysicalField up = backward(dealias(u, dealias_fraction));
    const SpectralField fd = dealias(f, dealias_fraction);
    PhysicalField acc(f.grid, 1);
    for (int axis = 0; axis < 3; ++axis) {
        const PhysicalField gp = backward(derivative(fd, axis));
        for (long i = 0; i < acc.points(); ++i) acc.at(i, 0) += up.at(i, axis) * gp.at(i, 0);
    }
    SpectralField out = dealias(forward(acc), dealias_fraction);
    out.zero_mean();
    out *= -1.0;
    return out;
}

} // namespace rsl
