#pragma once

#include "rsl/spectral_field.hpp"

namespace rsl {

// -P(u . grad w) = -P(sum_i u_i d_i w), pseudo-spectral: collocation products
// of the advecting velocity with the four gradients, inputs and output
// truncated by the 2/3-rule (fraction configurable), then Leray-projected.
// Mean mode stays zero for divergence-free u.
StateU nonlinear_term(const StateU& u, const StateU& w, double dealias_fraction = 2.0 / 3.0);

// Advection of a scalar by the velocity part of u: -dealias(v . grad f).
SpectralField scalar_advection(const StateU& u, const SpectralField& f,
                               double dealias_fraction = 2.0 / 3.0);

} // namespace rsl
