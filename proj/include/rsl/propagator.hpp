#pragma once

#include <span>
#include <vector>

#include "rsl/mode_matrix.hpp"
#include "rsl/spectral_field.hpp"

namespace rsl {

// Exact linear flow of d/dt f = B(xi) f per mode, with optional Duhamel
// forcing. The 1/eps oscillation sits inside complex exponentials, never in a
// time step, so cost is independent of eps. Eigenvectors are cached once per
// (grid, params) and read concurrently afterwards.
class Propagator {
public:
    Propagator(const TorusGrid& grid, const PhysicalParams& params);

    const TorusGrid& grid() const { return grid_; }
    const PhysicalParams& params() const { return params_; }

    // f(t) = e^{tB} f0
    StateU flow(const StateU& f0, double t) const;

    // f(t) with external forcing given on the uniform grid t_k = k * dt,
    // k = 0..nsamples-1, treated piecewise-linear in time; the integral
    // against e^{lambda (t-s)} is exact per sub-interval. t must sit on the
    // sample grid, which must cover [0, t].
    StateU flow_with_forcing(const StateU& f0, std::span<const StateU> forcing, double dt,
                             double t) const;

    // Reusable e^{tB} application for a fixed t (integrating-factor steppers).
    struct ExpOp {
        const Propagator* owner;
        std::vector<cplx> factors; // per mode: e^{mu t}, e^{lambda t}, e^{lambda_bar t}
        void apply(StateU& f) const;
    };
    ExpOp make_exp(double t) const;

    // One exact Duhamel interval: f <- e^{dt B} f + integral of
    // e^{(dt-s)B} (linear interpolation of g0, g1) ds.
    void duhamel_interval(StateU& f, const StateU& g0, const StateU& g1, double dt) const;

private:
    struct ModeEig {
        cplx m[4];
        cplx p[4]; // q = conj(p)
        double decay;  // -nu |xi|^2
        double omega;  // |xi|_F / (eps F |xi|)
    };

    TorusGrid grid_;
    PhysicalParams params_;
    std::vector<ModeEig> modes_;

    template <typename Update>
    void per_mode(StateU& f, Update&& u) const;
};

// One-shot convenience wrapper.
StateU propagate(const StateU& f0, double t, const PhysicalParams& params);
StateU propagate(const StateU& f0, std::span<const StateU> forcing, double dt, double t,
                 const PhysicalParams& params);

} // namespace rsl
