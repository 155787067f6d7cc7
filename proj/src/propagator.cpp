#include "rsl/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace rsl {

namespace {

// phi1(z) = (e^z - 1)/z and beta(z) = integral_0^1 u e^{zu} du, with series
// fallback near z = 0.
cplx phi1(cplx z) {
    if (std::abs(z) < 1e-3) {
        cplx s(1.0), term(1.0);
        for (int k = 1; k <= 8; ++k) {
            term *= z / static_cast<double>(k + 1);
            s += term;
        }
        return s;
    }
    return (std::exp(z) - 1.0) / z;
}

cplx beta_fn(cplx z) {
    if (std::abs(z) < 1e-3) {
        // sum_k z^k / (k! (k+2))
        cplx s(0.5), zk(1.0);
        double fact = 1.0;
        for (int k = 1; k <= 8; ++k) {
            zk *= z;
            fact *= k;
            s += zk / (fact * (k + 2));
        }
        return s;
    }
    const cplx ez = std::exp(z);
    return (z * ez - ez + 1.0) / (z * z);
}

inline cplx dot_conj(const cplx* v, const cplx* f) {
    return std::conj(v[0]) * f[0] + std::conj(v[1]) * f[1] + std::conj(v[2]) * f[2] +
           std::conj(v[3]) * f[3];
}

// projection of f onto the conjugate eigenvector q = conj(p): q^H f = p^T f
inline cplx dot_plain(const cplx* v, const cplx* f) {
    return v[0] * f[0] + v[1] * f[1] + v[2] * f[2] + v[3] * f[3];
}

} // namespace

Propagator::Propagator(const TorusGrid& grid, const PhysicalParams& params)
    : grid_(grid), params_(params) {
    params_.validate();
    params_.require_equal_viscosities();
    modes_.resize(grid_.size());
    for (int i1 = 0; i1 < grid_.n; ++i1)
        for (int i2 = 0; i2 < grid_.n; ++i2)
            for (int i3 = 0; i3 < grid_.n; ++i3) {
                const long m = grid_.index(i1, i2, i3);
                if (m == 0) continue; // zero mode is inert
                const EigenSystem es = eigensystem(grid_.freq(i1, i2, i3), params_);
                ModeEig& me = modes_[m];
                for (int c = 0; c < 4; ++c) {
                    me.m[c] = es.m(c);
                    me.p[c] = es.p(c);
                }
                me.decay = es.mu.real();
                me.omega = es.lambda.imag();
            }
}

template <typename Update>
void Propagator::per_mode(StateU& f, Update&& u) const {
    if (!(f.grid == grid_) || f.comps != 4)
        throw std::invalid_argument("propagator: field/grid mismatch");
    const long n = grid_.size();
    for (long m = 1; m < n; ++m) u(modes_[m], &f.at(m, 0), m);
}

Propagator::ExpOp Propagator::make_exp(double t) const {
    ExpOp op{this, std::vector<cplx>(3 * grid_.size(), cplx(0.0))};
    for (long m = 1; m < grid_.size(); ++m) {
        const ModeEig& me = modes_[m];
        const double d = std::exp(me.decay * t);
        op.factors[3 * m + 0] = d;
        op.factors[3 * m + 1] = d * std::exp(cplx(0.0, me.omega * t));
        op.factors[3 * m + 2] = d * std::exp(cplx(0.0, -me.omega * t));
    }
    return op;
}

void Propagator::ExpOp::apply(StateU& f) const {
    owner->per_mode(f, [this](const auto& me, cplx* v, long m) {
        const cplx cm = dot_conj(me.m, v);
        const cplx cp = dot_conj(me.p, v);
        const cplx cq = dot_plain(me.p, v);
        const cplx em = factors[3 * m + 0] * cm;
        const cplx ep = factors[3 * m + 1] * cp;
        const cplx eq = factors[3 * m + 2] * cq;
        for (int c = 0; c < 4; ++c)
            v[c] = em * me.m[c] + ep * me.p[c] + eq * std::conj(me.p[c]);
    });
}

StateU Propagator::flow(const StateU& f0, double t) const {
    StateU f = f0;
    ExpOp op = make_exp(t);
    op.apply(f);
    return f;
}

void Propagator::duhamel_interval(StateU& f, const StateU& g0, const StateU& g1, double dt) const {
    per_mode(f, [&](const ModeEig& me, cplx* v, long m) {
        const cplx* a = &g0.at(m, 0);
        const cplx* b = &g1.at(m, 0);
        const cplx lam(me.decay, me.omega);
        const cplx lamb(me.decay, -me.omega);
        const cplx zmu(me.decay * dt, 0.0);
        const cplx zl = lam * dt, zlb = lamb * dt;

        struct Dir {
            cplx e, w0, w1; // e^{z}, weights of the endpoint forcings
        };
        auto weights = [dt](cplx z) -> Dir {
            const cplx b_ = beta_fn(z);
            const cplx p_ = phi1(z);
            return {std::exp(z), dt * b_, dt * (p_ - b_)};
        };
        const Dir dm = weights(zmu), dp = weights(zl), dq = weights(zlb);

        const cplx cm = dm.e * dot_conj(me.m, v) + dm.w0 * dot_conj(me.m, a) + dm.w1 * dot_conj(me.m, b);
        const cplx cp = dp.e * dot_conj(me.p, v) + dp.w0 * dot_conj(me.p, a) + dp.w1 * dot_conj(me.p, b);
        const cplx cq = dq.e * dot_plain(me.p, v) + dq.w0 * dot_plain(me.p, a) + dq.w1 * dot_plain(me.p, b);
        for (int c = 0; c < 4; ++c)
            v[c] = cm * me.m[c] + cp * me.p[c] + cq * std::conj(me.p[c]);
    });
}

StateU Propagator::flow_with_forcing(const StateU& f0, std::span<const StateU> forcing, double dt,
                                     double t) const {
    if (forcing.empty()) return flow(f0, t);
    const double steps_real = t / dt;
    const long steps = std::lround(steps_real);
    if (std::abs(steps_real - steps) > 1e-9)
        throw std::invalid_argument("flow_with_forcing: t must sit on the forcing grid");
    if (steps + 1 > static_cast<long>(forcing.size()))
        throw std::invalid_argument("flow_with_forcing: forcing samples do not cover [0, t]");
    StateU f = f0;
    for (long k = 0; k < steps; ++k) duhamel_interval(f, forcing[k], forcing[k + 1], dt);
    return f;
}

StateU propagate(const StateU& f0, double t, const PhysicalParams& params) {
    return Propagator(f0.grid, params).flow(f0, t);
}

StateU propagate(const StateU& f0, std::span<const StateU> forcing, double dt, double t,
                 const PhysicalParams& params) {
    return Propagator(f0.grid, params).flow_with_forcing(f0, forcing, dt, t);
}

} // namespace rsl
