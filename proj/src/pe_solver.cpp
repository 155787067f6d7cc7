#include "rsl/pe_solver.hpp"

#include <cmath>

#include "rsl/leray.hpp"
#include "rsl/mode_matrix.hpp"
#include "rsl/multiplier.hpp"
#include "rsl/nonlinear.hpp"

namespace rsl {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("solver dt must be positive");
    if (!(dealias > 0.5 && dealias < 1.0))
        throw std::invalid_argument("dealias fraction must lie in (1/2, 1)");
    if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
}

void Trajectory::push(double t, StateU s) {
    times.push_back(t);
    h12_sq.push_back(std::pow(norm_hs(s, 0.5), 2));
    h32_sq.push_back(std::pow(norm_hs(s, 1.5), 2));
    states.push_back(std::move(s));
}

std::vector<double> blowup_monitor(const Trajectory& traj) {
    std::vector<double> running(traj.size(), 0.0);
    for (size_t k = 1; k < traj.size(); ++k) {
        const double dt = traj.times[k] - traj.times[k - 1];
        running[k] = running[k - 1] + 0.5 * dt * (traj.h32_sq[k] + traj.h32_sq[k - 1]);
    }
    return running;
}

namespace {

void check_finite(const SpectralField& u, const char* where) {
    for (const cplx& c : u.a)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NumericalError(std::string(where) + ": non-finite state (dt too large?)");
}

// shared monitor bookkeeping for the trajectory runners
struct RunMonitor {
    double ceiling;
    double integral = 0.0;
    double prev = -1.0;

    void accumulate(double dt, double h32) {
        if (prev >= 0.0) integral += 0.5 * dt * (prev + h32);
        prev = h32;
        if (integral > ceiling)
            throw NumericalError("blow-up monitor exceeded ceiling " + std::to_string(ceiling));
    }
};

} // namespace

PEStepper::PEStepper(const TorusGrid& grid, const PhysicalParams& params, const SolverConfig& cfg)
    : params_(params), cfg_(cfg), prop_(grid, params),
      exp_full_(prop_.make_exp(cfg.dt)), exp_half_(prop_.make_exp(0.5 * cfg.dt)) {
    cfg_.validate();
}

void PEStepper::step_linear(StateU& u) const { exp_full_.apply(u); }

void PEStepper::step(StateU& u) const {
    const double dt = cfg_.dt;
    auto N = [&](const StateU& v) { return nonlinear_term(v, v, cfg_.dealias); };

    if (cfg_.integrator == SolverConfig::Integrator::if_rk2) {
        // Lawson-Heun
        StateU k1 = N(u);
        StateU mid = u + dt * k1;
        exp_full_.apply(mid);
        StateU k2 = N(mid);
        exp_full_.apply(u);
        exp_full_.apply(k1);
        u += (0.5 * dt) * (k1 + k2);
    } else {
        // Lawson RK4
        StateU k1 = N(u);
        StateU s2 = u + (0.5 * dt) * k1;
        exp_half_.apply(s2);
        StateU k2 = N(s2);
        StateU uh = u;
        exp_half_.apply(uh); // e^{dt/2 B} u
        StateU s3 = uh + (0.5 * dt) * k2;
        StateU k3 = N(s3);
        StateU s4 = uh;
        exp_half_.apply(s4); // e^{dt B} u
        StateU k3e = k3;
        exp_half_.apply(k3e);
        s4 += dt * k3e;
        StateU k4 = N(s4);

        exp_full_.apply(k1);
        StateU k23 = k2 + k3;
        exp_half_.apply(k23);
        exp_full_.apply(u);
        u += (dt / 6.0) * (k1 + 2.0 * k23 + k4);
    }
    check_finite(u, "pe step");
}

QGStepper::QGStepper(const TorusGrid& grid, const PhysicalParams& params, const SolverConfig& cfg)
    : params_(params), cfg_(cfg) {
    cfg_.validate();
    params_.validate();
    auto gamma = gamma_symbol(params_);
    exp_full_.resize(grid.size(), 1.0);
    exp_half_.resize(grid.size(), 1.0);
    for (int i1 = 0; i1 < grid.n; ++i1)
        for (int i2 = 0; i2 < grid.n; ++i2)
            for (int i3 = 0; i3 < grid.n; ++i3) {
                const long m = grid.index(i1, i2, i3);
                if (m == 0) continue;
                const double g = gamma(grid.freq(i1, i2, i3)).real();
                exp_full_[m] = std::exp(g * cfg_.dt);
                exp_half_[m] = std::exp(0.5 * g * cfg_.dt);
            }
}

StateU QGStepper::reconstruct(const SpectralField& omega) const {
    return q_reconstruct(omega, params_);
}

SpectralField QGStepper::rhs(const SpectralField& omega) const {
    return scalar_advection(reconstruct(omega), omega, cfg_.dealias);
}

void QGStepper::step(SpectralField& om) const {
    const double dt = cfg_.dt;
    auto apply = [&](SpectralField& f, const std::vector<double>& e) {
        for (long m = 0; m < f.modes(); ++m) f.at(m, 0) *= e[m];
    };
    if (cfg_.integrator == SolverConfig::Integrator::if_rk2) {
        SpectralField k1 = rhs(om);
        SpectralField mid = om + dt * k1;
        apply(mid, exp_full_);
        SpectralField k2 = rhs(mid);
        apply(om, exp_full_);
        apply(k1, exp_full_);
        om += (0.5 * dt) * (k1 + k2);
    } else {
        SpectralField k1 = rhs(om);
        SpectralField s2 = om + (0.5 * dt) * k1;
        apply(s2, exp_half_);
        SpectralField k2 = rhs(s2);
        SpectralField omh = om;
        apply(omh, exp_half_);
        SpectralField s3 = omh + (0.5 * dt) * k2;
        SpectralField k3 = rhs(s3);
        SpectralField s4 = omh;
        apply(s4, exp_half_);
        SpectralField k3e = k3;
        apply(k3e, exp_half_);
        s4 += dt * k3e;
        SpectralField k4 = rhs(s4);

        apply(k1, exp_full_);
        SpectralField k23 = k2 + k3;
        apply(k23, exp_half_);
        apply(om, exp_full_);
        om += (dt / 6.0) * (k1 + 2.0 * k23 + k4);
    }
    check_finite(om, "qg step");
}

StateU compute_gb(const StateU& uqg, const PhysicalParams& params, double dealias_fraction) {
    // P(U.grad U) = -nonlinear_term, then the oscillating projection
    StateU advect = nonlinear_term(uqg, uqg, dealias_fraction);
    advect *= -1.0;
    return p_project(advect, params);
}

WEStepper::WEStepper(const TorusGrid& grid, const PhysicalParams& params, const SolverConfig& cfg)
    : cfg_(cfg), prop_(grid, params) {
    cfg_.validate();
}

void WEStepper::step(StateU& w, const StateU& gb_left, const StateU& gb_right) const {
    StateU f0 = gb_left;
    f0 *= -1.0;
    StateU f1 = gb_right;
    f1 *= -1.0;
    prop_.duhamel_interval(w, f0, f1, cfg_.dt);
    check_finite(w, "we step");
}

Trajectory solve_pe(const StateU& u0, const PhysicalParams& params, const SolverConfig& cfg) {
    PEStepper stepper(u0.grid, params, cfg);
    Trajectory traj;
    traj.sample_dt = cfg.dt * cfg.sample_every;
    RunMonitor mon{cfg.blowup_ceiling};
    StateU u = u0;
    traj.push(0.0, u);
    mon.accumulate(0.0, traj.h32_sq.back());
    const long nsteps = cfg.steps();
    for (long k = 1; k <= nsteps; ++k) {
        stepper.step(u);
        if (k % cfg.sample_every == 0 || k == nsteps) {
            traj.push(k * cfg.dt, u);
            mon.accumulate(traj.times[traj.size() - 1] - traj.times[traj.size() - 2],
                           traj.h32_sq.back());
        }
    }
    return traj;
}

Trajectory solve_qg(const SpectralField& omega0, const PhysicalParams& params,
                    const SolverConfig& cfg) {
    if (std::abs(omega0.at(long(0), 0)) > 0.0)
        throw std::invalid_argument("solve_qg: vorticity must be mean-free");
    QGStepper stepper(omega0.grid, params, cfg);
    Trajectory traj;
    traj.sample_dt = cfg.dt * cfg.sample_every;
    RunMonitor mon{cfg.blowup_ceiling};
    SpectralField om = omega0;
    traj.push(0.0, stepper.reconstruct(om));
    mon.accumulate(0.0, traj.h32_sq.back());
    const long nsteps = cfg.steps();
    for (long k = 1; k <= nsteps; ++k) {
        stepper.step(om);
        if (k % cfg.sample_every == 0 || k == nsteps) {
            traj.push(k * cfg.dt, stepper.reconstruct(om));
            mon.accumulate(traj.times[traj.size() - 1] - traj.times[traj.size() - 2],
                           traj.h32_sq.back());
        }
    }
    return traj;
}

Trajectory solve_qg_velocity(const StateU& uqg0, const PhysicalParams& params,
                             const SolverConfig& cfg) {
    cfg.validate();
    params.validate();
    auto gamma = gamma_symbol(params);
    const TorusGrid& grid = uqg0.grid;
    std::vector<double> ef(grid.size(), 1.0), eh(grid.size(), 1.0);
    for (int i1 = 0; i1 < grid.n; ++i1)
        for (int i2 = 0; i2 < grid.n; ++i2)
            for (int i3 = 0; i3 < grid.n; ++i3) {
                const long m = grid.index(i1, i2, i3);
                if (m == 0) continue;
                const double g = gamma(grid.freq(i1, i2, i3)).real();
                ef[m] = std::exp(g * cfg.dt);
                eh[m] = std::exp(0.5 * g * cfg.dt);
            }
    auto apply = [&](StateU& f, const std::vector<double>& e) {
        for (long m = 0; m < f.modes(); ++m)
            for (int c = 0; c < 4; ++c) f.at(m, c) *= e[m];
    };
    auto rhs = [&](const StateU& u) {
        StateU n = nonlinear_term(u, u, cfg.dealias); // already -P(u.grad u)
        return q_project(n, params);
    };

    Trajectory traj;
    traj.sample_dt = cfg.dt * cfg.sample_every;
    StateU u = uqg0;
    traj.push(0.0, u);
    const long nsteps = cfg.steps();
    const double dt = cfg.dt;
    for (long k = 1; k <= nsteps; ++k) {
        StateU k1 = rhs(u);
        StateU s2 = u + (0.5 * dt) * k1;
        apply(s2, eh);
        StateU k2 = rhs(s2);
        StateU uh = u;
        apply(uh, eh);
        StateU s3 = uh + (0.5 * dt) * k2;
        StateU k3 = rhs(s3);
        StateU s4 = uh;
        apply(s4, eh);
        StateU k3e = k3;
        apply(k3e, eh);
        s4 += dt * k3e;
        StateU k4 = rhs(s4);
        apply(k1, ef);
        StateU k23 = k2 + k3;
        apply(k23, eh);
        apply(u, ef);
        u += (dt / 6.0) * (k1 + 2.0 * k23 + k4);
        check_finite(u, "qg velocity step");
        if (k % cfg.sample_every == 0 || k == nsteps) traj.push(k * cfg.dt, u);
    }
    return traj;
}

Trajectory solve_we(const StateU& osc0, std::span<const StateU> gb_samples,
                    const PhysicalParams& params, const SolverConfig& cfg) {
    const long nsteps = cfg.steps();
    if (static_cast<long>(gb_samples.size()) < nsteps + 1)
        throw std::invalid_argument("solve_we: forcing grid does not cover [0, t_end]");
    WEStepper stepper(osc0.grid, params, cfg);
    Trajectory traj;
    traj.sample_dt = cfg.dt * cfg.sample_every;
    StateU w = osc0;
    traj.push(0.0, w);
    for (long k = 1; k <= nsteps; ++k) {
        stepper.step(w, gb_samples[k - 1], gb_samples[k]);
        if (k % cfg.sample_every == 0 || k == nsteps) traj.push(k * cfg.dt, w);
    }
    return traj;
}

Trajectory compute_delta(const Trajectory& pe, const Trajectory& qg, const Trajectory& we) {
    if (pe.size() != qg.size() || pe.size() != we.size())
        throw std::invalid_argument("compute_delta: trajectories have different sample counts");
    Trajectory d;
    d.sample_dt = pe.sample_dt;
    for (size_t k = 0; k < pe.size(); ++k) {
        if (std::abs(pe.times[k] - qg.times[k]) > 1e-12 ||
            std::abs(pe.times[k] - we.times[k]) > 1e-12)
            throw std::invalid_argument("compute_delta: time grids differ");
        d.push(pe.times[k], pe.states[k] - qg.states[k] - we.states[k]);
    }
    return d;
}

std::array<StateU, 8> assemble_forcings(const StateU& delta, const StateU& uqg, const StateU& we,
                                        double dealias_fraction) {
    return {
        nonlinear_term(delta, delta, dealias_fraction), // F1
        nonlinear_term(delta, uqg, dealias_fraction),   // F2
        nonlinear_term(uqg, delta, dealias_fraction),   // F3
        nonlinear_term(delta, we, dealias_fraction),    // F4
        nonlinear_term(we, delta, dealias_fraction),    // F5
        nonlinear_term(uqg, we, dealias_fraction),      // F6
        nonlinear_term(we, uqg, dealias_fraction),      // F7
        nonlinear_term(we, we, dealias_fraction),       // F8
    };
}

double residual_at_sample(const Trajectory& delta, const Trajectory& qg, const Trajectory& we,
                          const PhysicalParams& params, size_t k, double dealias_fraction) {
    if (k == 0 || k + 1 >= delta.size())
        throw std::invalid_argument("residual_at_sample: interior sample required");
    const double h = delta.times[k + 1] - delta.times[k];
    StateU r = (1.0 / (2.0 * h)) * (delta.states[k + 1] - delta.states[k - 1]);
    // subtract B delta (the full linearized generator)
    StateU lin = apply_matrix_multiplier(
        delta.states[k],
        [&params](const Vec3& xi, const cplx* in, cplx* out) {
            const Matrix4cd B = assemble_B(xi, params);
            for (int i = 0; i < 4; ++i) {
                cplx s(0.0);
                for (int j = 0; j < 4; ++j) s += B(i, j) * in[j];
                out[i] = s;
            }
        });
    r -= lin;
    const auto forcings =
        assemble_forcings(delta.states[k], qg.states[k], we.states[k], dealias_fraction);
    for (const StateU& f : forcings) r -= f;
    return norm_l2(r);
}

double residual_check(const Trajectory& delta, const Trajectory& qg, const Trajectory& we,
                      const PhysicalParams& params, double dealias_fraction) {
    if (delta.size() < 3) throw std::invalid_argument("residual_check: need >= 3 samples");
    double worst = 0.0;
    for (size_t k = 1; k + 1 < delta.size(); ++k)
        worst = std::max(worst, residual_at_sample(delta, qg, we, params, k, dealias_fraction));
    return worst;
}

} // namespace rsl
