#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>

#include "rsl/kernel.hpp" // NumericalError
#include "rsl/propagator.hpp"
#include "rsl/qg.hpp"

namespace rsl {

struct SolverConfig {
    double dt = 2e-3;
    double t_end = 2.0;
    double dealias = 2.0 / 3.0;
    enum class Integrator { if_rk2, if_rk4 };
    Integrator integrator = Integrator::if_rk4;
    int sample_every = 1; // store every k-th step in trajectories
    // abort ceiling for the running integral of ||grad U||^2_{H^{1/2}}
    double blowup_ceiling = 1e6;

    void validate() const;
    long steps() const { return std::lround(t_end / dt); }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateU> states;
    std::vector<double> h12_sq;       // ||u||^2_{H^{1/2}} per sample
    std::vector<double> h32_sq;       // ||u||^2_{H^{3/2}} per sample (dissipation)
    double sample_dt = 0.0;

    size_t size() const { return states.size(); }
    void push(double t, StateU s);
};

// Running integral of ||grad U||^2_{H^{1/2}} = ||U||^2_{H^{3/2}} (trapezoid),
// one value per sample.
std::vector<double> blowup_monitor(const Trajectory& traj);

// Integrating-factor stepping of the projected system
//   d/dt U = nu Lap U - (1/eps) P A U - P(U . grad U):
// the linear flow is the exact per-mode exponential from the propagator, only
// the nonlinearity is staged, so the step cost does not depend on eps.
class PEStepper {
public:
    PEStepper(const TorusGrid& grid, const PhysicalParams& params, const SolverConfig& cfg);
    void step(StateU& u) const;
    void step_linear(StateU& u) const; // nonlinearity off (consistency tests)
    const Propagator& propagator() const { return prop_; }
    const SolverConfig& config() const { return cfg_; }

private:
    PhysicalParams params_;
    SolverConfig cfg_;
    Propagator prop_;
    Propagator::ExpOp exp_full_, exp_half_;
};

// Scalar-vorticity form of the limit system: transport by the reconstructed
// velocity plus the Gamma diffusion (exact integrating factor).
class QGStepper {
public:
    QGStepper(const TorusGrid& grid, const PhysicalParams& params, const SolverConfig& cfg);
    void step(SpectralField& omega) const;
    StateU reconstruct(const SpectralField& omega) const;
    const PhysicalParams& params() const { return params_; }

private:
    PhysicalParams params_;
    SolverConfig cfg_;
    std::vector<double> exp_full_, exp_half_; // e^{Gamma dt}, e^{Gamma dt/2}
    SpectralField rhs(const SpectralField& omega) const;
};

// G^b = P P_osc (U_qg . grad U_qg): divergence-free and vorticity-free.
StateU compute_gb(const StateU& uqg, const PhysicalParams& params,
                  double dealias_fraction = 2.0 / 3.0);

// Oscillation system d/dt W = B W - G^b advanced by the exact Duhamel formula
// on each step (forcing endpoints linearly interpolated).
class WEStepper {
public:
    WEStepper(const TorusGrid& grid, const PhysicalParams& params, const SolverConfig& cfg);
    void step(StateU& w, const StateU& gb_left, const StateU& gb_right) const;

private:
    SolverConfig cfg_;
    Propagator prop_;
};

// Trajectory-level runners. All of them abort with NumericalError on NaN or
// when the blow-up monitor exceeds its ceiling.
Trajectory solve_pe(const StateU& u0, const PhysicalParams& params, const SolverConfig& cfg);
Trajectory solve_qg(const SpectralField& omega0, const PhysicalParams& params,
                    const SolverConfig& cfg);
// velocity formulation of the limit system (cross-check oracle)
Trajectory solve_qg_velocity(const StateU& uqg0, const PhysicalParams& params,
                             const SolverConfig& cfg);
Trajectory solve_we(const StateU& osc0, std::span<const StateU> gb_samples,
                    const PhysicalParams& params, const SolverConfig& cfg);

// delta = U - U_qg - W, samplewise on a shared grid.
Trajectory compute_delta(const Trajectory& pe, const Trajectory& qg, const Trajectory& we);

// The eight forcings of the error system, in order:
//   -P(d.grad d), -P(d.grad Uqg), -P(Uqg.grad d), -P(d.grad W),
//   -P(W.grad d), -P(Uqg.grad W), -P(W.grad Uqg), -P(W.grad W).
std::array<StateU, 8> assemble_forcings(const StateU& delta, const StateU& uqg, const StateU& we,
                                        double dealias_fraction = 2.0 / 3.0);

// Max over interior samples of the L2 norm of
//   (d_{k+1}-d_{k-1})/(2 dt) - B d_k - sum_i F_i(k),
// the centered-difference residual of the error system. O(dt^2) when the
// trajectories are sampled every step.
double residual_check(const Trajectory& delta, const Trajectory& qg, const Trajectory& we,
                      const PhysicalParams& params, double dealias_fraction = 2.0 / 3.0);

// Same residual at one interior sample (for convergence scans at a fixed time).
double residual_at_sample(const Trajectory& delta, const Trajectory& qg, const Trajectory& we,
                          const PhysicalParams& params, size_t k,
                          double dealias_fraction = 2.0 / 3.0);

} // namespace rsl
