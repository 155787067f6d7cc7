#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rsl/leray.hpp"
#include "rsl/multiplier.hpp"
#include "rsl/nonlinear.hpp"
#include "rsl/pe_solver.hpp"
#include "rsl/random_fields.hpp"

using namespace rsl;

namespace {
PhysicalParams params_F2() { return {0.1, 2.0, 1.0, 1.0}; }

StateU qg_state(const TorusGrid& g, const PhysicalParams& p, std::uint64_t seed, double amp) {
    SpectralField om = shaped_random_field(g, 1, seed, 1.0, 0.5 * g.dk() * (g.n / 2));
    om.zero_mean();
    StateU u = q_reconstruct(om, p);
    const double n = norm_hs_inhom(u, 0.7);
    u *= amp / n;
    return u;
}
} // namespace

TEST_CASE("advection of a constant field vanishes") {
    TorusGrid g{16, 2.0 * M_PI};
    StateU u = random_state(g, 60);
    StateU w = make_state(g);
    for (int c = 0; c < 4; ++c) w.at(long(0), c) = 2.0 + c;
    CHECK(max_abs_coeff(nonlinear_term(u, w)) < 1e-14);
}

TEST_CASE("transport term is skew against its own argument") {
    TorusGrid g{16, 2.0 * M_PI};
    StateU u = random_state(g, 61);
    StateU w = random_state(g, 62);
    const cplx ip = inner_l2(nonlinear_term(u, w), w);
    CHECK(std::abs(ip) < 1e-10 * norm_l2(u) * norm_l2(w) * norm_l2(w));
}

TEST_CASE("pseudo-spectral product matches the direct convolution at n = 16") {
    TorusGrid g{16, 2.0 * M_PI};
    StateU u = random_state(g, 63);
    StateU w = random_state(g, 64);
    StateU fast = nonlinear_term(u, w);

    // direct convolution: (u . grad w)_k = sum_{p+q=k} u_p . (i q) w_q over the
    // dealiased band, then the same projection/truncation
    const int kmax = g.n / 3;
    auto wrapi = [&](int a) { return (a % g.n + g.n) % g.n; };
    StateU conv = make_state(g);
    for (int a1 = -kmax; a1 <= kmax; ++a1)
        for (int a2 = -kmax; a2 <= kmax; ++a2)
            for (int a3 = -kmax; a3 <= kmax; ++a3) {
                const long mp = g.index(wrapi(a1), wrapi(a2), wrapi(a3));
                for (int b1 = -kmax; b1 <= kmax; ++b1)
                    for (int b2 = -kmax; b2 <= kmax; ++b2)
                        for (int b3 = -kmax; b3 <= kmax; ++b3) {
                            const int k1 = a1 + b1, k2 = a2 + b2, k3 = a3 + b3;
                            if (std::abs(k1) > kmax || std::abs(k2) > kmax || std::abs(k3) > kmax)
                                continue;
                            const long mq = g.index(wrapi(b1), wrapi(b2), wrapi(b3));
                            const long mk = g.index(wrapi(k1), wrapi(k2), wrapi(k3));
                            const Vec3 q = g.freq(wrapi(b1), wrapi(b2), wrapi(b3));
                            for (int c = 0; c < 4; ++c) {
                                cplx s(0.0);
                                for (int ax = 0; ax < 3; ++ax)
                                    s += u.at(mp, ax) * cplx(0.0, q[ax]) * w.at(mq, c);
                                conv.at(mk, c) += s;
                            }
                        }
            }
    // collocation products carry the 1/n^{3/2} of the unitary convention
    conv *= 1.0 / std::pow(static_cast<double>(g.n), 1.5);
    conv = leray_project(conv);
    conv.zero_mean();
    conv *= -1.0;
    CHECK(max_coeff_diff(fast, conv) < 1e-10 * std::max(1.0, max_abs_coeff(conv)));
}

TEST_CASE("linearized stepping reproduces the exact propagator") {
    TorusGrid g{8, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    SolverConfig cfg;
    cfg.dt = 1e-2;
    PEStepper stepper(g, p, cfg);
    StateU u = random_state(g, 65);
    StateU v = u;
    for (int k = 0; k < 25; ++k) stepper.step_linear(v);
    StateU want = Propagator(g, p).flow(u, 0.25);
    CHECK(max_coeff_diff(v, want) < 1e-11 * max_abs_coeff(want));
}

TEST_CASE("integrating-factor stepping converges at integrator order") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    p.epsilon = 0.05;
    StateU u0 = qg_state(g, p, 66, 0.8) + 0.3 * p_project(random_state(g, 67), p);

    auto run = [&](double dt, SolverConfig::Integrator integ, double T) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.integrator = integ;
        PEStepper st(g, p, cfg);
        StateU u = u0;
        const long n = std::lround(T / dt);
        for (long k = 0; k < n; ++k) st.step(u);
        return u;
    };
    const double T = 0.1;
    StateU ref = run(T / 512, SolverConfig::Integrator::if_rk4, T);

    // rk4: error ratio across dt halving ~ 2^4
    const double e1 = norm_l2(run(T / 16, SolverConfig::Integrator::if_rk4, T) - ref);
    const double e2 = norm_l2(run(T / 32, SolverConfig::Integrator::if_rk4, T) - ref);
    const double order4 = std::log2(e1 / e2);
    CHECK(order4 > 3.5);

    const double f1 = norm_l2(run(T / 16, SolverConfig::Integrator::if_rk2, T) - ref);
    const double f2 = norm_l2(run(T / 32, SolverConfig::Integrator::if_rk2, T) - ref);
    const double order2 = std::log2(f1 / f2);
    CHECK(order2 > 1.7);
    CHECK(order2 < 2.6);
}

TEST_CASE("energy is nonincreasing along the full nonlinear flow") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    p.epsilon = 0.05;
    SolverConfig cfg;
    cfg.dt = 2e-3;
    PEStepper st(g, p, cfg);
    StateU u = qg_state(g, p, 68, 1.0) + 0.5 * p_project(random_state(g, 69), p);
    double prev = norm_l2(u);
    for (int k = 0; k < 200; ++k) {
        st.step(u);
        const double now = norm_l2(u);
        CHECK(now <= prev + 1e-8 * cfg.dt * std::max(1.0, prev));
        prev = now;
    }
}

TEST_CASE("vorticity solver: zero data, single-mode decay") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_end = 0.5;
    cfg.sample_every = 10;

    SpectralField zero(g, 1);
    Trajectory z = solve_qg(zero, p, cfg);
    for (const auto& s : z.states) CHECK(max_abs_coeff(s) == 0.0);

    // a single vorticity mode is exactly steady apart from the Gamma decay
    SpectralField om(g, 1);
    om.at(2, 15, 1, 0) = cplx(0.4, -0.2);
    om.at(14, 1, 15, 0) = std::conj(om.at(2, 15, 1, 0));
    QGStepper st(g, p, cfg);
    SpectralField evolved = om;
    for (int k = 0; k < 50; ++k) st.step(evolved);
    const double k2 = norm2(g.freq(2, 15, 1));
    const cplx want = om.at(2, 15, 1, 0) * std::exp(-p.nu * k2 * 0.5);
    CHECK(std::abs(evolved.at(2, 15, 1, 0) - want) < 1e-8 * std::abs(want));
}

TEST_CASE("quasi-geostrophic structure is preserved along the vorticity solver") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.25;
    cfg.sample_every = 10;
    SpectralField om = shaped_random_field(g, 1, 70, 1.0, 4.0);
    om.zero_mean();
    Trajectory traj = solve_qg(om, p, cfg);
    for (const auto& s : traj.states) {
        CHECK(max_coeff_diff(q_project(s, p), s) < 1e-10 * std::max(1.0, max_abs_coeff(s)));
        CHECK(max_divergence(s) < 1e-10 * std::max(1.0, max_abs_coeff(s)));
    }
}

TEST_CASE("vorticity and velocity formulations agree") {
    TorusGrid g{32, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    cfg.sample_every = 100;
    SpectralField om = shaped_random_field(g, 1, 71, 1.2, 5.0);
    om.zero_mean();
    StateU u0 = q_reconstruct(om, p);
    const double scale = 0.8 / norm_hs_inhom(u0, 0.7);
    om *= scale;
    u0 *= scale;

    Trajectory a = solve_qg(om, p, cfg);
    Trajectory b = solve_qg_velocity(u0, p, cfg);
    REQUIRE(a.size() == b.size());
    const double ref = norm_l2(a.states.back());
    CHECK(norm_l2(a.states.back() - b.states.back()) < 1e-6 * std::max(ref, 1.0));
}

TEST_CASE("forcing term of the oscillation system is divergence- and vorticity-free") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    CHECK(max_abs_coeff(compute_gb(make_state(g), p)) == 0.0);
    for (std::uint64_t seed : {72, 73, 74}) {
        StateU uqg = qg_state(g, p, seed, 1.0);
        StateU gb = compute_gb(uqg, p);
        const double scale = std::max(1e-30, max_abs_coeff(gb));
        CHECK(max_divergence(gb) < 1e-10 * scale);
        CHECK(max_abs_coeff(potential_vorticity(gb, p)) < 1e-10 * scale);
    }
}

TEST_CASE("oscillation system: identity at t = 0 and vorticity-free samples") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    p.epsilon = 0.05;
    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.25;
    cfg.sample_every = 10;

    StateU osc0 = p_project(random_state(g, 75), p);
    SolverConfig zerocfg = cfg;
    zerocfg.t_end = 0.0;
    std::vector<StateU> nogb(1, make_state(g));
    Trajectory z = solve_we(osc0, nogb, p, zerocfg);
    CHECK(max_coeff_diff(z.states[0], osc0) == 0.0);

    // forced run: vorticity stays zero at every sample
    SpectralField om = shaped_random_field(g, 1, 76, 1.0, 4.0);
    om.zero_mean();
    Trajectory qg = solve_qg(om, p, SolverConfig{cfg.dt, cfg.t_end, cfg.dealias,
                                                 SolverConfig::Integrator::if_rk4, 1,
                                                 cfg.blowup_ceiling});
    std::vector<StateU> gb;
    gb.reserve(qg.size());
    for (const auto& s : qg.states) gb.push_back(compute_gb(s, p));
    Trajectory w = solve_we(osc0, gb, p, cfg);
    for (const auto& s : w.states)
        CHECK(max_abs_coeff(potential_vorticity(s, p)) < 1e-10 * std::max(1.0, max_abs_coeff(s)));

    std::vector<StateU> short_gb(3, make_state(g));
    CHECK_THROWS_AS((void)solve_we(osc0, short_gb, p, cfg), std::invalid_argument);
}

TEST_CASE("error trajectory: consistent data and forcing structure") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    p.epsilon = 0.1;
    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.05;
    cfg.sample_every = 1;

    SpectralField om = shaped_random_field(g, 1, 77, 1.0, 4.0);
    om.zero_mean();
    om *= 0.5 / norm_hs(q_reconstruct(om, p), 0.5);
    StateU uqg0 = q_reconstruct(om, p);
    StateU osc0 = p_project(random_state(g, 78), p);
    osc0 *= 0.5 / norm_hs(osc0, 0.5);

    Trajectory qg = solve_qg(om, p, cfg);
    std::vector<StateU> gb;
    for (const auto& s : qg.states) gb.push_back(compute_gb(s, p));
    Trajectory we = solve_we(osc0, gb, p, cfg);
    Trajectory pe = solve_pe(uqg0 + osc0, p, cfg);
    Trajectory delta = compute_delta(pe, qg, we);

    CHECK(norm_l2(delta.states[0]) < 1e-12);

    // decomposition identity: pe = qg + we + delta pointwise, to roundoff
    for (size_t k = 0; k < pe.size(); ++k) {
        StateU re = qg.states[k] + we.states[k] + delta.states[k];
        CHECK(max_coeff_diff(re, pe.states[k]) < 1e-13 * std::max(1.0, max_abs_coeff(pe.states[k])));
    }

    // with W = 0 the last five forcings vanish identically
    StateU zero = make_state(g);
    auto f = assemble_forcings(delta.states.back(), qg.states.back(), zero);
    for (int i = 3; i < 8; ++i) CHECK(max_abs_coeff(f[i]) == 0.0);
    CHECK(max_abs_coeff(f[1]) > 0.0);
}

TEST_CASE("centered residual of the error system shrinks at second order") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();
    p.epsilon = 0.1;

    SpectralField om = shaped_random_field(g, 1, 79, 1.0, 4.0);
    om.zero_mean();
    om *= 0.6 / norm_hs(q_reconstruct(om, p), 0.5);
    StateU osc0 = p_project(random_state(g, 80), p);
    osc0 *= 0.6 / norm_hs(osc0, 0.5);

    auto residual_at = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.08;
        cfg.sample_every = 1;
        Trajectory qg = solve_qg(om, p, cfg);
        std::vector<StateU> gb;
        for (const auto& s : qg.states) gb.push_back(compute_gb(s, p));
        Trajectory we = solve_we(osc0, gb, p, cfg);
        Trajectory pe = solve_pe(qg.states[0] + osc0, p, cfg);
        Trajectory delta = compute_delta(pe, qg, we);
        return residual_check(delta, qg, we, p);
    };
    const double r1 = residual_at(4e-3);
    const double r2 = residual_at(2e-3);
    const double r3 = residual_at(1e-3);
    const double order12 = std::log2(r1 / r2);
    const double order23 = std::log2(r2 / r3);
    CHECK(order12 > 1.8);
    CHECK(order23 > 1.8);
}

TEST_CASE("blow-up monitor: closed forms and the abort path") {
    TorusGrid g{16, 2.0 * M_PI};
    PhysicalParams p = params_F2();

    // zero solution
    Trajectory z;
    z.push(0.0, make_state(g));
    z.push(1.0, make_state(g));
    auto zm = blowup_monitor(z);
    CHECK(zm.back() == 0.0);

    // heat flow: the running integral converges to a finite limit
    StateU u0 = random_state(g, 81);
    Trajectory heat;
    for (int k = 0; k <= 400; ++k) heat.push(0.01 * k, heat_flow(u0, p.nu, 0.01 * k));
    auto hm = blowup_monitor(heat);
    const double half = hm[hm.size() / 2];
    CHECK(hm.back() < half * 1.2);
    CHECK(hm.back() > 0.0);

    // dt far beyond the advective limit: the monitor aborts before NaN
    SolverConfig bad;
    bad.dt = 0.5;
    bad.t_end = 40.0;
    bad.blowup_ceiling = 1e4;
    StateU big = 40.0 * random_state(g, 82);
    CHECK_THROWS_AS((void)solve_pe(big, p, bad), NumericalError);
}
