#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rsl/leray.hpp"
#include "rsl/multiplier.hpp"
#include "rsl/qg.hpp"
#include "rsl/random_fields.hpp"

using namespace rsl;

namespace {
TorusGrid grid16() { return {16, 2.0 * M_PI}; }
PhysicalParams params_F2() { return {0.1, 2.0, 1.0, 1.0}; }
}

TEST_CASE("potential vorticity of a pure theta mode") {
    TorusGrid g = grid16();
    PhysicalParams p = params_F2();
    StateU u = make_state(g);
    u.at(0, 0, 3, 3) = 1.0; // theta-hat = 1 at integer frequency (0,0,3)
    SpectralField om = potential_vorticity(u, p);
    const Vec3 xi0 = g.freq(0, 0, 3);
    CHECK(std::abs(om.at(0, 0, 3, 0) - cplx(0.0, -2.0 * xi0[2])) < 1e-14);
}

TEST_CASE("deltaF inverse: closed-form value and round trip") {
    TorusGrid g = grid16();
    PhysicalParams p = params_F2();

    SpectralField f(g, 1);
    f.at(0, 0, 1, 0) = 1.0; // |xi|_F^2 = F^2 = 4 at (0,0,1)
    SpectralField inv = deltaF_inverse(f, p);
    CHECK(std::abs(inv.at(0, 0, 1, 0) - cplx(-0.25)) < 1e-15);

    SpectralField r = shaped_random_field(g, 1, 31, 1.0, 4.0);
    r.zero_mean();
    auto deltaF = [&p](const Vec3& xi) { return cplx(-normF2(xi, p.froude)); };
    SpectralField round = deltaF_inverse(apply_multiplier(r, deltaF), p);
    CHECK(max_coeff_diff(round, r) < 1e-13 * max_abs_coeff(r));
    SpectralField round2 = apply_multiplier(deltaF_inverse(r, p), deltaF);
    CHECK(max_coeff_diff(round2, r) < 1e-13 * max_abs_coeff(r));
}

TEST_CASE("reconstruction recovers the vorticity it came from") {
    TorusGrid g = grid16();
    PhysicalParams p = params_F2();
    SpectralField om = shaped_random_field(g, 1, 32, 1.0, 4.0);
    om.zero_mean();
    StateU u = q_reconstruct(om, p);
    SpectralField om2 = potential_vorticity(u, p);
    CHECK(max_coeff_diff(om, om2) < 1e-12 * max_abs_coeff(om));
    // Biot-Savart velocity is divergence-free by structure
    CHECK(max_divergence(u) < 1e-13 * max_abs_coeff(u));
}

TEST_CASE("projector algebra on random states") {
    TorusGrid g = grid16();
    PhysicalParams p = params_F2();
    StateU u = random_state(g, 33);
    const double scale = max_abs_coeff(u);

    StateU qu = q_project(u, p);
    StateU pu = p_project(u, p);

    CHECK(max_coeff_diff(qu + pu, u) < 1e-12 * scale);
    CHECK(max_coeff_diff(q_project(qu, p), qu) < 1e-12 * scale);
    CHECK(max_abs_coeff(q_project(pu, p)) < 1e-12 * scale);
    CHECK(max_abs_coeff(p_project(qu, p)) < 1e-12 * scale);
    CHECK(max_abs_coeff(potential_vorticity(pu, p)) < 1e-12 * scale);
    CHECK(max_coeff_diff(potential_vorticity(qu, p), potential_vorticity(u, p)) < 1e-12 * scale);

    // L2 and homogeneous Sobolev orthogonality
    CHECK(std::abs(inner_l2(qu, pu)) < 1e-12 * norm_l2(u) * norm_l2(u));
    for (double s : {0.5, 1.0})
        CHECK(std::abs(inner_hs(qu, pu, s)) < 1e-12 * norm_hs(u, s) * norm_hs(u, s));
}

TEST_CASE("QG fixed point and oscillating annihilation") {
    TorusGrid g = grid16();
    PhysicalParams p = params_F2();
    SpectralField om = shaped_random_field(g, 1, 34, 1.0, 4.0);
    om.zero_mean();
    StateU uqg = q_reconstruct(om, p);
    CHECK(max_coeff_diff(q_project(uqg, p), uqg) < 1e-12 * max_abs_coeff(uqg));
    CHECK(max_abs_coeff(p_project(uqg, p)) < 1e-12 * max_abs_coeff(uqg));
}

TEST_CASE("projectors commute with leray") {
    TorusGrid g = grid16();
    PhysicalParams p = params_F2();
    // general (not divergence-free) 4-component field
    SpectralField u = shaped_random_field(g, 4, 35, 0.5, 4.0);
    const double scale = max_abs_coeff(u);
    StateU a = q_project(leray_project(u), p);
    StateU b = leray_project(q_project(u, p));
    CHECK(max_coeff_diff(a, b) < 1e-12 * scale);
}

TEST_CASE("gamma symbol: closed form, sign, equal-viscosity reduction") {
    PhysicalParams p = params_F2();
    p.nu = 1.0;
    p.nu_prime = 3.0;
    auto gam = gamma_symbol(p);
    CHECK(std::abs(gam({0.0, 0.0, 1.0}) - cplx(-3.0)) < 1e-14);

    // negative definite off zero
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        Vec3 xi{d(rng), d(rng), d(rng)};
        if (norm(xi) < 1e-3) continue;
        CHECK(gam(xi).real() < 0.0);
        CHECK(gam(xi).imag() == 0.0);
    }

    // nu = nu' reduces to -nu |xi|^2
    PhysicalParams q = params_F2();
    q.nu = q.nu_prime = 0.7;
    auto gam2 = gamma_symbol(q);
    for (int k = 0; k < 200; ++k) {
        Vec3 xi{d(rng), d(rng), d(rng)};
        if (norm(xi) < 1e-3) continue;
        const double want = -q.nu * norm2(xi);
        CHECK(std::abs(gam2(xi).real() - want) < 1e-13 * std::abs(want));
    }
}
