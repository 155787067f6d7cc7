#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "rsl/experiment.hpp"
#include "rsl/leray.hpp"
#include "rsl/qg.hpp"

using namespace rsl;

namespace {
ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.grid = {8, 4.0 * M_PI};
    cfg.solver.dt = 0.01;
    cfg.solver.t_end = 0.05;
    cfg.solver.sample_every = 1;
    cfg.epsilons = {0.2, 0.1};
    return cfg;
}

bool has_violation(const std::vector<ConfigViolation>& v, const std::string& key) {
    for (const auto& x : v)
        if (x.key == key) return true;
    return false;
}
} // namespace

TEST_CASE("derived exponents") {
    ExperimentConfig cfg;
    cfg.delta = 0.2;
    cfg.gamma = 0.05;
    cfg.alpha0 = 1.0;
    CHECK(cfg.eta0() == doctest::Approx(0.25));
    CHECK(cfg.alpha_internal() == doctest::Approx(0.1));
    CHECK(predicted_exponent(cfg, 0.5) == doctest::Approx(0.05));
    CHECK(predicted_exponent(cfg, 0.54) == doctest::Approx(0.03));
    // alpha0 binds when small
    cfg.alpha0 = 0.01;
    CHECK(predicted_exponent(cfg, 0.5) == doctest::Approx(0.01));
}

TEST_CASE("predicted exponent matches hand evaluation on a table of configs") {
    struct Row {
        double delta, gamma, alpha0, s, want;
    };
    // want = min(alpha0, delta/2 - gamma, delta/2 - gamma + (1/2)(1/2 - s))
    const Row table[] = {
        {0.2, 0.05, 1.0, 0.50, 0.05},
        {0.2, 0.05, 1.0, 0.54, 0.03},
        {0.2, 0.05, 0.02, 0.50, 0.02},
        {0.2, 0.01, 1.0, 0.50, 0.09},
        {0.2, 0.01, 1.0, 0.58, 0.05},
        {0.1, 0.02, 1.0, 0.50, 0.03},
        {0.1, 0.02, 0.5, 0.52, 0.02},
        {0.24, 0.10, 1.0, 0.50, 0.02},
        {0.24, 0.02, 1.0, 0.56, 0.07},
        {0.16, 0.07, 1.0, 0.50, 0.01},
    };
    for (const Row& r : table) {
        ExperimentConfig cfg;
        cfg.delta = r.delta;
        cfg.gamma = r.gamma;
        cfg.alpha0 = r.alpha0;
        CHECK(predicted_exponent(cfg, r.s) == doctest::Approx(r.want).epsilon(1e-12));
    }
}

TEST_CASE("validator flags each admissibility window") {
    ExperimentConfig good = tiny_config();
    CHECK(validate_config(good).empty());

    ExperimentConfig c = good;
    c.delta = 0.3;
    CHECK(has_violation(validate_config(c), "delta"));

    c = good;
    c.critical_osc_mode = false;
    c.gamma = 0.5 * c.delta; // boundary excluded
    CHECK(has_violation(validate_config(c), "gamma"));
    c.gamma = 0.04;
    CHECK(validate_config(c).empty());

    c = good;
    c.eta = 0.8; // cap for delta=0.2, gamma=0.05 is 0.5
    CHECK(has_violation(validate_config(c), "eta"));

    c = good;
    c.strichartz.p = 7.0; // above 4/(theta (1-2/r)) = 6
    CHECK(has_violation(validate_config(c), "strichartz"));
    c.strichartz.p = 2.0;
    c.strichartz.r = 6.0;
    c.strichartz.theta = 1.0;
    CHECK(validate_config(c).empty());

    c = good;
    c.cutoffs.k0 = 0.27;
    CHECK(has_violation(validate_config(c), "cutoffs.k0"));

    c = good;
    c.alpha3 = 0.2; // needs delta <= 1/4 - alpha3/2 = 0.15 < 0.2
    CHECK(has_violation(validate_config(c), "alpha3"));
    c.alpha3 = -1.0; // internal choice saturates the constraint
    CHECK(validate_config(c).empty());

    c = good;
    c.s_values = {0.5, 0.65}; // outside [1/2, 1/2 + 2 eta0 delta) = [0.5, 0.6)
    CHECK(has_violation(validate_config(c), "s_values"));

    c = good;
    c.epsilons = {0.1, 0.2};
    CHECK(has_violation(validate_config(c), "epsilons"));
}

TEST_CASE("initial data: projector structure and exact norms") {
    ExperimentConfig cfg = tiny_config();
    cfg.grid = {16, 8.0 * M_PI};
    const PhysicalParams& p = cfg.physics;
    for (double eps : {0.2, 0.05}) {
        const InitialData d = make_initial_data(cfg, eps);
        const double s = 0.5 + cfg.delta;

        // oscillating part is vorticity-free and divergence-free
        const double oscale = std::max(1e-30, max_abs_coeff(d.osc0));
        CHECK(max_abs_coeff(q_project(d.osc0, p)) < 1e-10 * oscale);
        CHECK(max_divergence(d.osc0) < 1e-10 * oscale);

        // limit data is quasi-geostrophic with nonvanishing vorticity
        CHECK(max_coeff_diff(q_project(d.uqg_tilde0, p), d.uqg_tilde0) <
              1e-10 * max_abs_coeff(d.uqg_tilde0));
        CHECK(norm_l2(potential_vorticity(d.uqg_tilde0, p)) > 0.0);

        // norms hit their targets exactly after the final rescale
        CHECK(norm_hs_inhom(d.uqg_tilde0, s) ==
              doctest::Approx(cfg.rho * cfg.c0_bound).epsilon(1e-10));
        CHECK(norm_hs(d.osc0, s) == doctest::Approx(cfg.osc_target(eps)).epsilon(1e-10));
        CHECK(norm_hs_inhom(d.uqg_eps0 - d.uqg_tilde0, s) ==
              doctest::Approx(0.5 * cfg.c0_bound * std::pow(eps, cfg.alpha0)).epsilon(1e-10));
        CHECK(max_coeff_diff(d.u0, d.uqg_eps0 + d.osc0) == 0.0);
    }
}

TEST_CASE("gamma-mode oscillation norm scales as eps^{-gamma}") {
    ExperimentConfig cfg = tiny_config();
    cfg.critical_osc_mode = false;
    cfg.gamma = 0.05;
    const double s = 0.5 + cfg.delta;
    const InitialData a = make_initial_data(cfg, 0.2);
    const InitialData b = make_initial_data(cfg, 0.05);
    const double ratio = norm_hs(b.osc0, s) / norm_hs(a.osc0, s);
    CHECK(ratio == doctest::Approx(std::pow(0.05 / 0.2, -cfg.gamma)).epsilon(1e-12));

    // gamma -> 0 limit: the target is epsilon-independent
    cfg.gamma = 0.0;
    const InitialData c1 = make_initial_data(cfg, 0.2);
    const InitialData c2 = make_initial_data(cfg, 0.05);
    CHECK(norm_hs(c1.osc0, s) == doctest::Approx(norm_hs(c2.osc0, s)).epsilon(1e-12));
}

TEST_CASE("regression self-test on synthetic norms") {
    ExperimentConfig cfg;
    cfg.s_values = {0.5};
    cfg.epsilons = {0.2, 0.1, 0.05, 0.025};
    RateReport rep;
    rep.cfg = cfg;
    for (double eps : cfg.epsilons) {
        EpsilonRow row;
        row.epsilon = eps;
        row.ok = true;
        row.delta_es[0.5] = 3.7 * std::pow(eps, 0.3);
        row.composite_l2linf = 1.1 * std::pow(eps, 0.12);
        rep.rows.push_back(row);
    }
    rate_regression(rep);
    CHECK(rep.fitted_slopes.at(0.5) == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(rep.composite_slope == doctest::Approx(0.12).epsilon(1e-6));
    CHECK(rep.monotone_decreasing);
    CHECK(rep.slope_ok.at(0.5));

    // a failing row is recorded but does not poison the fit
    rep.rows[1].ok = false;
    rep.rows[1].error = "synthetic failure";
    rate_regression(rep);
    CHECK(rep.fitted_slopes.at(0.5) == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(!rep.monotone_decreasing); // not all rows usable
}

TEST_CASE("config json: round trip and unknown-key rejection") {
    ExperimentConfig cfg = tiny_config();
    cfg.delta = 0.21;
    cfg.seed = 99;
    cfg.solver.integrator = SolverConfig::Integrator::if_rk2;
    ExperimentConfig back = parse_config_json(config_json(cfg));
    CHECK(back.delta == cfg.delta);
    CHECK(back.seed == cfg.seed);
    CHECK(back.grid.n == cfg.grid.n);
    CHECK(back.solver.integrator == cfg.solver.integrator);
    CHECK(back.epsilons == cfg.epsilons);

    CHECK_THROWS_WITH_AS(parse_config_json(R"({"no_such_key": 1})"),
                         doctest::Contains("no_such_key"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_json(R"({"solver": {"dtt": 1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_json(R"({"solver": {"integrator": "euler"}})"),
                    std::invalid_argument);
}

TEST_CASE("report emission: csv schema, json round trip, empty sweep") {
    ExperimentConfig cfg = tiny_config();
    RateReport rep = epsilon_sweep(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].ok);
    CHECK(rep.wall_seconds > 0.0);

    const std::string csv_path = "lab_report_test.csv";
    const std::string json_path = "lab_report_test.json";
    write_report_csv(rep, csv_path);
    write_report_json(rep, json_path);

    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "epsilon,s,delta_Es_norm,we_strichartz,composite_L2Linf,predicted_exp");
    int lines = 0;
    for (std::string l; std::getline(csv, l);) ++lines;
    CHECK(lines == static_cast<int>(rep.rows.size() * cfg.s_values.size()));

    // the emitted summary reproduces the in-memory report
    std::ifstream jf(json_path);
    nlohmann::json j = nlohmann::json::parse(jf);
    CHECK(j.at("rows").size() == rep.rows.size());
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(j.at("rows")[i].at("epsilon").get<double>() == rep.rows[i].epsilon);
        CHECK(j.at("rows")[i].at("delta_es").at("0.500000").get<double>() ==
              rep.rows[i].delta_es.at(0.5));
        CHECK(j.at("rows")[i].at("we_strichartz").get<double>() == rep.rows[i].we_strichartz);
    }
    CHECK(j.at("config").at("delta").get<double>() == cfg.delta);
    for (const auto& [s, v] : rep.fitted_slopes)
        CHECK(j.at("fitted_slopes").at(std::to_string(s)).get<double>() == v);

    // empty report: header-only csv, valid json with empty tables
    RateReport empty;
    empty.cfg = cfg;
    write_report_csv(empty, csv_path);
    write_report_json(empty, json_path);
    std::ifstream csv2(csv_path);
    std::getline(csv2, header);
    std::string rest;
    CHECK(!std::getline(csv2, rest));
    std::ifstream jf2(json_path);
    nlohmann::json j2 = nlohmann::json::parse(jf2);
    CHECK(j2.at("rows").empty());

    std::remove(csv_path.c_str());
    std::remove(json_path.c_str());
}

TEST_CASE("sweep rows carry the oscillation-energy and forcing monitors") {
    ExperimentConfig cfg = tiny_config();
    RateReport rep = epsilon_sweep(cfg);
    for (const auto& r : rep.rows) {
        REQUIRE(r.ok);
        // measured constant of the oscillation-energy bound
        // ||W||^2_{E^{1/2+delta}} <= D0 (||osc0||^2 + 1): report D0, require finite
        const double d0 = r.we_es_delta * r.we_es_delta / (r.osc0_norm * r.osc0_norm + 1.0);
        CHECK(std::isfinite(d0));
        CHECK(r.we_es_delta > 0.0);
        // time-integrated forcing norm is finite and reported
        CHECK(std::isfinite(r.gb_integral));
        CHECK(r.gb_integral >= 0.0);
    }
}

TEST_CASE("sweep is deterministic for a fixed seed") {
    ExperimentConfig cfg = tiny_config();
    RateReport a = epsilon_sweep(cfg);
    RateReport b = epsilon_sweep(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        for (const auto& [s, v] : a.rows[i].delta_es) CHECK(v == b.rows[i].delta_es.at(s));
        CHECK(a.rows[i].we_strichartz == b.rows[i].we_strichartz);
        CHECK(a.rows[i].composite_l2linf == b.rows[i].composite_l2linf);
    }

    // different seed, different data
    ExperimentConfig other = cfg;
    other.seed = cfg.seed + 1;
    RateReport c = epsilon_sweep(other);
    CHECK(c.rows[0].delta_es.at(0.5) != a.rows[0].delta_es.at(0.5));
}

TEST_CASE("invalid configs are rejected by the sweep") {
    ExperimentConfig cfg = tiny_config();
    cfg.delta = 0.4;
    CHECK_THROWS_AS((void)epsilon_sweep(cfg), std::invalid_argument);
}

TEST_CASE("norm record serialization") {
    const std::string rec = norm_record_json("besov", {0.5, 2.0, 1.0}, 3.25);
    nlohmann::json j = nlohmann::json::parse(rec);
    CHECK(j.at("norm_name") == "besov");
    CHECK(j.at("indices").size() == 3);
    CHECK(j.at("value").get<double>() == 3.25);
}
