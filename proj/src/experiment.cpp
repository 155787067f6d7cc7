#include "rsl/experiment.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>

#include "rsl/leray.hpp"
#include "rsl/multiplier.hpp"
#include "rsl/nonlinear.hpp"
#include "rsl/random_fields.hpp"
#include "rsl/transform.hpp"

namespace rsl {

using nlohmann::json;

namespace {
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace

std::vector<ConfigViolation> validate_config(const ExperimentConfig& cfg) {
    std::vector<ConfigViolation> v;
    auto bad = [&](const std::string& key, const std::string& req) { v.push_back({key, req}); };

    if (!(cfg.delta > 0.0 && cfg.delta < 0.25))
        bad("delta", "extra regularity must lie in the open window (0, 1/4)");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 0.5 * cfg.delta) && !cfg.critical_osc_mode)
        bad("gamma", "oscillation growth exponent must lie in (0, delta/2)");
    if (cfg.critical_osc_mode && !(cfg.m_exponent > 0.0))
        bad("m_exponent", "vanishing-factor exponent must be positive");

    if (cfg.delta > 0.0 && cfg.delta < 0.25) {
        const double eta_cap = std::min({1.0 - 2.0 * cfg.gamma / cfg.delta,
                                         1.0 / (3.0 * cfg.delta) - 1.0,
                                         1.0 / (2.0 * cfg.delta) - 2.0});
        if (!(cfg.eta > 0.0 && cfg.eta < eta_cap))
            bad("eta", "mixed-norm window needs 0 < eta < min(1 - 2 gamma/delta, 1/(3 delta) - 1, "
                       "1/(2 delta) - 2)");
        if (!(cfg.eta_prime > 0.0 && cfg.eta_prime < std::min(cfg.eta, cfg.c_lowfreq)))
            bad("eta_prime", "composite exponent needs 0 < eta' < min(eta, c)");
        const double a3 = cfg.alpha3_effective();
        if (!(a3 > 0.0 && cfg.delta <= 0.25 - 0.5 * a3 + 1e-12))
            bad("alpha3", "auxiliary index must satisfy 0 < alpha3 and delta <= 1/4 - alpha3/2 "
                          "(internal choice alpha = 1/2 - 2 delta saturates it)");
        const double s_hi = 0.5 + 2.0 * cfg.eta0() * cfg.delta;
        for (double s : cfg.s_values)
            if (!(s >= 0.5 && s < s_hi)) {
                bad("s_values", "regularities must lie in [1/2, 1/2 + 2 eta0 delta)");
                break;
            }
    }

    const std::string stri =
        strichartz_admissibility(cfg.strichartz.p, cfg.strichartz.r, cfg.strichartz.theta);
    if (!stri.empty()) bad("strichartz", stri);

    try {
        cfg.cutoffs.validate();
    } catch (const std::exception& e) {
        bad("cutoffs.k0", e.what());
    }
    try {
        cfg.physics.validate();
    } catch (const std::exception& e) {
        bad("physics", e.what());
    }
    try {
        cfg.grid.validate();
    } catch (const std::exception& e) {
        bad("grid", e.what());
    }
    try {
        cfg.solver.validate();
    } catch (const std::exception& e) {
        bad("solver", e.what());
    }
    if (!(cfg.c0_bound >= 1.0)) bad("c0_bound", "data size constant must satisfy C0 >= 1");
    if (!(cfg.rho > 0.0 && cfg.rho <= 1.0)) bad("rho", "base norm fraction must lie in (0, 1]");
    if (!(cfg.c_lowfreq > 0.0 && cfg.c_lowfreq < 1.0))
        bad("c_lowfreq", "low-frequency exponent fraction must lie in (0, 1)");
    if (cfg.epsilons.size() < 1) bad("epsilons", "at least one epsilon required");
    for (size_t i = 1; i < cfg.epsilons.size(); ++i)
        if (!(cfg.epsilons[i] < cfg.epsilons[i - 1])) {
            bad("epsilons", "epsilons must decrease strictly");
            break;
        }
    return v;
}

double predicted_exponent(const ExperimentConfig& cfg, double s) {
    const double base = 0.5 * cfg.delta - cfg.gamma;
    return std::min({cfg.alpha0, base, base + 0.5 * (0.5 - s)});
}

double predicted_composite_exponent(const ExperimentConfig& cfg) {
    return std::min(cfg.alpha0, (cfg.eta0() - 0.5 * cfg.eta) * cfg.delta);
}

InitialData make_initial_data(const ExperimentConfig& cfg, double eps) {
    const TorusGrid& g = cfg.grid;
    const PhysicalParams& p = cfg.physics;
    const double khi = 0.35 * g.dk() * (g.n / 2);
    const double s_data = 0.5 + cfg.delta;

    InitialData d;
    d.omega0 = shaped_random_field(g, 1, mix_seed(cfg.seed, 1), 1.0, khi);
    d.omega0.zero_mean();
    d.uqg_tilde0 = q_reconstruct(d.omega0, p);
    const double base_norm = norm_hs_inhom(d.uqg_tilde0, s_data);
    if (!(base_norm > 0.0))
        throw std::invalid_argument("make_initial_data: spectral support exhausted (QG)");
    const double qg_scale = cfg.rho * cfg.c0_bound / base_norm;
    d.omega0 *= qg_scale;
    d.uqg_tilde0 *= qg_scale;

    if (cfg.zero_oscillation) {
        d.uqg_eps0 = d.uqg_tilde0;
        d.osc0 = make_state(g);
        d.u0 = d.uqg_eps0;
        return d;
    }

    // QG perturbation with the prescribed inhomogeneous norm gap
    SpectralField om_p = shaped_random_field(g, 1, mix_seed(cfg.seed, 2), 1.0, khi);
    om_p.zero_mean();
    StateU pert = q_reconstruct(om_p, p);
    const double pert_norm = norm_hs_inhom(pert, s_data);
    if (!(pert_norm > 0.0))
        throw std::invalid_argument("make_initial_data: spectral support exhausted (pert)");
    pert *= 0.5 * cfg.c0_bound * std::pow(eps, cfg.alpha0) / pert_norm;
    d.uqg_eps0 = d.uqg_tilde0 + pert;

    // oscillating part with the prescribed homogeneous norm
    StateU osc = p_project(leray_project(shaped_random_field(g, 4, mix_seed(cfg.seed, 3), 1.0, khi)),
                           p);
    osc.zero_mean();
    const double osc_norm = norm_hs(osc, s_data);
    if (!(osc_norm > 0.0))
        throw std::invalid_argument("make_initial_data: spectral support exhausted (osc)");
    osc *= cfg.osc_target(eps) / osc_norm;
    d.osc0 = osc;

    d.u0 = d.uqg_eps0 + d.osc0;
    return d;
}

namespace {

// trapezoid accumulator for running time integrals
struct Trapezoid {
    double integral = 0.0;
    double prev = 0.0;
    bool has_prev = false;
    void add(double dt, double value) {
        if (has_prev) integral += 0.5 * dt * (prev + value);
        prev = value;
        has_prev = true;
    }
};

struct Lane {
    double eps;
    PhysicalParams params;
    std::unique_ptr<PEStepper> pe;
    std::unique_ptr<WEStepper> we;
    StateU u, w;
    bool failed = false;
    std::string error;

    std::map<double, double> sup_hs_sq;   // s -> running sup of ||delta||_{H^s}^2
    std::map<double, Trapezoid> diss_hs;  // s -> integral of ||delta||_{H^{s+1}}^2
    Trapezoid we_l6_sq;                   // ||W||_{L6}^2
    Trapezoid composite_sq;               // |||D|^{eta' d}(U - Uqg)||_inf^2
    double we_sup_sq = 0.0;               // sup ||W||^2_{H^{1/2+delta}}
    Trapezoid we_diss_sq;                 // int ||W||^2_{H^{3/2+delta}}
    double monitor = 0.0;                 // running blow-up integral of U
    Trapezoid monitor_acc;
    double osc0_norm = 0.0;
};

} // namespace

RateReport epsilon_sweep(const ExperimentConfig& cfg) {
    {
        const auto violations = validate_config(cfg);
        if (!violations.empty())
            throw std::invalid_argument("epsilon_sweep: invalid config (" + violations[0].key +
                                        ": " + violations[0].requirement + ")");
    }
    const auto t_start = std::chrono::steady_clock::now();

    RateReport report;
    report.cfg = cfg;

    const TorusGrid& g = cfg.grid;
    const SolverConfig& sc = cfg.solver;
    const long nsteps = sc.steps();
    const double sample_dt = sc.dt * sc.sample_every;

    // shared limit system
    InitialData shared = make_initial_data(cfg, cfg.epsilons.front());
    QGStepper qg(g, cfg.physics, sc);
    SpectralField om = shared.omega0;
    Trapezoid gb_int;

    std::vector<Lane> lanes;
    for (double eps : cfg.epsilons) {
        Lane lane;
        lane.eps = eps;
        lane.params = cfg.physics;
        lane.params.epsilon = eps;
        const InitialData data = make_initial_data(cfg, eps);
        lane.u = data.u0;
        lane.w = data.osc0;
        lane.osc0_norm = norm_hs(data.osc0, 0.5 + cfg.delta);
        lane.pe = std::make_unique<PEStepper>(g, lane.params, sc);
        lane.we = std::make_unique<WEStepper>(g, lane.params, sc);
        for (double s : cfg.s_values) {
            lane.sup_hs_sq[s] = 0.0;
            lane.diss_hs[s] = Trapezoid{};
        }
        lanes.push_back(std::move(lane));
    }

    StateU uqg_now = qg.reconstruct(om);
    StateU gb_now = compute_gb(uqg_now, cfg.physics, sc.dealias);

    auto sample = [&](Lane& lane) {
        if (lane.failed) return;
        const StateU delta = lane.u - uqg_now - lane.w;
        for (double s : cfg.s_values) {
            const double hs = norm_hs(delta, s);
            lane.sup_hs_sq[s] = std::max(lane.sup_hs_sq[s], hs * hs);
            const double h1 = norm_hs(delta, s + 1.0);
            lane.diss_hs[s].add(sample_dt, h1 * h1);
        }
        const double wl6 = norm_lp_phys(backward(lane.w), 6.0);
        lane.we_l6_sq.add(sample_dt, wl6 * wl6);

        const StateU diff = fractional_laplacian(lane.u - uqg_now, cfg.eta_prime * cfg.delta);
        const double dinf = norm_linf_phys(backward(diff));
        lane.composite_sq.add(sample_dt, dinf * dinf);

        const double ws = norm_hs(lane.w, 0.5 + cfg.delta);
        lane.we_sup_sq = std::max(lane.we_sup_sq, ws * ws);
        const double wd = norm_hs(lane.w, 1.5 + cfg.delta);
        lane.we_diss_sq.add(sample_dt, wd * wd);

        const double h32 = std::pow(norm_hs(lane.u, 1.5), 2);
        lane.monitor_acc.add(sample_dt, h32);
        if (lane.monitor_acc.integral > sc.blowup_ceiling) {
            lane.failed = true;
            lane.error = "blow-up monitor exceeded ceiling";
        }
    };

    for (Lane& lane : lanes) sample(lane);
    gb_int.add(sample_dt, norm_hs(gb_now, 0.5));

    for (long k = 1; k <= nsteps; ++k) {
        qg.step(om);
        uqg_now = qg.reconstruct(om); // needed at sample times; cheap multiplier
        const StateU gb_next = compute_gb(uqg_now, cfg.physics, sc.dealias);
        // lanes are independent; per-lane arithmetic is identical regardless
        // of scheduling, so this keeps bitwise reproducibility
        #pragma omp parallel for schedule(dynamic, 1)
        for (long li = 0; li < static_cast<long>(lanes.size()); ++li) {
            Lane& lane = lanes[li];
            if (lane.failed) continue;
            try {
                lane.pe->step(lane.u);
                lane.we->step(lane.w, gb_now, gb_next);
            } catch (const std::exception& e) {
                lane.failed = true;
                lane.error = e.what();
            }
        }
        gb_now = gb_next;
        if (k % sc.sample_every == 0 || k == nsteps) {
            for (Lane& lane : lanes) sample(lane);
            gb_int.add(sample_dt, norm_hs(gb_now, 0.5));
        }
    }

    for (Lane& lane : lanes) {
        EpsilonRow row;
        row.epsilon = lane.eps;
        row.ok = !lane.failed;
        row.error = lane.error;
        row.osc0_norm = lane.osc0_norm;
        if (row.ok) {
            for (double s : cfg.s_values)
                row.delta_es[s] =
                    std::sqrt(lane.sup_hs_sq[s] + cfg.physics.nu * lane.diss_hs[s].integral);
            row.we_strichartz = std::sqrt(lane.we_l6_sq.integral);
            row.composite_l2linf = std::sqrt(lane.composite_sq.integral);
            row.we_es_delta = std::sqrt(lane.we_sup_sq + cfg.physics.nu * lane.we_diss_sq.integral);
            row.gb_integral = gb_int.integral;
        }
        report.rows.push_back(std::move(row));
    }

    rate_regression(report);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

void rate_regression(RateReport& report) {
    const ExperimentConfig& cfg = report.cfg;
    std::vector<const EpsilonRow*> ok;
    for (const auto& r : report.rows)
        if (r.ok) ok.push_back(&r);

    report.predicted.clear();
    report.fitted_slopes.clear();
    report.slope_ok.clear();
    for (double s : cfg.s_values) report.predicted[s] = predicted_exponent(cfg, s);
    report.composite_predicted = predicted_composite_exponent(cfg);

    if (ok.size() >= 2) {
        for (double s : cfg.s_values) {
            std::vector<double> lx, ly;
            for (const auto* r : ok) {
                const double v = r->delta_es.at(s);
                if (v > 0.0) {
                    lx.push_back(std::log(r->epsilon));
                    ly.push_back(std::log(v));
                }
            }
            if (lx.size() >= 2) {
                double slope, intercept, resid;
                linear_fit(lx, ly, slope, intercept, resid);
                report.fitted_slopes[s] = slope;
                report.slope_ok[s] = slope >= report.predicted[s] - cfg.rate_tol;
            }
        }
        std::vector<double> lx, ly;
        for (const auto* r : ok)
            if (r->composite_l2linf > 0.0) {
                lx.push_back(std::log(r->epsilon));
                ly.push_back(std::log(r->composite_l2linf));
            }
        if (lx.size() >= 2) {
            double slope, intercept, resid;
            linear_fit(lx, ly, slope, intercept, resid);
            report.composite_slope = slope;
        }
    }

    report.monotone_decreasing = ok.size() == report.rows.size() && ok.size() >= 2;
    for (size_t i = 1; i < ok.size() && report.monotone_decreasing; ++i) {
        const double prev = ok[i - 1]->delta_es.count(0.5) ? ok[i - 1]->delta_es.at(0.5) : 0.0;
        const double cur = ok[i]->delta_es.count(0.5) ? ok[i]->delta_es.at(0.5) : 0.0;
        if (!(cur < prev)) report.monotone_decreasing = false;
    }
}

void write_report_csv(const RateReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "epsilon,s,delta_Es_norm,we_strichartz,composite_L2Linf,predicted_exp\n";
    out.precision(17);
    for (const auto& row : report.rows) {
        if (!row.ok) continue;
        for (const auto& [s, v] : row.delta_es)
            out << row.epsilon << ',' << s << ',' << v << ',' << row.we_strichartz << ','
                << row.composite_l2linf << ',' << predicted_exponent(report.cfg, s) << '\n';
    }
}

namespace {

json cfg_to_json(const ExperimentConfig& c) {
    json j;
    j["delta"] = c.delta;
    j["gamma"] = c.gamma;
    j["alpha0"] = c.alpha0;
    j["c0_bound"] = c.c0_bound;
    j["c_lowfreq"] = c.c_lowfreq;
    j["rho"] = c.rho;
    j["epsilons"] = c.epsilons;
    j["s_values"] = c.s_values;
    j["critical_osc_mode"] = c.critical_osc_mode;
    j["m_exponent"] = c.m_exponent;
    j["eta"] = c.eta;
    j["eta_prime"] = c.eta_prime;
    j["alpha3"] = c.alpha3;
    j["seed"] = c.seed;
    j["rate_tol"] = c.rate_tol;
    j["zero_oscillation"] = c.zero_oscillation;
    j["grid"] = {{"n", c.grid.n}, {"box_length", c.grid.box_length}};
    j["physics"] = {{"epsilon", c.physics.epsilon},
                    {"froude", c.physics.froude},
                    {"nu", c.physics.nu},
                    {"nu_prime", c.physics.nu_prime}};
    j["solver"] = {{"dt", c.solver.dt},
                   {"t_end", c.solver.t_end},
                   {"dealias", c.solver.dealias},
                   {"integrator", c.solver.integrator == SolverConfig::Integrator::if_rk4
                                      ? "if-rk4"
                                      : "if-rk2"},
                   {"sample_every", c.solver.sample_every},
                   {"blowup_ceiling", c.solver.blowup_ceiling}};
    j["strichartz"] = {{"p", c.strichartz.p},     {"r", c.strichartz.r},
                       {"theta", c.strichartz.theta}, {"d", c.strichartz.d},
                       {"q", c.strichartz.q},     {"nu", c.strichartz.nu},
                       {"t_end", c.strichartz.t_end}, {"n_t", c.strichartz.n_t},
                       {"epsilons", c.strichartz.epsilons}};
    j["cutoffs"] = {{"k0", c.cutoffs.k0}, {"bump_width", c.cutoffs.bump.width}};
    return j;
}

template <typename T>
void take(json& j, const char* key, T& into) {
    if (j.contains(key)) {
        into = j.at(key).get<T>();
        j.erase(key);
    }
}

void reject_unknown(const json& j, const std::string& where) {
    if (!j.empty()) {
        std::string keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys += it.key() + " ";
        throw std::invalid_argument("unknown config key(s) in " + where + ": " + keys);
    }
}

} // namespace

std::string config_json(const ExperimentConfig& cfg) { return cfg_to_json(cfg).dump(2); }

ExperimentConfig parse_config_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    take(j, "delta", c.delta);
    take(j, "gamma", c.gamma);
    take(j, "alpha0", c.alpha0);
    take(j, "c0_bound", c.c0_bound);
    take(j, "c_lowfreq", c.c_lowfreq);
    take(j, "rho", c.rho);
    take(j, "epsilons", c.epsilons);
    take(j, "s_values", c.s_values);
    take(j, "critical_osc_mode", c.critical_osc_mode);
    take(j, "m_exponent", c.m_exponent);
    take(j, "eta", c.eta);
    take(j, "eta_prime", c.eta_prime);
    take(j, "alpha3", c.alpha3);
    take(j, "seed", c.seed);
    take(j, "rate_tol", c.rate_tol);
    take(j, "zero_oscillation", c.zero_oscillation);
    if (j.contains("grid")) {
        json g = j.at("grid");
        j.erase("grid");
        take(g, "n", c.grid.n);
        take(g, "box_length", c.grid.box_length);
        reject_unknown(g, "grid");
    }
    if (j.contains("physics")) {
        json p = j.at("physics");
        j.erase("physics");
        take(p, "epsilon", c.physics.epsilon);
        take(p, "froude", c.physics.froude);
        take(p, "nu", c.physics.nu);
        take(p, "nu_prime", c.physics.nu_prime);
        reject_unknown(p, "physics");
    }
    if (j.contains("solver")) {
        json s = j.at("solver");
        j.erase("solver");
        take(s, "dt", c.solver.dt);
        take(s, "t_end", c.solver.t_end);
        take(s, "dealias", c.solver.dealias);
        std::string integ = c.solver.integrator == SolverConfig::Integrator::if_rk4 ? "if-rk4"
                                                                                    : "if-rk2";
        take(s, "integrator", integ);
        if (integ == "if-rk4")
            c.solver.integrator = SolverConfig::Integrator::if_rk4;
        else if (integ == "if-rk2")
            c.solver.integrator = SolverConfig::Integrator::if_rk2;
        else
            throw std::invalid_argument("solver.integrator must be if-rk2 or if-rk4");
        take(s, "sample_every", c.solver.sample_every);
        take(s, "blowup_ceiling", c.solver.blowup_ceiling);
        reject_unknown(s, "solver");
    }
    if (j.contains("strichartz")) {
        json s = j.at("strichartz");
        j.erase("strichartz");
        take(s, "p", c.strichartz.p);
        take(s, "r", c.strichartz.r);
        take(s, "theta", c.strichartz.theta);
        take(s, "d", c.strichartz.d);
        take(s, "q", c.strichartz.q);
        take(s, "nu", c.strichartz.nu);
        take(s, "t_end", c.strichartz.t_end);
        take(s, "n_t", c.strichartz.n_t);
        take(s, "epsilons", c.strichartz.epsilons);
        reject_unknown(s, "strichartz");
    }
    if (j.contains("cutoffs")) {
        json s = j.at("cutoffs");
        j.erase("cutoffs");
        take(s, "k0", c.cutoffs.k0);
        take(s, "bump_width", c.cutoffs.bump.width);
        reject_unknown(s, "cutoffs");
    }
    reject_unknown(j, "top level");
    return c;
}

std::string report_json(const RateReport& report) {
    json j;
    j["config"] = cfg_to_json(report.cfg);
    j["wall_seconds"] = report.wall_seconds;
    j["monotone_decreasing"] = report.monotone_decreasing;
    j["composite_slope"] = report.composite_slope;
    j["composite_predicted"] = report.composite_predicted;
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row;
        row["epsilon"] = r.epsilon;
        row["ok"] = r.ok;
        row["error"] = r.error;
        row["osc0_norm"] = r.osc0_norm;
        row["we_strichartz"] = r.we_strichartz;
        row["composite_l2linf"] = r.composite_l2linf;
        row["we_es_delta"] = r.we_es_delta;
        row["gb_integral"] = r.gb_integral;
        json des = json::object();
        for (const auto& [s, v] : r.delta_es) des[std::to_string(s)] = v;
        row["delta_es"] = des;
        rows.push_back(row);
    }
    j["rows"] = rows;
    json slopes = json::object(), predicted = json::object(), flags = json::object();
    for (const auto& [s, v] : report.fitted_slopes) slopes[std::to_string(s)] = v;
    for (const auto& [s, v] : report.predicted) predicted[std::to_string(s)] = v;
    for (const auto& [s, v] : report.slope_ok) flags[std::to_string(s)] = v;
    j["fitted_slopes"] = slopes;
    j["predicted"] = predicted;
    j["slope_ok"] = flags;
    return j.dump(2);
}

void write_report_json(const RateReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << report_json(report) << '\n';
}

std::string norm_record_json(const std::string& name, const std::vector<double>& indices,
                             double value) {
    json j;
    j["norm_name"] = name;
    j["indices"] = indices;
    j["value"] = value;
    return j.dump();
}

} // namespace rsl
