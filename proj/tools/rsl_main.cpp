// Command-line front end: QG/oscillation decomposition, exact linear
// propagation, oscillatory-kernel decay tables, free-flow Strichartz scans,
// nonlinear simulation with snapshot output, epsilon sweeps, config checks.
//
// Exit codes: 0 ok, 2 invalid config/usage, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rsl/experiment.hpp"
#include "rsl/leray.hpp"
#include "rsl/snapshot.hpp"
#include "rsl/transform.hpp"

using namespace rsl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_json(text);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::string tok;
    std::istringstream ss(csv);
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

KernelPiece piece_from_string(const std::string& s) {
    if (s == "whole") return KernelPiece::whole;
    if (s == "1" || s == "piece1") return KernelPiece::small_vertical;
    if (s == "2" || s == "piece2") return KernelPiece::small_horizontal;
    if (s == "3" || s == "piece3") return KernelPiece::off_axes;
    throw std::invalid_argument("unknown kernel piece: " + s);
}

int cmd_decompose(const std::string& in, const std::string& out_qg, const std::string& out_osc,
                  double froude) {
    PhysicalParams p;
    p.froude = froude;
    SpectralField u = read_snapshot(in);
    if (u.comps != 4) throw std::invalid_argument("decompose expects a 4-component snapshot");
    StateU qg = q_project(u, p);
    if (!out_qg.empty()) write_snapshot(out_qg, qg);
    if (!out_osc.empty()) write_snapshot(out_osc, u - qg);
    std::cout << norm_record_json("qg_l2", {}, norm_l2(qg)) << '\n'
              << norm_record_json("osc_l2", {}, norm_l2(u - qg)) << '\n';
    return kExitOk;
}

int cmd_propagate(const std::string& in, const std::string& out, double t, double epsilon,
                  double froude, double nu) {
    PhysicalParams p{epsilon, froude, nu, nu};
    p.validate();
    StateU f0 = read_snapshot(in);
    if (f0.comps != 4) throw std::invalid_argument("propagate expects a 4-component snapshot");
    const double div = max_divergence(f0);
    if (div > 1e-8 * std::max(1.0, max_abs_coeff(f0)))
        throw NumericalError("initial data is not divergence-free");
    StateU ft = propagate(f0, t, p);
    write_snapshot(out, ft);
    std::cout << norm_record_json("l2_final", {t}, norm_l2(ft)) << '\n';
    return kExitOk;
}

int cmd_kernel_decay(double sigma_min, double sigma_max, int points, const std::string& piece,
                     double h, double froude, double k0, double max_bmass,
                     const std::string& csv_path, const std::string& json_path) {
    PhaseSpec phase;
    phase.froude = froude;
    CutoffSpec cut;
    cut.k0 = k0;
    KernelGridSpec grid;
    grid.h = h;
    grid.max_boundary_mass = max_bmass;
    KernelEvaluator ev(phase, cut, grid);

    std::vector<double> sigmas;
    for (int i = 0; i < points; ++i)
        sigmas.push_back(sigma_min * std::pow(sigma_max / sigma_min,
                                              points > 1 ? i / double(points - 1) : 0.0));

    std::vector<KernelPiece> pieces;
    if (piece == "all")
        pieces = {KernelPiece::small_vertical, KernelPiece::small_horizontal,
                  KernelPiece::off_axes, KernelPiece::whole};
    else
        pieces = {piece_from_string(piece)};

    std::ofstream csv;
    if (!csv_path.empty()) {
        csv.open(csv_path);
        if (!csv) throw std::runtime_error("cannot open " + csv_path);
        csv << "sigma,piece,sup_abs,box_period,boundary_mass\n";
        csv.precision(17);
    }
    json fits = json::array();
    for (KernelPiece pc : pieces) {
        DecayFit fit = decay_fit(ev, sigmas, pc);
        if (csv.is_open())
            for (size_t i = 0; i < fit.sigmas.size(); ++i)
                csv << fit.sigmas[i] << ',' << to_string(pc) << ',' << fit.sups[i] << ','
                    << 2.0 * M_PI / h << ',' << fit.boundary[i] << '\n';
        json f;
        f["piece"] = to_string(pc);
        f["slope"] = fit.slope;
        f["intercept"] = fit.intercept;
        f["residual"] = fit.residual;
        f["n_used"] = fit.n_used;
        f["envelope_constant"] = envelope_constant(fit);
        fits.push_back(f);
        std::cout << to_string(pc) << ": slope " << fit.slope << " residual " << fit.residual
                  << '\n';
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << fits.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_strichartz(double p, double r, double theta, double nu, double t_end, int n_t,
                   const std::string& eps_csv, double h, double rho_max, double froude,
                   const std::string& json_path) {
    PhaseSpec phase;
    phase.froude = froude;
    StrichartzSpec spec;
    spec.p = p;
    spec.r = r;
    spec.theta = theta;
    spec.nu = nu;
    spec.t_end = t_end;
    spec.n_t = n_t;
    if (!eps_csv.empty()) spec.epsilons = parse_list(eps_csv);
    KernelGridSpec grid;
    grid.h = h;
    if (rho_max > 0.0) grid.rho_max = rho_max;

    StrichartzReport rep = strichartz_measure(phase, spec, grid);
    if (!rep.admissible) {
        std::cerr << "inadmissible exponents: " << rep.violation << '\n';
        return kExitConfig;
    }
    json j;
    j["admissible"] = rep.admissible;
    j["predicted_exponent"] = rep.predicted_exponent;
    j["slope"] = rep.slope;
    j["intercept"] = rep.intercept;
    j["residual"] = rep.residual;
    j["epsilons"] = rep.epsilons;
    j["norms"] = rep.norms;
    j["exponents"] = {{"p", p}, {"r", r}, {"theta", theta}, {"d", spec.d}, {"q", spec.q}};
    const std::string text = j.dump(2);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << text << '\n';
    }
    std::cout << text << '\n';
    return kExitOk;
}

int cmd_validate(const std::string& cfg_path) {
    ExperimentConfig cfg = load_config(cfg_path);
    const auto violations = validate_config(cfg);
    if (violations.empty()) {
        std::cout << "config ok (eta0 = " << cfg.eta0()
                  << ", internal alpha = " << cfg.alpha_internal() << ")\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cout << v.key << ": " << v.requirement << '\n';
    return kExitConfig;
}

int cmd_sweep(const std::string& cfg_path, const std::string& csv_path,
              const std::string& json_path) {
    ExperimentConfig cfg = load_config(cfg_path);
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << v.key << ": " << v.requirement << '\n';
        return kExitConfig;
    }
    RateReport rep = epsilon_sweep(cfg);
    if (!csv_path.empty()) write_report_csv(rep, csv_path);
    if (!json_path.empty()) write_report_json(rep, json_path);
    for (const auto& [s, v] : rep.fitted_slopes)
        std::cout << "s = " << s << ": slope " << v << " vs predicted " << rep.predicted.at(s)
                  << (rep.slope_ok.at(s) ? " [ok]" : " [below]") << '\n';
    std::cout << "monotone decreasing: " << (rep.monotone_decreasing ? "yes" : "no") << '\n';
    bool any_failed = false;
    for (const auto& r : rep.rows)
        if (!r.ok) {
            std::cerr << "epsilon " << r.epsilon << " failed: " << r.error << '\n';
            any_failed = true;
        }
    return any_failed ? kExitNumerical : kExitOk;
}

int cmd_simulate(const std::string& cfg_path, const std::string& out_dir) {
    ExperimentConfig cfg = load_config(cfg_path);
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << v.key << ": " << v.requirement << '\n';
        return kExitConfig;
    }
    fs::create_directories(out_dir);
    PhysicalParams p = cfg.physics;
    p.epsilon = cfg.epsilons.front();
    const InitialData data = make_initial_data(cfg, p.epsilon);
    Trajectory traj = solve_pe(data.u0, p, cfg.solver);

    json manifest;
    manifest["params"] = {{"epsilon", p.epsilon},
                          {"froude", p.froude},
                          {"nu", p.nu},
                          {"nu_prime", p.nu_prime}};
    manifest["config"] = json::parse(config_json(cfg));
    manifest["times"] = traj.times;
    json norms;
    norms["h12_sq"] = traj.h12_sq;
    norms["h32_sq"] = traj.h32_sq;
    std::vector<double> l2;
    for (const auto& s : traj.states) l2.push_back(norm_l2(s));
    norms["l2"] = l2;
    norms["blowup_integral"] = blowup_monitor(traj);
    manifest["norms"] = norms;

    json files = json::array();
    for (size_t k = 0; k < traj.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "state_%06zu.rlb", k);
        write_snapshot((fs::path(out_dir) / name).string(), traj.states[k]);
        files.push_back(name);
    }
    manifest["snapshots"] = files;
    std::ofstream out(fs::path(out_dir) / "manifest.json");
    out << manifest.dump(2) << '\n';
    std::cout << "wrote " << traj.size() << " snapshots to " << out_dir << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for fast-rotating, highly stratified flows"};
    app.require_subcommand(1);

    // decompose
    auto* dec = app.add_subcommand("decompose", "split a snapshot into QG and oscillating parts");
    std::string dec_in, dec_qg, dec_osc;
    double dec_froude = 2.0;
    dec->add_option("--in", dec_in)->required();
    dec->add_option("--out-qg", dec_qg);
    dec->add_option("--out-osc", dec_osc);
    dec->add_option("--froude", dec_froude);

    // propagate
    auto* prop = app.add_subcommand("propagate", "exact linear flow of a snapshot");
    std::string prop_in, prop_out;
    double prop_t = 1.0, prop_eps = 0.1, prop_froude = 2.0, prop_nu = 1.0;
    prop->add_option("--in", prop_in)->required();
    prop->add_option("--out", prop_out)->required();
    prop->add_option("--t", prop_t)->required();
    prop->add_option("--epsilon", prop_eps);
    prop->add_option("--froude", prop_froude);
    prop->add_option("--nu", prop_nu);

    // kernel-decay
    auto* kd = app.add_subcommand("kernel-decay", "sup-norm decay of the oscillatory kernel");
    double kd_smin = 100.0, kd_smax = 10000.0, kd_h = 1.0 / 64.0, kd_froude = 2.0, kd_k0 = 0.25;
    double kd_bmass = std::numeric_limits<double>::infinity();
    int kd_points = 8;
    std::string kd_piece = "all", kd_csv, kd_json;
    kd->add_option("--sigma-min", kd_smin);
    kd->add_option("--sigma-max", kd_smax);
    kd->add_option("--points", kd_points);
    kd->add_option("--piece", kd_piece);
    kd->add_option("--grid-h", kd_h);
    kd->add_option("--froude", kd_froude);
    kd->add_option("--k0", kd_k0);
    kd->add_option("--max-boundary-mass", kd_bmass);
    kd->add_option("--csv", kd_csv);
    kd->add_option("--json", kd_json);

    // strichartz-scan
    auto* st = app.add_subcommand("strichartz-scan", "epsilon scaling of the free flow");
    double st_p = 2.0, st_r = 6.0, st_theta = 1.0, st_nu = 0.1, st_tend = 6.0, st_h = 1.0 / 64.0;
    double st_rhomax = 80.0, st_froude = 2.0;
    int st_nt = 49;
    std::string st_eps = "0.2,0.1,0.05,0.025", st_json;
    st->add_option("--p", st_p);
    st->add_option("--r", st_r);
    st->add_option("--theta", st_theta);
    st->add_option("--nu", st_nu);
    st->add_option("--t-end", st_tend);
    st->add_option("--n-t", st_nt);
    st->add_option("--epsilons", st_eps);
    st->add_option("--grid-h", st_h);
    st->add_option("--rho-max", st_rhomax);
    st->add_option("--froude", st_froude);
    st->add_option("--json", st_json);

    // simulate / sweep / validate
    auto* sim = app.add_subcommand("simulate", "nonlinear run with snapshot + manifest output");
    std::string sim_cfg, sim_out = "simulation";
    sim->add_option("--config", sim_cfg)->required();
    sim->add_option("--out-dir", sim_out);

    auto* sw = app.add_subcommand("sweep", "epsilon sweep with rate regression");
    std::string sw_cfg, sw_csv = "sweep.csv", sw_json = "sweep.json";
    sw->add_option("--config", sw_cfg)->required();
    sw->add_option("--out-csv", sw_csv);
    sw->add_option("--out-json", sw_json);

    auto* val = app.add_subcommand("validate", "check every admissibility constraint");
    std::string val_cfg;
    val->add_option("--config", val_cfg)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (dec->parsed()) return cmd_decompose(dec_in, dec_qg, dec_osc, dec_froude);
        if (prop->parsed())
            return cmd_propagate(prop_in, prop_out, prop_t, prop_eps, prop_froude, prop_nu);
        if (kd->parsed())
            return cmd_kernel_decay(kd_smin, kd_smax, kd_points, kd_piece, kd_h, kd_froude, kd_k0,
                                    kd_bmass, kd_csv, kd_json);
        if (st->parsed())
            return cmd_strichartz(st_p, st_r, st_theta, st_nu, st_tend, st_nt, st_eps, st_h,
                                  st_rhomax, st_froude, st_json);
        if (sim->parsed()) return cmd_simulate(sim_cfg, sim_out);
        if (sw->parsed()) return cmd_sweep(sw_cfg, sw_csv, sw_json);
        if (val->parsed()) return cmd_validate(val_cfg);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
