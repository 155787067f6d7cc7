#pragma once

#include <map>
#include <string>

#include "rsl/kernel.hpp"
#include "rsl/pe_solver.hpp"

namespace rsl {

// Ill-prepared data synthesis and epsilon-sweep configuration. delta is the
// extra regularity above 1/2, gamma the growth exponent of the oscillating
// part, alpha0 the accuracy of the quasi-geostrophic data; eta0 is derived,
// eta/eta_prime parameterize the mixed-norm composite.
struct ExperimentConfig {
    double delta = 0.2;
    double gamma = 0.05;
    double alpha0 = 1.0;
    double c0_bound = 1.0; // >= 1
    double c_lowfreq = 0.9;
    double rho = 0.5; // base QG norm = rho * c0_bound
    std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
    std::vector<double> s_values{0.5, 0.54};
    bool critical_osc_mode = true;
    double m_exponent = 0.1; // m(eps) = eps^m_exponent in critical-oscillation mode
    double eta = 0.25;
    double eta_prime = 0.1;
    double alpha3 = -1.0; // < 0 -> use the internal choice 1/2 - 2 delta
    std::uint64_t seed = 1;
    double rate_tol = 0.05;
    bool zero_oscillation = false; // matched-data mode (oscillating part off)

    TorusGrid grid{32, 16.0 * M_PI};
    PhysicalParams physics{0.1, 2.0, 1.0, 1.0}; // epsilon replaced per sweep point
    SolverConfig solver{2e-3, 2.0, 2.0 / 3.0, SolverConfig::Integrator::if_rk4, 5, 1e6};
    StrichartzSpec strichartz; // admissibility echoed by the validator
    CutoffSpec cutoffs;        // kernel-side cutoffs (validated here too)

    double eta0() const { return 0.5 * (1.0 - 2.0 * gamma / delta); }
    double alpha_internal() const { return 0.5 - 2.0 * delta; }
    double alpha3_effective() const { return alpha3 < 0.0 ? alpha_internal() : alpha3; }
    // target norm of the oscillating part at a given epsilon
    double osc_target(double eps) const {
        return critical_osc_mode ? std::pow(eps, m_exponent) * std::pow(eps, -0.5 * delta)
                             : c0_bound * std::pow(eps, -gamma);
    }
};

struct ConfigViolation {
    std::string key;
    std::string requirement;
};

// Every admissibility inequality in one place; empty list means valid.
std::vector<ConfigViolation> validate_config(const ExperimentConfig& cfg);

// Exact prediction of the convergence exponent at regularity s:
// min(alpha0, delta/2 - gamma, delta/2 - gamma + (1/2)(1/2 - s)).
double predicted_exponent(const ExperimentConfig& cfg, double s);
// composite prediction min(alpha0, (eta0 - eta/2) delta)
double predicted_composite_exponent(const ExperimentConfig& cfg);

struct InitialData {
    SpectralField omega0;  // vorticity of the limit data
    StateU uqg_tilde0;     // reconstructed limit QG state
    StateU uqg_eps0;       // perturbed QG part (norm gap = c0 eps^{alpha0} / 2)
    StateU osc0;           // oscillating part, prescribed homogeneous norm
    StateU u0;             // uqg_eps0 + osc0
};

InitialData make_initial_data(const ExperimentConfig& cfg, double eps);

struct EpsilonRow {
    double epsilon = 0.0;
    bool ok = false;
    std::string error;
    std::map<double, double> delta_es;  // s -> E^s norm of delta
    double we_strichartz = 0.0;         // ||W||_{L^2_t L^6}
    double composite_l2linf = 0.0;      // || |D|^{eta' delta} (U - Uqg) ||_{L^2 L^inf}
    double we_es_delta = 0.0;           // E^{1/2+delta} norm of W (monitor)
    double gb_integral = 0.0;           // int ||G^b||_{H^{1/2}} dt (monitor)
    double osc0_norm = 0.0;
};

struct RateReport {
    ExperimentConfig cfg;
    std::vector<EpsilonRow> rows;
    std::map<double, double> fitted_slopes;     // s -> slope of log E^s vs log eps
    std::map<double, double> predicted;         // s -> predicted exponent
    std::map<double, bool> slope_ok;            // slope >= predicted - rate_tol
    double composite_slope = 0.0;
    double composite_predicted = 0.0;
    bool monotone_decreasing = false; // delta E^{1/2} strictly decreasing in eps
    double wall_seconds = 0.0;
};

// Sweep over epsilons: the limit system runs once (shared); per epsilon the
// primitive and oscillation systems co-advance in lockstep and norms are
// accumulated on the fly. Per-epsilon failures are recorded and the sweep
// continues. Deterministic for a fixed seed.
RateReport epsilon_sweep(const ExperimentConfig& cfg);

// Least-squares slopes + comparison flags (called by epsilon_sweep; exposed
// for synthetic-report tests).
void rate_regression(RateReport& report);

// CSV table (one row per (epsilon, s)) and JSON summary.
void write_report_csv(const RateReport& report, const std::string& path);
void write_report_json(const RateReport& report, const std::string& path);
std::string report_json(const RateReport& report);

// {norm_name, indices, value} record for norm instrumentation output.
std::string norm_record_json(const std::string& name, const std::vector<double>& indices,
                             double value);

// Strict JSON config loader: unknown keys are rejected.
ExperimentConfig parse_config_json(const std::string& text);
std::string config_json(const ExperimentConfig& cfg);

} // namespace rsl
