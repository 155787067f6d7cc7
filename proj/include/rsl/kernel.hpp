#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsl/phase.hpp"
#include "rsl/spectral_field.hpp"

namespace rsl {

// Thrown when a numerical validity window is violated (kernel mass reaching
// the box boundary, degenerate fits, unstable runs).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frequency-space cutoffs that split the annulus into zones with a known
// number of nonzero phase-Hessian eigenvalues. k0 must stay below 3/(8 sqrt 2)
// so the small-vertical/small-horizontal corner misses the annulus entirely.
struct CutoffSpec {
    double k0 = 0.25;
    BumpProfile bump{0.5};
    void validate() const;
};

enum class KernelPiece {
    whole,
    small_vertical,   // chi(|xi3|/k0) (1 - chi(|xi_h|/k0)): one nonzero eigenvalue
    small_horizontal, // chi(|xi_h|/k0) (1 - chi(|xi3|/k0)): two nonzero
    off_axes,         // (1-chi)(1-chi): three nonzero
};

const char* to_string(KernelPiece p);

// Discretization of the oscillatory integral. The integrand is exactly
// axisymmetric, so the kernel is synthesized on a (rho, z) half-plane:
// uniform xi-sampling at spacing h (midpoint in the radial direction),
// a Bessel J0 sum in rho and an FFT in z. Sampling at spacing h makes the
// synthesized field z-periodic with period 2 pi / h; rho is not periodized.
struct KernelGridSpec {
    double h = 1.0 / 64.0;
    double rho_spacing = 0.25;
    double rho_max = 0.0;      // 0 -> half the z-period
    int z_oversample = 4;      // zero-padding factor for the z grid
    double boundary_frac = 0.92;
    double max_boundary_mass = std::numeric_limits<double>::infinity();
    // Group-velocity window: smoothly drop spectral cells whose stationary
    // point sigma * grad(phase) falls outside this fraction of the half-box.
    // Such cells are undersampled at spacing h (the phase turns faster than
    // one sample) and would alias O(1) noise across the box; their true
    // contribution inside the box is non-stationary and negligible. The
    // reported sup stays a lower bound on the whole-space L-infinity norm.
    // Set to 0 to disable.
    double gv_frac = 0.70;
};

struct KernelSample {
    double sigma = 0.0;
    KernelPiece piece = KernelPiece::whole;
    int level = 0;
    double box_period = 0.0;
    double sup_abs = 0.0;       // max |K| over samples, parabolically refined
    double boundary_mass = 0.0; // max |K| near the box boundary, relative to sup
    // raw samples, row-major [rho][z], kept only on request
    int n_rho = 0, n_z = 0;
    double drho = 0.0, dz = 0.0;
    std::vector<cplx> values;
};

class KernelEvaluator {
public:
    KernelEvaluator(PhaseSpec phase, CutoffSpec cutoffs, KernelGridSpec grid = {});

    // K(sigma) for one cutoff piece at dyadic level j (pieces only at j = 0;
    // the whole kernel at level j is the rescaled level-0 kernel).
    KernelSample snapshot(double sigma, KernelPiece piece, int level = 0,
                          bool keep_values = false) const;

    const KernelGridSpec& grid() const { return grid_; }
    const PhaseSpec& phase() const { return phase_; }
    const CutoffSpec& cutoffs() const { return cutoffs_; }

    // samples of f on the (rho, z) grid for a general annulus-supported
    // axisymmetric symbol: f(x) = int e^{i x.xi} w(xi_h, xi3) dxi
    struct FieldSamples {
        int n_rho = 0, n_z = 0;
        double drho = 0.0, dz = 0.0;
        std::vector<cplx> values;
        double lr_norm(double r) const; // L^r over the cylinder, axisymmetric weight
        double sup() const;
    };
    using SymbolFn = std::function<cplx(double, double)>;
    FieldSamples synthesize(const SymbolFn& weight, double scale = 1.0, int refine = 1) const;

    // power-of-two internal oversampling needed to resolve the stationary
    // Fresnel zones at this sigma (1 when the nominal spacing suffices)
    int refinement_for(double sigma) const;

private:
    PhaseSpec phase_;
    CutoffSpec cutoffs_;
    KernelGridSpec grid_;

    // xi-space sampling at spacing h/refine, with the matching Bessel table
    struct SubGrid {
        int refine = 1;
        std::vector<double> radii;   // xi_h nodes (midpoint)
        std::vector<double> heights; // xi_3 nodes (integer multiples)
        int n_z_out = 0;
        std::vector<double> j0; // [rho][r]
    };

    std::vector<double> rhos_; // output radial nodes (shared by all subgrids)
    mutable std::vector<std::unique_ptr<SubGrid>> subgrids_;

    const SubGrid& subgrid(int refine) const;
    double piece_cutoff(KernelPiece piece, double xi_h, double xi_3) const;
    FieldSamples run(const SubGrid& sg, const std::vector<cplx>& weights, double scale) const;
};

// Least-squares fit of log sup|K(sigma)| against log sigma.
struct DecayFit {
    KernelPiece piece = KernelPiece::whole;
    double slope = 0.0;
    double intercept = 0.0; // log of the fitted constant
    double residual = 0.0;  // rms of log-residuals
    int n_used = 0;         // points entering the fit; sup = 0 rows (kernel
                            // fully left the box) are reported but not fitted
    std::vector<double> sigmas, sups, boundary;
};

// Requires >= 6 sigmas spanning >= 2 decades, increasing.
DecayFit decay_fit(const KernelEvaluator& ev, std::span<const double> sigmas, KernelPiece piece);

// min(1, sigma^{-1/2}) envelope constant over a sweep: max of
// sup|K|(sigma) / min(1, sigma^{-1/2}).
double envelope_constant(const DecayFit& fit);

// Torus-side frequency-localized wave operator: multiplier
// e^{i sigma_scale * sigma * p(xi)} phi1(2^{-j} |xi|).
SpectralField lj_apply(double sigma, int j, const SpectralField& g, const PhaseSpec& phase,
                       const BumpProfile& bump = {});

// Strichartz scaling probe for the free flow e^{nu t Laplacian} e^{i (t/eps)
// phase}: frequency-localized axisymmetric profile, L^p_t L^r_x norms by
// quadrature per epsilon, log-log slope across epsilons.
struct StrichartzSpec {
    double p = 2.0, r = 6.0, theta = 1.0;
    double d = 0.0, q = 2.0; // echoed in reports
    double nu = 0.1;
    double t_end = 6.0;
    int n_t = 49;
    std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
};

struct StrichartzReport {
    bool admissible = false;
    std::string violation;
    double predicted_exponent = 0.0; // (theta/4) (1 - 2/r)
    std::vector<double> epsilons, norms;
    double slope = 0.0, intercept = 0.0, residual = 0.0;
};

// Validation only (shared with config checking): empty string if admissible.
std::string strichartz_admissibility(double p, double r, double theta);

StrichartzReport strichartz_measure(const PhaseSpec& phase, const StrichartzSpec& spec,
                                    const KernelGridSpec& grid = {});

// Simple least-squares slope of y against x; residual is rms.
void linear_fit(std::span<const double> x, std::span<const double> y, double& slope,
                double& intercept, double& residual);

} // namespace rsl
