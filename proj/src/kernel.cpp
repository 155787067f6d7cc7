#include "rsl/kernel.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "rsl/multiplier.hpp"

namespace rsl {

void CutoffSpec::validate() const {
    if (!(k0 > 0.0) || !(k0 < 3.0 / (8.0 * std::sqrt(2.0))))
        throw std::invalid_argument("cutoff k0 must lie in (0, 3/(8 sqrt 2))");
}

const char* to_string(KernelPiece p) {
    switch (p) {
        case KernelPiece::whole: return "whole";
        case KernelPiece::small_vertical: return "piece1";
        case KernelPiece::small_horizontal: return "piece2";
        case KernelPiece::off_axes: return "piece3";
    }
    return "?";
}

KernelEvaluator::KernelEvaluator(PhaseSpec phase, CutoffSpec cutoffs, KernelGridSpec grid)
    : phase_(std::move(phase)), cutoffs_(std::move(cutoffs)), grid_(grid) {
    phase_.validate();
    cutoffs_.validate();
    if (!(grid_.h > 0.0) || !(grid_.rho_spacing > 0.0))
        throw std::invalid_argument("kernel grid: spacings must be positive");

    const double period = 2.0 * M_PI / grid_.h;
    const double rho_max = grid_.rho_max > 0.0 ? grid_.rho_max : 0.5 * period;
    for (double rho = 0.0; rho <= rho_max; rho += grid_.rho_spacing) rhos_.push_back(rho);
    (void)subgrid(1);
}

const KernelEvaluator::SubGrid& KernelEvaluator::subgrid(int refine) const {
    for (const auto& sg : subgrids_)
        if (sg->refine == refine) return *sg;

    auto sg = std::make_unique<SubGrid>();
    sg->refine = refine;
    const double h = grid_.h / refine;
    const double support = 3.0; // outer radius of the phi1 annulus
    for (double r = 0.5 * h; r < support; r += h) sg->radii.push_back(r);
    const int mmax = static_cast<int>(std::floor(support / h));
    for (int m = -mmax; m <= mmax; ++m) sg->heights.push_back(m * h);
    const int n_m = static_cast<int>(sg->heights.size());
    sg->n_z_out = 1;
    while (sg->n_z_out < grid_.z_oversample * n_m) sg->n_z_out *= 2;

    sg->j0.resize(rhos_.size() * sg->radii.size());
    #pragma omp parallel for schedule(static)
    for (long l = 0; l < static_cast<long>(rhos_.size()); ++l)
        for (size_t k = 0; k < sg->radii.size(); ++k)
            sg->j0[l * sg->radii.size() + k] = std::cyl_bessel_j(0.0, rhos_[l] * sg->radii[k]);

    subgrids_.push_back(std::move(sg));
    return *subgrids_.back();
}

int KernelEvaluator::refinement_for(double sigma) const {
    // Fresnel-zone resolution: near a stationary point the phase curvature is
    // O(sigma); keep the cell size below a fixed fraction of the zone width
    // sqrt(2 pi / (sigma |D2 phase|)). The group-velocity window already caps
    // the phase rate of every retained cell, so small powers of two suffice.
    if (sigma == 0.0) return 1;
    const double curvature = 6.0; // coarse bound on |D2 phase| over the annulus
    const double zone = std::sqrt(2.0 * M_PI / (std::abs(sigma) * phase_.sigma_scale() * curvature));
    int r = 1;
    while (grid_.h / r > 0.35 * zone && r < 16) r *= 2;
    return r;
}

double KernelEvaluator::piece_cutoff(KernelPiece piece, double xi_h, double xi_3) const {
    if (piece == KernelPiece::whole) return 1.0;
    const double cz = cutoffs_.bump.chi(std::abs(xi_3) / cutoffs_.k0);
    const double ch = cutoffs_.bump.chi(std::abs(xi_h) / cutoffs_.k0);
    switch (piece) {
        case KernelPiece::small_vertical: return cz * (1.0 - ch);
        case KernelPiece::small_horizontal: return ch * (1.0 - cz);
        case KernelPiece::off_axes: return (1.0 - cz) * (1.0 - ch);
        default: return 1.0;
    }
}

KernelEvaluator::FieldSamples KernelEvaluator::synthesize(const SymbolFn& weight, double scale,
                                                          int refine) const {
    const SubGrid& sg = subgrid(refine);
    const size_t n_r = sg.radii.size(), n_m = sg.heights.size();
    std::vector<cplx> weights(n_r * n_m);
    const double h = grid_.h / refine * scale;
    #pragma omp parallel for schedule(static)
    for (long k = 0; k < static_cast<long>(n_r); ++k) {
        const double r = sg.radii[k] * scale;
        for (size_t m = 0; m < n_m; ++m) {
            const double x3 = sg.heights[m] * scale;
            weights[k * n_m + m] = 2.0 * M_PI * h * h * r * weight(r, x3);
        }
    }
    return run(sg, weights, scale);
}

KernelEvaluator::FieldSamples KernelEvaluator::run(const SubGrid& sg,
                                                   const std::vector<cplx>& weights,
                                                   double scale) const {
    const size_t n_r = sg.radii.size(), n_m = sg.heights.size(), n_rho = rhos_.size();
    const int nz = sg.n_z_out;

    // G[l][m] = sum_k J0(rho_l r_k) W[k][m]
    std::vector<cplx> G(n_rho * n_m, cplx(0.0));
    #pragma omp parallel for schedule(static)
    for (long l = 0; l < static_cast<long>(n_rho); ++l) {
        cplx* row = &G[l * n_m];
        const double* j0row = &sg.j0[l * n_r];
        for (size_t k = 0; k < n_r; ++k) {
            const double c = j0row[k];
            const cplx* w = &weights[k * n_m];
            for (size_t m = 0; m < n_m; ++m) row[m] += c * w[m];
        }
    }

    // z synthesis: K(rho, z_l) = sum_m G[rho][m] e^{i z_l xi3(m)}, zero-padded FFT
    FieldSamples out;
    out.n_rho = static_cast<int>(n_rho);
    out.n_z = nz;
    out.drho = grid_.rho_spacing / scale;
    out.dz = (2.0 * M_PI * sg.refine / (grid_.h * scale)) / nz;
    out.values.assign(n_rho * nz, cplx(0.0));

    fftw_plan plan;
    std::vector<cplx> buf(nz);
    {
        // plan once; new-array execution is safe for identically aligned buffers
        plan = fftw_plan_dft_1d(nz, reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    const int mmax = (static_cast<int>(n_m) - 1) / 2;
    for (size_t l = 0; l < n_rho; ++l) {
        std::fill(buf.begin(), buf.end(), cplx(0.0));
        for (size_t m = 0; m < n_m; ++m) {
            const int mm = static_cast<int>(m) - mmax; // integer xi3 index
            buf[(mm + nz) % nz] = G[l * n_m + m];
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                         reinterpret_cast<fftw_complex*>(buf.data()));
        std::copy(buf.begin(), buf.end(), out.values.begin() + l * nz);
    }
    fftw_destroy_plan(plan);
    return out;
}

double KernelEvaluator::FieldSamples::sup() const {
    double best = 0.0;
    long arg = 0;
    for (long i = 0; i < static_cast<long>(values.size()); ++i) {
        const double a = std::abs(values[i]);
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (best == 0.0) return 0.0;
    // parabolic refinement around the grid argmax, each direction separately
    const long l = arg / n_z, m = arg % n_z;
    auto val = [&](long ll, long mm) -> double {
        if (ll < 0 || ll >= n_rho) return -1.0;
        return std::abs(values[ll * n_z + ((mm + n_z) % n_z)]);
    };
    double refined = best;
    for (int dir = 0; dir < 2; ++dir) {
        const double ym = dir == 0 ? val(l - 1, m) : val(l, m - 1);
        const double yp = dir == 0 ? val(l + 1, m) : val(l, m + 1);
        if (ym < 0.0 || yp < 0.0) continue;
        const double denom = 2.0 * best - yp - ym;
        if (denom > 0.0) {
            const double corr = (yp - ym) * (yp - ym) / (8.0 * denom);
            refined = std::max(refined, best + corr);
        }
    }
    return refined;
}

double KernelEvaluator::FieldSamples::lr_norm(double r) const {
    if (std::isinf(r)) return sup();
    std::vector<double> terms(values.size());
    for (long l = 0; l < n_rho; ++l) {
        const double rho = l * drho;
        // annular cell area around each radial node
        const double area = l == 0 ? M_PI * 0.25 * drho * drho : 2.0 * M_PI * rho * drho;
        for (long m = 0; m < n_z; ++m)
            terms[l * n_z + m] = area * dz * std::pow(std::abs(values[l * n_z + m]), r);
    }
    return std::pow(pairwise_sum(terms), 1.0 / r);
}

KernelSample KernelEvaluator::snapshot(double sigma, KernelPiece piece, int level,
                                       bool keep_values) const {
    if (piece != KernelPiece::whole && level != 0)
        throw std::invalid_argument("kernel pieces are defined at level 0 only");
    const double scale = std::exp2(level);
    const double sig_scale = phase_.sigma_scale();
    const double gv_limit =
        grid_.gv_frac > 0.0 ? grid_.gv_frac * M_PI / (grid_.h * scale) : 0.0;
    FieldSamples f = synthesize(
        [&](double xi_h, double xi_3) -> cplx {
            const double rad = std::hypot(xi_h, xi_3) / scale;
            double amp = cutoffs_.bump.phi1(rad) * piece_cutoff(piece, xi_h, xi_3);
            if (amp == 0.0) return cplx(0.0);
            if (gv_limit > 0.0 && sigma != 0.0) {
                const double speed =
                    std::abs(sigma) * sig_scale * phase_.gradient_norm_cyl(xi_h, xi_3);
                amp *= cutoffs_.bump.chi(speed / gv_limit);
                if (amp == 0.0) return cplx(0.0);
            }
            return amp * std::exp(cplx(0.0, sigma * sig_scale * phase_.value_cyl(xi_h, xi_3)));
        },
        scale, refinement_for(sigma));

    KernelSample s;
    s.sigma = sigma;
    s.piece = piece;
    s.level = level;
    s.box_period = 2.0 * M_PI / (grid_.h * scale);
    s.sup_abs = f.sup();

    // boundary monitor relative to the nominal box (half-period in z)
    double bmax = 0.0;
    for (long l = 0; l < f.n_rho; ++l)
        for (long m = 0; m < f.n_z; ++m) {
            const double rho = l * f.drho;
            const double z = m * f.dz;
            const double zdist = std::min(z, f.n_z * f.dz - z);
            const bool boundary = rho >= grid_.boundary_frac * (f.n_rho - 1) * f.drho ||
                                  zdist >= grid_.boundary_frac * 0.5 * s.box_period;
            if (boundary) bmax = std::max(bmax, std::abs(f.values[l * f.n_z + m]));
        }
    s.boundary_mass = s.sup_abs > 0.0 ? bmax / s.sup_abs : 0.0;
    if (s.boundary_mass > grid_.max_boundary_mass)
        throw NumericalError("kernel snapshot: sigma too large for the box (boundary mass " +
                             std::to_string(s.boundary_mass) + ")");

    if (keep_values) {
        s.n_rho = f.n_rho;
        s.n_z = f.n_z;
        s.drho = f.drho;
        s.dz = f.dz;
        s.values = std::move(f.values);
    }
    return s;
}

void linear_fit(std::span<const double> x, std::span<const double> y, double& slope,
                double& intercept, double& residual) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    slope = (n * sxy - sx * sy) / det;
    intercept = (sy - slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - slope * x[i] - intercept;
        ss += r * r;
    }
    residual = std::sqrt(ss / n);
}

DecayFit decay_fit(const KernelEvaluator& ev, std::span<const double> sigmas, KernelPiece piece) {
    if (sigmas.size() < 6) throw std::invalid_argument("decay_fit: need >= 6 sigma values");
    for (size_t i = 1; i < sigmas.size(); ++i)
        if (!(sigmas[i] > sigmas[i - 1]))
            throw std::invalid_argument("decay_fit: sigmas must increase");
    if (!(sigmas.back() >= 100.0 * sigmas.front()))
        throw std::invalid_argument("decay_fit: sigmas must span at least two decades");

    DecayFit fit;
    fit.piece = piece;
    std::vector<double> lx, ly;
    for (double s : sigmas) {
        const KernelSample ks = ev.snapshot(s, piece);
        fit.sigmas.push_back(s);
        fit.sups.push_back(ks.sup_abs);
        fit.boundary.push_back(ks.boundary_mass);
        if (ks.sup_abs > 0.0) {
            lx.push_back(std::log(s));
            ly.push_back(std::log(ks.sup_abs));
        }
    }
    fit.n_used = static_cast<int>(lx.size());
    if (fit.n_used < 4) throw NumericalError("decay_fit: too few measurable points");
    linear_fit(lx, ly, fit.slope, fit.intercept, fit.residual);
    return fit;
}

double envelope_constant(const DecayFit& fit) {
    double c = 0.0;
    for (size_t i = 0; i < fit.sigmas.size(); ++i)
        c = std::max(c, fit.sups[i] / std::min(1.0, 1.0 / std::sqrt(fit.sigmas[i])));
    return c;
}

SpectralField lj_apply(double sigma, int j, const SpectralField& g, const PhaseSpec& phase,
                       const BumpProfile& bump) {
    const double scale = std::exp2(-j);
    const double sig_scale = phase.sigma_scale();
    return apply_multiplier(g, [&](const Vec3& xi) {
        const double amp = bump.phi1(scale * norm(xi));
        if (amp == 0.0) return cplx(0.0);
        return amp * std::exp(cplx(0.0, sigma * sig_scale * phase.value(xi)));
    });
}

std::string strichartz_admissibility(double p, double r, double theta) {
    if (!(r >= 2.0)) return "integrability index r must satisfy r >= 2";
    if (!(theta >= 0.0 && theta <= 1.0)) return "interpolation weight theta must lie in [0,1]";
    const double cap = theta * (1.0 - 2.0 / r);
    if (cap > 0.0 && !(p <= 4.0 / cap + 1e-12))
        return "time exponent p must satisfy p <= 4 / (theta (1 - 2/r))";
    if (!(p >= 1.0)) return "time exponent p must satisfy p >= 1";
    return {};
}

StrichartzReport strichartz_measure(const PhaseSpec& phase, const StrichartzSpec& spec,
                                    const KernelGridSpec& grid) {
    StrichartzReport rep;
    rep.violation = strichartz_admissibility(spec.p, spec.r, spec.theta);
    rep.admissible = rep.violation.empty();
    rep.predicted_exponent = spec.theta / 4.0 * (1.0 - 2.0 / spec.r);
    if (!rep.admissible) return rep;
    if (spec.epsilons.size() < 2)
        throw std::invalid_argument("strichartz_measure: need >= 2 epsilons");

    CutoffSpec cut; // profile carrier; pieces unused here
    KernelEvaluator ev(phase, cut, grid);
    const double sig_scale = phase.sigma_scale();
    const double gv_limit = grid.gv_frac > 0.0 ? grid.gv_frac * M_PI / grid.h : 0.0;

    for (double eps : spec.epsilons) {
        // composite time grid: geometric from the O(eps) decorrelation layer
        // out to t_end, capped at the uniform spacing of the requested n_t
        std::vector<double> times{0.0};
        const double cap = spec.t_end / (spec.n_t - 1);
        for (double t = eps / 8.0; t < spec.t_end; t = std::min(1.2 * t, t + cap))
            times.push_back(t);
        times.push_back(spec.t_end);
        const int n_t = static_cast<int>(times.size());
        std::vector<double> tnorm(n_t);
        for (int it = 0; it < n_t; ++it) {
            const double t = times[it];
            auto f = ev.synthesize([&](double xi_h, double xi_3) -> cplx {
                const double rad = std::hypot(xi_h, xi_3);
                double amp = cut.bump.phi1(rad);
                if (amp == 0.0) return cplx(0.0);
                if (gv_limit > 0.0 && t > 0.0) {
                    const double speed =
                        (t / eps) * sig_scale * phase.gradient_norm_cyl(xi_h, xi_3);
                    amp *= cut.bump.chi(speed / gv_limit);
                    if (amp == 0.0) return cplx(0.0);
                }
                const double ph = (t / eps) * sig_scale * phase.value_cyl(xi_h, xi_3);
                return amp * std::exp(-spec.nu * t * rad * rad) * std::exp(cplx(0.0, ph));
            });
            tnorm[it] = f.lr_norm(spec.r);
        }
        // L^p in time by trapezoid on |.|^p over the nonuniform grid
        std::vector<double> w(tnorm.size(), 0.0);
        for (size_t i = 0; i + 1 < tnorm.size(); ++i) {
            const double h = times[i + 1] - times[i];
            w[i] += 0.5 * h * std::pow(tnorm[i], spec.p);
            w[i + 1] += 0.5 * h * std::pow(tnorm[i + 1], spec.p);
        }
        rep.epsilons.push_back(eps);
        rep.norms.push_back(std::pow(pairwise_sum(w), 1.0 / spec.p));
    }

    std::vector<double> lx, ly;
    for (size_t i = 0; i < rep.epsilons.size(); ++i) {
        lx.push_back(std::log(rep.epsilons[i]));
        ly.push_back(std::log(rep.norms[i]));
    }
    linear_fit(lx, ly, rep.slope, rep.intercept, rep.residual);
    return rep;
}

} // namespace rsl
