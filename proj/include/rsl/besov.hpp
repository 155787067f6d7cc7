#pragma once

#include <vector>

#include "rsl/dyadic.hpp"
#include "rsl/spectral_field.hpp"

namespace rsl {

// (s, p, q) triple of a homogeneous Besov space B^s_{p,q}.
struct BesovIndex {
    double s = 0.0;
    double p_space = 2.0; // integrability, may be inf
    double q_sum = 2.0;   // summation exponent over blocks, may be inf

    void validate() const;
};

// l^q of weighted per-block contributions; shared by the norms below.
double lq_sum(const std::vector<double>& terms, double q);

// || 2^{js} ||Delta_j u||_{L^p} ||_{l^q}, block L^p norms taken on physical
// samples. u should be mean-free.
double besov_norm(const SpectralField& u, const BesovIndex& idx, const DyadicFilter& f);

// Chemin-Lerner time-space norm on uniformly sampled data: the L^a norm in
// time of each block is taken before the weighted l^q sum over blocks.
// Trapezoid quadrature on |.|^a; a = inf uses the max over samples.
double chemin_lerner_norm(const std::vector<SpectralField>& samples, double dt_sample, double a,
                          const BesovIndex& idx, const DyadicFilter& f);

// Plain L^a_t Besov norm (time-norm after the block sum), same quadrature.
double lebesgue_besov_norm(const std::vector<SpectralField>& samples, double dt_sample, double a,
                           const BesovIndex& idx, const DyadicFilter& f);

// Squared energy norm: sup_t ||u||_{H^s}^2 + nu * integral ||u||_{H^{s+1}}^2.
double energy_es_squared(const std::vector<SpectralField>& samples, double dt_sample, double s,
                         double nu);
double energy_es(const std::vector<SpectralField>& samples, double dt_sample, double s, double nu);

// ||u||_{B^s_{2,1}} / ( ||u||_{H^{s-a}}^{b/(a+b)} ||u||_{H^{s+b}}^{a/(a+b)} );
// bounded uniformly over mean-free fields.
double interpolation_ratio(const SpectralField& u, double s, double a, double b,
                           const DyadicFilter& f);

// Defect of the fractional Leibniz rule,
//   |D|^s (fg) - (|D|^s f) g - f (|D|^s g),
// products pseudo-spectral with 2/3 dealiasing; s in (0,1), scalar fields.
SpectralField bilinear_remainder_ms(const SpectralField& f, const SpectralField& g, double s);

// L^p norm of a spectral field via its collocation samples.
double lp_norm_of(const SpectralField& u, double p);

} // namespace rsl
