#include "rsl/besov.hpp"

#include <cmath>
#include <stdexcept>

#include "rsl/multiplier.hpp"
#include "rsl/transform.hpp"

namespace rsl {

void BesovIndex::validate() const {
    if (!(p_space >= 1.0) || !(q_sum >= 1.0))
        throw std::invalid_argument("besov index: p, q must lie in [1, inf]");
}

double lq_sum(const std::vector<double>& terms, double q) {
    if (terms.empty()) throw std::invalid_argument("lq_sum: empty resolvable range");
    if (std::isinf(q)) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    std::vector<double> powd(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) powd[i] = std::pow(terms[i], q);
    return std::pow(pairwise_sum(powd), 1.0 / q);
}

double lp_norm_of(const SpectralField& u, double p) {
    if (p == 2.0) return norm_l2(u); // Parseval, no transform needed
    return norm_lp_phys(backward(u), p);
}

double besov_norm(const SpectralField& u, const BesovIndex& idx, const DyadicFilter& f) {
    idx.validate();
    std::vector<double> terms;
    terms.reserve(f.block_count());
    for (int j = f.j_min; j <= f.j_max; ++j) {
        const double w = std::pow(2.0, idx.s * j);
        terms.push_back(w * lp_norm_of(dyadic_block(u, j, f), idx.p_space));
    }
    return lq_sum(terms, idx.q_sum);
}

namespace {

// trapezoid quadrature of |x(t)|^a followed by the a-th root; max for a = inf
double time_norm(const std::vector<double>& x, double dt, double a) {
    if (std::isinf(a)) {
        double m = 0.0;
        for (double v : x) m = std::max(m, v);
        return m;
    }
    if (x.size() < 2) throw std::invalid_argument("time norm: need at least 2 samples");
    std::vector<double> p(x.size());
    for (size_t i = 0; i < x.size(); ++i) p[i] = std::pow(x[i], a);
    std::vector<double> w = p;
    w.front() *= 0.5;
    w.back() *= 0.5;
    return std::pow(dt * pairwise_sum(w), 1.0 / a);
}

// per-(block, sample) L^p table shared by the two time-space norms
std::vector<std::vector<double>> block_sample_table(const std::vector<SpectralField>& samples,
                                                    const BesovIndex& idx, const DyadicFilter& f) {
    std::vector<std::vector<double>> table(f.block_count(),
                                           std::vector<double>(samples.size(), 0.0));
    for (size_t t = 0; t < samples.size(); ++t)
        for (int j = f.j_min; j <= f.j_max; ++j)
            table[j - f.j_min][t] = lp_norm_of(dyadic_block(samples[t], j, f), idx.p_space);
    return table;
}

} // namespace

double chemin_lerner_norm(const std::vector<SpectralField>& samples, double dt_sample, double a,
                          const BesovIndex& idx, const DyadicFilter& f) {
    idx.validate();
    if (samples.empty()) throw std::invalid_argument("chemin_lerner_norm: no samples");
    if (!std::isinf(a) && samples.size() < 2)
        throw std::invalid_argument("chemin_lerner_norm: need >= 2 samples for finite a");
    const auto table = block_sample_table(samples, idx, f);
    std::vector<double> terms(table.size());
    for (size_t b = 0; b < table.size(); ++b) {
        const int j = f.j_min + static_cast<int>(b);
        terms[b] = std::pow(2.0, idx.s * j) * time_norm(table[b], dt_sample, a);
    }
    return lq_sum(terms, idx.q_sum);
}

double lebesgue_besov_norm(const std::vector<SpectralField>& samples, double dt_sample, double a,
                           const BesovIndex& idx, const DyadicFilter& f) {
    idx.validate();
    if (samples.empty()) throw std::invalid_argument("lebesgue_besov_norm: no samples");
    const auto table = block_sample_table(samples, idx, f);
    std::vector<double> per_sample(samples.size());
    for (size_t t = 0; t < samples.size(); ++t) {
        std::vector<double> terms(table.size());
        for (size_t b = 0; b < table.size(); ++b) {
            const int j = f.j_min + static_cast<int>(b);
            terms[b] = std::pow(2.0, idx.s * j) * table[b][t];
        }
        per_sample[t] = lq_sum(terms, idx.q_sum);
    }
    return time_norm(per_sample, dt_sample, a);
}

double energy_es_squared(const std::vector<SpectralField>& samples, double dt_sample, double s,
                         double nu) {
    if (samples.empty()) return 0.0;
    double sup2 = 0.0;
    std::vector<double> diss(samples.size());
    for (size_t t = 0; t < samples.size(); ++t) {
        const double hs = norm_hs(samples[t], s);
        sup2 = std::max(sup2, hs * hs);
        const double h1 = norm_hs(samples[t], s + 1.0);
        diss[t] = h1 * h1;
    }
    double integral = 0.0;
    if (samples.size() >= 2) {
        std::vector<double> w = diss;
        w.front() *= 0.5;
        w.back() *= 0.5;
        integral = dt_sample * pairwise_sum(w);
    }
    return sup2 + nu * integral;
}

double energy_es(const std::vector<SpectralField>& samples, double dt_sample, double s, double nu) {
    return std::sqrt(energy_es_squared(samples, dt_sample, s, nu));
}

double interpolation_ratio(const SpectralField& u, double s, double a, double b,
                           const DyadicFilter& f) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("interpolation_ratio: a, b > 0");
    const double lhs = besov_norm(u, {s, 2.0, 1.0}, f);
    const double lo = norm_hs(u, s - a);
    const double hi = norm_hs(u, s + b);
    const double rhs = std::pow(lo, b / (a + b)) * std::pow(hi, a / (a + b));
    if (rhs == 0.0) throw std::domain_error("interpolation_ratio: zero field");
    return lhs / rhs;
}

SpectralField bilinear_remainder_ms(const SpectralField& f, const SpectralField& g, double s) {
    if (!(s > 0.0) || !(s < 1.0))
        throw std::invalid_argument("bilinear_remainder_ms: s must lie in (0,1)");
    if (f.comps != 1 || g.comps != 1)
        throw std::invalid_argument("bilinear_remainder_ms: scalar fields expected");
    SpectralField fg = dealiased_product(f, g);
    SpectralField out = fractional_laplacian(fg, s);
    out -= dealiased_product(fractional_laplacian(f, s), g);
    out -= dealiased_product(f, fractional_laplacian(g, s));
    return out;
}

} // namespace rsl
