#include "rsl/random_fields.hpp"

#include "rsl/leray.hpp"
#include "rsl/multiplier.hpp"
#include "rsl/transform.hpp"

namespace rsl {

SpectralField random_real_field(const TorusGrid& g, int comps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    PhysicalField u(g, comps);
    for (auto& x : u.a) x = cplx(dist(rng), 0.0);
    return forward(u);
}

SpectralField shaped_random_field(const TorusGrid& g, int comps, std::uint64_t seed,
                                  double slope, double k_cut, bool band_limit_two_thirds) {
    SpectralField f = random_real_field(g, comps, seed);
    const int kmax = g.n / 3; // 2/3-rule band
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const long m = g.index(i1, i2, i3);
                if (m == 0) {
                    for (int c = 0; c < comps; ++c) f.at(m, c) = 0.0;
                    continue;
                }
                if (band_limit_two_thirds &&
                    (std::abs(g.wrap(i1)) > kmax || std::abs(g.wrap(i2)) > kmax ||
                     std::abs(g.wrap(i3)) > kmax)) {
                    for (int c = 0; c < comps; ++c) f.at(m, c) = 0.0;
                    continue;
                }
                const double k = norm(g.freq(i1, i2, i3));
                const double w = std::pow(k, -slope) * std::exp(-(k / k_cut) * (k / k_cut));
                for (int c = 0; c < comps; ++c) f.at(m, c) *= w;
            }
    return f;
}

StateU random_state(const TorusGrid& g, std::uint64_t seed, double slope, double k_cut_frac) {
    const double k_cut = k_cut_frac * g.dk() * (g.n / 2);
    SpectralField f = shaped_random_field(g, 4, seed, slope, k_cut);
    return leray_project(f);
}

} // namespace rsl
