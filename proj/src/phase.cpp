#include "rsl/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsl {

void PhaseSpec::validate() const {
    if (kind == Kind::stratified) {
        if (!(froude > 0.0) || froude == 1.0)
            throw std::invalid_argument("stratified phase needs F > 0, F != 1");
    }
}

double PhaseSpec::value_cyl(double xi_h, double xi_3) const {
    const double r2 = xi_h * xi_h + xi_3 * xi_3;
    if (r2 == 0.0) throw std::invalid_argument("phase undefined at xi = 0");
    if (kind == Kind::stratified)
        return std::sqrt(xi_h * xi_h + froude * froude * xi_3 * xi_3) / std::sqrt(r2);
    return xi_3 / std::sqrt(r2);
}

double PhaseSpec::value(const Vec3& xi) const {
    return value_cyl(std::hypot(xi[0], xi[1]), xi[2]);
}

double PhaseSpec::gradient_norm_cyl(double xi_h, double xi_3) const {
    const double d2 = xi_h * xi_h + xi_3 * xi_3;
    if (d2 == 0.0) throw std::invalid_argument("phase gradient undefined at xi = 0");
    if (kind == Kind::stratified) {
        const double nF = std::sqrt(xi_h * xi_h + froude * froude * xi_3 * xi_3);
        return std::abs(froude * froude - 1.0) * xi_h * std::abs(xi_3) / (nF * d2);
    }
    return xi_h / d2;
}

double PhaseSpec::sigma_scale() const {
    return kind == Kind::stratified ? 1.0 / froude : 1.0;
}

Mat3 hessian_bF(const Vec3& xi, double froude) {
    const double k2 = norm2(xi);
    if (k2 == 0.0) throw std::invalid_argument("hessian_bF: xi = 0");
    const double F2 = froude * froude;
    const double nF = normF(xi, froude);
    const double pref = (1.0 - F2) / (std::pow(k2, 1.5) * nF);
    const double AF = 3.0 / k2 + 1.0 / (nF * nF);
    const double BF = 3.0 / k2 + F2 / (nF * nF);
    const double x1 = xi[0], x2 = xi[1], x3 = xi[2];
    Mat3 H;
    H[0][0] = pref * (x3 * x3 * (1.0 - x1 * x1 * AF));
    H[0][1] = pref * (-x1 * x2 * x3 * x3 * AF);
    H[0][2] = pref * (x1 * x3 * (2.0 - x3 * x3 * BF));
    H[1][0] = H[0][1];
    H[1][1] = pref * (x3 * x3 * (1.0 - x2 * x2 * AF));
    H[1][2] = pref * (x2 * x3 * (2.0 - x3 * x3 * BF));
    H[2][0] = H[0][2];
    H[2][1] = H[1][2];
    H[2][2] = pref * (-(x1 * x1 + x2 * x2) * (1.0 - x3 * x3 * BF));
    return H;
}

std::array<double, 3> hessian_bF_eigenvalues(const Vec3& xi, double froude) {
    const double k2 = norm2(xi);
    if (k2 == 0.0) throw std::invalid_argument("hessian_bF_eigenvalues: xi = 0");
    const double F2 = froude * froude;
    const double nF2 = normF2(xi, froude);
    const double pref = (1.0 - F2) / (std::pow(k2, 1.5) * std::sqrt(nF2));
    const double x3 = xi[2];
    const double h2 = xi[0] * xi[0] + xi[1] * xi[1];
    const double D = (F2 * x3 * x3 * x3 * x3 - h2 * h2) / nF2;
    const double R = std::sqrt(D * D + 4.0 * x3 * x3 * h2);
    return {pref * x3 * x3, pref * 0.5 * (D + R), pref * 0.5 * (D - R)};
}

std::array<double, 3> hessian_rotating_eigenvalues(const Vec3& xi) {
    const double k2 = norm2(xi);
    if (k2 == 0.0) throw std::invalid_argument("hessian_rotating_eigenvalues: xi = 0");
    const double pref = 1.0 / std::pow(k2, 1.5);
    const double x3 = xi[2];
    const double h2 = xi[0] * xi[0] + xi[1] * xi[1];
    const double R = std::sqrt(4.0 * h2 + x3 * x3);
    return {pref * -x3, pref * 0.5 * (-x3 + R), pref * 0.5 * (-x3 - R)};
}

int zone_classify(const Vec3& xi, const PhaseSpec& phase) {
    const std::array<double, 3> ev = phase.kind == PhaseSpec::Kind::stratified
                                         ? hessian_bF_eigenvalues(xi, phase.froude)
                                         : hessian_rotating_eigenvalues(xi);
    double scale = 0.0;
    for (double e : ev) scale = std::max(scale, std::abs(e));
    int nonzero = 0;
    for (double e : ev)
        if (std::abs(e) > 1e-12 * std::max(scale, 1e-300)) ++nonzero;
    return nonzero;
}

Mat3 hessian_fd(const Vec3& xi, const PhaseSpec& phase, double step) {
    Mat3 H;
    auto at = [&](double d0, double d1, double d2) {
        return phase.value({xi[0] + d0, xi[1] + d1, xi[2] + d2});
    };
    const double f0 = at(0, 0, 0);
    for (int i = 0; i < 3; ++i) {
        Vec3 ei{0, 0, 0};
        ei[i] = step;
        H[i][i] = (at(i == 0 ? step : 0, i == 1 ? step : 0, i == 2 ? step : 0) - 2.0 * f0 +
                   at(i == 0 ? -step : 0, i == 1 ? -step : 0, i == 2 ? -step : 0)) /
                  (step * step);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Vec3 dp{0, 0, 0}, dm{0, 0, 0};
            dp[i] = step;
            dp[j] = step;
            dm[i] = step;
            dm[j] = -step;
            const double fpp = at(dp[0], dp[1], dp[2]);
            const double fmm = at(-dp[0], -dp[1], -dp[2]);
            const double fpm = at(dm[0], dm[1], dm[2]);
            const double fmp = at(-dm[0], -dm[1], -dm[2]);
            H[i][j] = H[j][i] = (fpp + fmm - fpm - fmp) / (4.0 * step * step);
        }
    return H;
}

std::array<double, 3> symmetric_eigenvalues(const Mat3& m) {
    // trigonometric solution of the characteristic cubic
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    Mat3 b = m;
    for (int i = 0; i < 3; ++i) b[i][i] -= q;
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p2 += b[i][j] * b[i][j];
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return {q, q, q};
    double det = 0.0;
    det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
          b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
          b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = det / (2.0 * p * p * p);
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> ev{e1, e2, e3};
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace rsl
