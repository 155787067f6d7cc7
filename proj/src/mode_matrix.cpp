#include "rsl/mode_matrix.hpp"

#include <stdexcept>

namespace rsl {

Matrix4cd assemble_B(const Vec3& xi, const PhysicalParams& p) {
    if (norm2(xi) == 0.0) throw std::invalid_argument("assemble_B: xi = 0");
    p.require_equal_viscosities();
    const double x1 = xi[0], x2 = xi[1], x3 = xi[2];
    const double k2 = norm2(xi);
    const double e = p.epsilon, F = p.froude, nu = p.nu;
    Matrix4cd B = Matrix4cd::Zero();
    B(0, 0) = -nu * k2 + x1 * x2 / (e * k2);
    B(0, 1) = (x2 * x2 + x3 * x3) / (e * k2);
    B(0, 3) = x1 * x3 / (e * F * k2);
    B(1, 0) = -(x1 * x1 + x3 * x3) / (e * k2);
    B(1, 1) = -nu * k2 - x1 * x2 / (e * k2);
    B(1, 3) = x2 * x3 / (e * F * k2);
    B(2, 0) = x2 * x3 / (e * k2);
    B(2, 1) = -x1 * x3 / (e * k2);
    B(2, 2) = -nu * k2;
    B(2, 3) = -(x1 * x1 + x2 * x2) / (e * F * k2);
    B(3, 2) = 1.0 / (e * F);
    B(3, 3) = -nu * k2;
    return B;
}

Matrix4cd coriolis_matrix(double froude) {
    Matrix4cd A = Matrix4cd::Zero();
    A(0, 1) = -1.0;
    A(1, 0) = 1.0;
    A(2, 3) = 1.0 / froude;
    A(3, 2) = -1.0 / froude;
    return A;
}

Matrix4cd leray_symbol(const Vec3& xi) {
    const double k2 = norm2(xi);
    Matrix4cd P = Matrix4cd::Identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) P(i, j) -= xi[i] * xi[j] / k2;
    return P;
}

Matrix4cd assemble_B_product_form(const Vec3& xi, const PhysicalParams& p) {
    if (norm2(xi) == 0.0) throw std::invalid_argument("assemble_B_product_form: xi = 0");
    const double k2 = norm2(xi);
    return -p.nu * k2 * Matrix4cd::Identity() -
           (1.0 / p.epsilon) * (leray_symbol(xi) * coriolis_matrix(p.froude));
}

Matrix4cd q_symbol(const Vec3& xi, double froude) {
    const cplx i_unit(0.0, 1.0);
    Vector4cd m;
    m << -i_unit * xi[1], i_unit * xi[0], 0.0, -i_unit * froude * xi[2];
    const double nF2 = normF2(xi, froude);
    return m * m.adjoint() / nF2;
}

namespace {

// Unit vector in C^3 orthogonal to xi, plus a second one completing the frame.
void tangent_frame(const Vec3& xi, Eigen::Vector3d& t1, Eigen::Vector3d& t2) {
    Eigen::Vector3d k(xi[0], xi[1], xi[2]);
    k.normalize();
    Eigen::Vector3d e = std::abs(k(0)) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
    t1 = e.cross(k).normalized();
    t2 = k.cross(t1); // already unit
}

} // namespace

EigenSystem eigensystem(const Vec3& xi, const PhysicalParams& p) {
    if (norm2(xi) == 0.0) throw std::invalid_argument("eigensystem: xi = 0");
    p.require_equal_viscosities();
    const double F = p.froude;
    const double k2 = norm2(xi);
    const double nF = normF(xi, F);
    const double omega = nF / (p.epsilon * F * std::sqrt(k2));
    if (!(omega > 0.0)) throw std::logic_error("eigensystem: degenerate oscillation frequency");

    EigenSystem es;
    es.mu = cplx(-p.nu * k2, 0.0);
    es.lambda = es.mu + cplx(0.0, omega);
    es.lambda_bar = std::conj(es.lambda);

    const cplx i_unit(0.0, 1.0);
    es.m << -i_unit * xi[1], i_unit * xi[0], 0.0, -i_unit * F * xi[2];
    es.m /= nF;

    // Orthonormal basis of the divergence-free subspace: two horizontal
    // tangent directions padded with 0, plus the theta axis.
    Eigen::Vector3d t1, t2;
    tangent_frame(xi, t1, t2);
    Eigen::Matrix<cplx, 4, 3> basis = Eigen::Matrix<cplx, 4, 3>::Zero();
    for (int i = 0; i < 3; ++i) {
        basis(i, 0) = t1(i);
        basis(i, 1) = t2(i);
    }
    basis(3, 2) = 1.0;

    // Coordinates of m in that basis, then an orthonormal pair {u, v} spanning
    // the oscillating plane (the orthogonal complement of m inside the
    // divergence-free subspace), via a Householder reflection.
    Eigen::Vector3cd mc = basis.adjoint() * es.m;
    Eigen::Vector3cd w = mc;
    const double mc0 = std::abs(mc(0));
    const cplx phase = mc0 > 0 ? mc(0) / mc0 : cplx(1.0);
    w(0) += phase;
    w.normalize();
    auto reflect = [&w](const Eigen::Vector3cd& x) -> Eigen::Vector3cd {
        return x - 2.0 * (w.adjoint() * x)(0) * w;
    };
    Eigen::Vector3cd u = reflect(Eigen::Vector3cd::Unit(1));
    Eigen::Vector3cd v = reflect(Eigen::Vector3cd::Unit(2));

    // Skew part restricted to the oscillating plane: a 2x2 skew-Hermitian
    // matrix with eigenvalues +/- i omega; eigenvectors in closed form.
    const Matrix4cd K = -(1.0 / p.epsilon) * (leray_symbol(xi) * coriolis_matrix(F));
    const Vector4cd U4 = basis * u;
    const Vector4cd V4 = basis * v;
    const cplx a = (U4.adjoint() * (K * U4))(0);
    const cplx z = (U4.adjoint() * (K * V4))(0);
    // trace of the restriction is zero, so the diagonal is (ia, -ia)
    Eigen::Vector2cd vec;
    if (std::abs(z) > 1e-14 * omega) {
        vec << z, cplx(0.0, omega) - a;
    } else {
        vec = (std::abs(a - cplx(0.0, omega)) < std::abs(a + cplx(0.0, omega)))
                  ? Eigen::Vector2cd(1.0, 0.0)
                  : Eigen::Vector2cd(0.0, 1.0);
    }
    vec.normalize();
    es.p = U4 * vec(0) + V4 * vec(1);
    es.p.normalize();
    es.q = es.p.conjugate(); // B is real, so the lambda_bar eigenvector is the conjugate

    es.P2 = es.m * es.m.adjoint();
    es.P3 = es.p * es.p.adjoint();
    es.P4 = es.q * es.q.adjoint();
    return es;
}

} // namespace rsl
