#pragma once

#include <Eigen/Dense>

#include "rsl/spectral_field.hpp"

namespace rsl {

using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;

// Fourier symbol of the linearized generator nu*Laplacian - (1/eps) P A at a
// single mode: all sixteen entries written out. Requires xi != 0 and nu = nu'.
Matrix4cd assemble_B(const Vec3& xi, const PhysicalParams& p);

// Same operator assembled as -nu|xi|^2 I - (1/eps) * (Leray symbol) * A.
// Used as a cross-check of the explicit entries.
Matrix4cd assemble_B_product_form(const Vec3& xi, const PhysicalParams& p);

// Eigenstructure of the generator restricted to the divergence-free subspace
// {w : xi . w_{1:3} = 0}. Eigenvalues are closed-form,
//   mu = -nu |xi|^2,  lambda = mu + i |xi|_F/(eps F |xi|),  lambda_bar = conj,
// and the skew part is normal there, so the three projectors are orthogonal,
// idempotent, of norm one, and sum to the identity on that subspace. They are
// zero on the discarded direction (xi, 0).
struct EigenSystem {
    cplx mu;
    cplx lambda;
    cplx lambda_bar;
    // unit eigenvectors: m spans the vorticity (mu) direction, p / q = conj(p)
    // span the two oscillating directions
    Vector4cd m, p, q;
    Matrix4cd P2, P3, P4;
};

EigenSystem eigensystem(const Vec3& xi, const PhysicalParams& p);

// Symbol of the quasi-geostrophic projector at one mode: the orthogonal
// projector onto m(xi) = (-i xi2, i xi1, 0, -i F xi3).
Matrix4cd q_symbol(const Vec3& xi, double froude);

// Leray symbol extended to 4 components (theta untouched).
Matrix4cd leray_symbol(const Vec3& xi);

// Rotation/stratification matrix A.
Matrix4cd coriolis_matrix(double froude);

} // namespace rsl
