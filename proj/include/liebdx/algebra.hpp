#pragma once

// Spin-1 matrix constants and small dense complex-matrix operations.

#include <array>
#include <complex>

#include "liebdx/qcomplex.hpp"

namespace liebdx {

using cplx = std::complex<double>;
using Vec3 = std::array<cplx, 3>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;  // row-major

struct SpinGenerators {
    Mat3 s1, s2, s3;    // kinetic/NN structure matrices
    Mat3 s1t, s2t;      // antisymmetric partners
    Mat3 s;             // chiral involution diag(1,-1,1)
    Mat3 s3t;           // diag(1,-1,0)
};

// The exact constant matrices (entries are 0, +/-1, +/-i).
const SpinGenerators& spin_generators();

Mat3 commutator(const Mat3& a, const Mat3& b);      // ab - ba
Mat3 anticommutator(const Mat3& a, const Mat3& b);  // ab + ba

// Inverse by adjugate/determinant.  Throws SingularMatrix when
// |det| <= 1e-13 * (max row sum)^3.
Mat3 invert3(const Mat3& a);

cplx det3(const Mat3& a);

struct HermiticityCheck {
    bool hermitian;
    double defect;  // max |a_ij - conj(a_ji)|
    int row, col;   // index of the max defect (0-based)
};
HermiticityCheck is_hermitian(const Mat3& a, double tol);

// Dense helpers shared across modules.
Mat3 mat_zero();
Mat3 mat_identity();
Mat3 mat_add(const Mat3& a, const Mat3& b);
Mat3 mat_sub(const Mat3& a, const Mat3& b);
Mat3 mat_mul(const Mat3& a, const Mat3& b);
Mat3 mat_scale(cplx s, const Mat3& a);
Mat3 dagger(const Mat3& a);
Vec3 mat_vec(const Mat3& a, const Vec3& v);
double mat_max_abs(const Mat3& a);
double vec_max_abs(const Vec3& v);
double mat_inf_norm(const Mat3& a);  // max row sum of |entries|

quad::qmat3 to_quad(const Mat3& a);
Mat3 from_quad(const quad::qmat3& a);
Vec3 from_quad(const quad::qvec3& v);

}  // namespace liebdx
