#include "liebdx/algebra.hpp"

#include <cmath>
#include <sstream>

#include "liebdx/errors.hpp"

namespace liebdx {

namespace {

SpinGenerators make_generators() {
    const cplx I(0.0, 1.0);
    SpinGenerators g{};
    g.s1 = mat_zero();
    g.s1[0][1] = 1;
    g.s1[1][0] = 1;

    g.s2 = mat_zero();
    g.s2[0][2] = 1;
    g.s2[2][0] = 1;

    g.s3 = mat_zero();
    g.s3[1][2] = -I;
    g.s3[2][1] = I;

    g.s1t = mat_zero();
    g.s1t[0][1] = -I;
    g.s1t[1][0] = I;

    g.s2t = mat_zero();
    g.s2t[0][2] = -I;
    g.s2t[2][0] = I;

    g.s = mat_zero();
    g.s[0][0] = 1;
    g.s[1][1] = -1;
    g.s[2][2] = 1;

    g.s3t = mat_zero();
    g.s3t[0][0] = 1;
    g.s3t[1][1] = -1;
    g.s3t[2][2] = 0;
    return g;
}

}  // namespace

const SpinGenerators& spin_generators() {
    static const SpinGenerators g = make_generators();
    return g;
}

Mat3 mat_zero() { return {}; }

Mat3 mat_identity() {
    Mat3 m{};
    m[0][0] = m[1][1] = m[2][2] = 1;
    return m;
}

Mat3 mat_add(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

Mat3 mat_sub(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c = mat_zero();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const cplx aik = a[i][k];
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < 3; ++j) c[i][j] += aik * b[k][j];
        }
    return c;
}

Mat3 mat_scale(cplx s, const Mat3& a) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = s * a[i][j];
    return c;
}

Mat3 dagger(const Mat3& a) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = std::conj(a[j][i]);
    return c;
}

Vec3 mat_vec(const Mat3& a, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i] += a[i][j] * v[j];
    return r;
}

double mat_max_abs(const Mat3& a) {
    double m = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j]));
    return m;
}

double vec_max_abs(const Vec3& v) {
    double m = 0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

double mat_inf_norm(const Mat3& a) {
    double m = 0;
    for (int i = 0; i < 3; ++i) {
        double row = 0;
        for (int j = 0; j < 3; ++j) row += std::abs(a[i][j]);
        m = std::max(m, row);
    }
    return m;
}

Mat3 commutator(const Mat3& a, const Mat3& b) { return mat_sub(mat_mul(a, b), mat_mul(b, a)); }

Mat3 anticommutator(const Mat3& a, const Mat3& b) { return mat_add(mat_mul(a, b), mat_mul(b, a)); }

cplx det3(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 invert3(const Mat3& a) {
    const cplx det = det3(a);
    const double scale = mat_inf_norm(a);
    if (std::abs(det) <= 1e-13 * scale * scale * scale) {
        std::ostringstream msg;
        msg << "matrix is numerically singular: |det| = " << std::abs(det)
            << " below threshold " << 1e-13 * scale * scale * scale;
        throw SingularMatrix(det, msg.str());
    }
    Mat3 inv;
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return inv;
}

HermiticityCheck is_hermitian(const Mat3& a, double tol) {
    HermiticityCheck r{true, 0.0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double d = std::abs(a[i][j] - std::conj(a[j][i]));
            if (d > r.defect) {
                r.defect = d;
                r.row = i;
                r.col = j;
            }
        }
    r.hermitian = r.defect <= tol;
    return r;
}

quad::qmat3 to_quad(const Mat3& a) {
    quad::qmat3 q;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q[i][j] = quad::from_std(a[i][j]);
    return q;
}

Mat3 from_quad(const quad::qmat3& a) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = quad::to_std(a[i][j]);
    return m;
}

Vec3 from_quad(const quad::qvec3& v) {
    return {quad::to_std(v[0]), quad::to_std(v[1]), quad::to_std(v[2])};
}

}  // namespace liebdx
