#pragma once

// Quad-precision (__float128) complex scalars and dense 3x3 helpers.
//
// The Darboux dressing kernel U'U^{-1} is evaluated from seed columns that
// grow like e^{rate*x} with different rates per column; in double precision
// the columns become numerically parallel long before the physical limits of
// interest are reached.  All seed-level algebra therefore runs in quad
// precision and results are rounded to double only at the API boundary.

#include <quadmath.h>

#include <array>
#include <cmath>
#include <complex>

namespace liebdx::quad {

using qreal = __float128;

inline double to_double(qreal v) { return static_cast<double>(v); }

struct qcplx {
    qreal re{0};
    qreal im{0};

    qcplx() = default;
    qcplx(qreal r) : re(r) {}
    qcplx(qreal r, qreal i) : re(r), im(i) {}
};

inline qcplx operator+(const qcplx& a, const qcplx& b) { return {a.re + b.re, a.im + b.im}; }
inline qcplx operator-(const qcplx& a, const qcplx& b) { return {a.re - b.re, a.im - b.im}; }
inline qcplx operator-(const qcplx& a) { return {-a.re, -a.im}; }
inline qcplx operator*(const qcplx& a, const qcplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline qcplx operator*(qreal s, const qcplx& a) { return {s * a.re, s * a.im}; }
inline qcplx operator*(const qcplx& a, qreal s) { return {s * a.re, s * a.im}; }
inline qcplx operator/(const qcplx& a, qreal s) { return {a.re / s, a.im / s}; }
inline qcplx operator/(const qcplx& a, const qcplx& b) {
    // Magnitudes in this library stay far away from the quad over/underflow
    // limits, so the textbook formula is safe.
    qreal d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline qcplx& operator+=(qcplx& a, const qcplx& b) { a = a + b; return a; }
inline qcplx& operator-=(qcplx& a, const qcplx& b) { a = a - b; return a; }

inline qcplx qconj(const qcplx& a) { return {a.re, -a.im}; }
inline qreal qabs2(const qcplx& a) { return a.re * a.re + a.im * a.im; }
inline qreal qabs(const qcplx& a) { return hypotq(a.re, a.im); }
inline qcplx qi() { return {0, 1}; }

inline std::complex<double> to_std(const qcplx& a) {
    return {to_double(a.re), to_double(a.im)};
}
inline qcplx from_std(const std::complex<double>& a) {
    return {static_cast<qreal>(a.real()), static_cast<qreal>(a.imag())};
}

using qvec3 = std::array<qcplx, 3>;
using qmat3 = std::array<qvec3, 3>;  // row-major

inline qmat3 qm_zero() { return {}; }

inline qmat3 qm_mul(const qmat3& a, const qmat3& b) {
    qmat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const qcplx& aik = a[i][k];
            if (aik.re == 0 && aik.im == 0) continue;
            for (int j = 0; j < 3; ++j) c[i][j] += aik * b[k][j];
        }
    return c;
}

inline qvec3 qm_vec(const qmat3& a, const qvec3& v) {
    qvec3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i] += a[i][j] * v[j];
    return r;
}

inline qmat3 qm_add(const qmat3& a, const qmat3& b) {
    qmat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline qmat3 qm_sub(const qmat3& a, const qmat3& b) {
    qmat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

inline qmat3 qm_scale(const qcplx& s, const qmat3& a) {
    qmat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = s * a[i][j];
    return c;
}

inline qcplx qm_det(const qmat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Adjugate (transposed cofactor matrix); inverse = adjugate / det.
inline qmat3 qm_adjugate(const qmat3& a) {
    qmat3 c;
    c[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    c[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
    c[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
    c[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    c[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
    c[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
    c[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    c[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
    c[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return c;
}

inline qmat3 qm_dagger(const qmat3& a) {
    qmat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = qconj(a[j][i]);
    return c;
}

inline qreal qm_max_abs(const qmat3& a) {
    qreal m = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            qreal v = qabs(a[i][j]);
            if (v > m) m = v;
        }
    return m;
}

inline qreal qv_max_abs(const qvec3& v) {
    qreal m = 0;
    for (int i = 0; i < 3; ++i) {
        qreal a = qabs(v[i]);
        if (a > m) m = a;
    }
    return m;
}

}  // namespace liebdx::quad
