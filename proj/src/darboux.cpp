#include "liebdx/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "liebdx/errors.hpp"
#include "liebdx/parallel.hpp"

namespace liebdx {

using quad::qcplx;
using quad::qmat3;
using quad::qreal;
using quad::qvec3;

namespace {

// Floor for |det| of the column-equilibrated seed; below this the matrix is
// singular to quad rounding no matter how the raw columns are scaled.
constexpr double kEquilibratedDetFloor = 1e-25;

std::string singular_message(double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "seed matrix is singular at x = %.12g", x);
    return buf;
}

qvec3 qv_add(const qvec3& a, const qvec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
qvec3 qv_sub(const qvec3& a, const qvec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
qvec3 qv_scale(const qcplx& s, const qvec3& v) { return {s * v[0], s * v[1], s * v[2]}; }

struct KernelEval {
    qmat3 ue, upe;      // column-equilibrated U, U'
    qmat3 ue_inv;
    qreal norm[3];      // the column norms divided out
};

KernelEval factor_at(const std::array<SpinorFunction, 3>& cols, qreal x) {
    KernelEval k{};
    for (int j = 0; j < 3; ++j) {
        qvec3 v = cols[j].value(x);
        qvec3 d = cols[j].derivative(x);
        qreal n2 = quad::qabs2(v[0]) + quad::qabs2(v[1]) + quad::qabs2(v[2]);
        qreal n = sqrtq(n2);
        if (n == 0) n = 1;
        k.norm[j] = n;
        for (int i = 0; i < 3; ++i) {
            k.ue[i][j] = v[i] / n;
            k.upe[i][j] = d[i] / n;
        }
    }
    qcplx det = quad::qm_det(k.ue);
    if (quad::qabs(det) <= static_cast<qreal>(kEquilibratedDetFloor))
        throw SingularSeed(quad::to_double(x), singular_message(quad::to_double(x)));
    qmat3 adj = quad::qm_adjugate(k.ue);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k.ue_inv[i][j] = adj[i][j] / det;
    return k;
}

const qmat3& s1_quad() {
    static const qmat3 s1q = to_quad(spin_generators().s1);
    return s1q;
}

}  // namespace

SeedMatrix::SeedMatrix(std::array<SpinorFunction, 3> cols, std::array<double, 3> lambda)
    : cols_(std::move(cols)), lambda_(lambda) {}

bool SeedMatrix::has_second_derivatives() const {
    return cols_[0].has_second_derivative() && cols_[1].has_second_derivative() &&
           cols_[2].has_second_derivative();
}

qmat3 SeedMatrix::value_q(qreal x) const {
    qmat3 u{};
    for (int j = 0; j < 3; ++j) {
        qvec3 v = cols_[j].value(x);
        for (int i = 0; i < 3; ++i) u[i][j] = v[i];
    }
    return u;
}

qmat3 SeedMatrix::derivative_q(qreal x) const {
    qmat3 u{};
    for (int j = 0; j < 3; ++j) {
        qvec3 v = cols_[j].derivative(x);
        for (int i = 0; i < 3; ++i) u[i][j] = v[i];
    }
    return u;
}

qmat3 SeedMatrix::second_derivative_q(qreal x) const {
    if (!has_second_derivatives())
        throw InvalidParameters("seed matrix: columns lack analytic second derivatives");
    qmat3 u{};
    for (int j = 0; j < 3; ++j) {
        qvec3 v = cols_[j].second_derivative(x);
        for (int i = 0; i < 3; ++i) u[i][j] = v[i];
    }
    return u;
}

Mat3 SeedMatrix::value(double x) const { return from_quad(value_q(static_cast<qreal>(x))); }
Mat3 SeedMatrix::derivative(double x) const {
    return from_quad(derivative_q(static_cast<qreal>(x)));
}

qmat3 SeedMatrix::log_derivative_q(qreal x) const {
    KernelEval k = factor_at(cols_, x);
    return quad::qm_mul(k.upe, k.ue_inv);
}

std::pair<qmat3, qmat3> SeedMatrix::log_derivative_pair_q(qreal x) const {
    if (!has_second_derivatives())
        throw InvalidParameters("seed matrix: columns lack analytic second derivatives");
    KernelEval k = factor_at(cols_, x);
    qmat3 g = quad::qm_mul(k.upe, k.ue_inv);
    qmat3 uppe{};
    for (int j = 0; j < 3; ++j) {
        qvec3 v = cols_[j].second_derivative(x);
        for (int i = 0; i < 3; ++i) uppe[i][j] = v[i] / k.norm[j];
    }
    // G' = U'' U^{-1} - G^2, invariant under the column scaling.
    qmat3 gp = quad::qm_sub(quad::qm_mul(uppe, k.ue_inv), quad::qm_mul(g, g));
    return {g, gp};
}

qmat3 SeedMatrix::inverse_q(qreal x) const {
    KernelEval k = factor_at(cols_, x);
    qmat3 inv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) inv[i][j] = k.ue_inv[i][j] / k.norm[i];
    return inv;
}

SeedMatrix seed_matrix(const SpinorFunction& psi1, const SpinorFunction& psi2,
                       const SpinorFunction& psi3, const std::array<double, 3>& lambda) {
    std::array<SpinorFunction, 3> cols{psi1, psi2, psi3};
    for (int j = 0; j < 3; ++j) {
        if (!cols[j].value || !cols[j].derivative)
            throw InvalidParameters("seed_matrix: column lacks value or derivative");
        double want = lambda[j];
        double have = cols[j].flat_band ? 0.0 : cols[j].energy;
        if (std::abs(have - want) > 1e-12 * std::max(1.0, std::abs(want))) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "seed_matrix: column %d has energy label %.12g, expected %.12g", j + 1,
                          have, want);
            throw InconsistentLabels(buf);
        }
    }
    return SeedMatrix(std::move(cols), lambda);
}

cplx seed_determinant(const SeedMatrix& u, double x) {
    return quad::to_std(quad::qm_det(u.value_q(static_cast<qreal>(x))));
}

namespace {

struct RegularityProbe {
    double abs_det;
    double maxcol_cubed;
    double ratio;
};

RegularityProbe regularity_probe(const SeedMatrix& u, double x) {
    qmat3 m = u.value_q(static_cast<qreal>(x));
    qreal det = quad::qabs(quad::qm_det(m));
    qreal mc2 = 0;
    for (int j = 0; j < 3; ++j) {
        qreal n2 = quad::qabs2(m[0][j]) + quad::qabs2(m[1][j]) + quad::qabs2(m[2][j]);
        if (n2 > mc2) mc2 = n2;
    }
    qreal mc = sqrtq(mc2);
    qreal mc3 = mc * mc * mc;
    RegularityProbe p;
    p.abs_det = quad::to_double(det);
    p.maxcol_cubed = quad::to_double(mc3);
    p.ratio = (mc3 > 0) ? quad::to_double(det / mc3) : 0.0;
    return p;
}

}  // namespace

RegularityReport regularity_scan(const SeedMatrix& u, std::pair<double, double> domain, int n) {
    if (n < 2) throw InvalidParameters("regularity_scan: n must be >= 2");
    if (!(domain.second > domain.first))
        throw InvalidParameters("regularity_scan: empty domain");
    const double a = domain.first, b = domain.second;
    const double h = (b - a) / (n - 1);

    std::vector<RegularityProbe> probes(n);
    parallel_for(static_cast<std::size_t>(n),
                 [&](std::size_t i) { probes[i] = regularity_probe(u, a + h * i); });

    RegularityReport rep;
    rep.min_abs_det = probes[0].abs_det;
    rep.argmin = a;
    rep.threshold_at_argmin = 1e-10 * probes[0].maxcol_cubed;
    rep.min_ratio = probes[0].ratio;
    rep.argmin_ratio = a;
    auto absorb = [&](double x, const RegularityProbe& p) {
        if (p.abs_det < rep.min_abs_det) {
            rep.min_abs_det = p.abs_det;
            rep.argmin = x;
            rep.threshold_at_argmin = 1e-10 * p.maxcol_cubed;
        }
        if (p.ratio < rep.min_ratio) {
            rep.min_ratio = p.ratio;
            rep.argmin_ratio = x;
        }
    };
    for (int i = 1; i < n; ++i) absorb(a + h * i, probes[i]);

    // Refine around local minima of the scale-free ratio; a determinant zero
    // between sample points shows up as a V-shaped dip, which the ternary
    // search drives to the bottom.
    for (int i = 0; i < n; ++i) {
        double left = (i > 0) ? probes[i - 1].ratio : probes[i].ratio + 1;
        double right = (i + 1 < n) ? probes[i + 1].ratio : probes[i].ratio + 1;
        if (!(probes[i].ratio <= left && probes[i].ratio <= right)) continue;
        double lo = (i > 0) ? a + h * (i - 1) : a;
        double hi = (i + 1 < n) ? a + h * (i + 1) : b;
        for (int it = 0; it < 120 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
            double x1 = lo + (hi - lo) / 3, x2 = hi - (hi - lo) / 3;
            RegularityProbe p1 = regularity_probe(u, x1);
            RegularityProbe p2 = regularity_probe(u, x2);
            absorb(x1, p1);
            absorb(x2, p2);
            if (p1.ratio <= p2.ratio)
                hi = x2;
            else
                lo = x1;
        }
    }

    rep.pass = rep.min_ratio > 1e-10;
    return rep;
}

Vec3 apply_intertwiner(const SeedMatrix& u, const SpinorFunction& psi, double x) {
    qreal qx = static_cast<qreal>(x);
    qmat3 g = u.log_derivative_q(qx);
    qvec3 v = psi.value(qx);
    qvec3 d = psi.derivative(qx);
    return from_quad(qv_sub(d, quad::qm_vec(g, v)));
}

Mat3 transformed_potential(const SeedMatrix& u, const DiracModel& base, double x) {
    qmat3 g = u.log_derivative_q(static_cast<qreal>(x));
    const qmat3& s1 = s1_quad();
    qmat3 comm = quad::qm_sub(quad::qm_mul(g, s1), quad::qm_mul(s1, g));
    qmat3 v = quad::qm_add(to_quad(base.potential(x)),
                           quad::qm_scale(qcplx(0, static_cast<qreal>(base.hv)), comm));
    return from_quad(v);
}

std::array<SpinorFunction, 3> missing_states(const SeedMatrix& u) {
    std::array<SpinorFunction, 3> out;
    const bool second = u.has_second_derivatives();
    for (int j = 0; j < 3; ++j) {
        SpinorFunction psi;
        // Row j of U^{-1}, conjugated, is column j of (U^{-1})^dagger.
        psi.value = [u, j](qreal x) -> qvec3 {
            qmat3 w = u.inverse_q(x);
            return {quad::qconj(w[j][0]), quad::qconj(w[j][1]), quad::qconj(w[j][2])};
        };
        // (U^{-1})' = -U^{-1} U' U^{-1}
        psi.derivative = [u, j](qreal x) -> qvec3 {
            qmat3 w = u.inverse_q(x);
            qmat3 wp = quad::qm_scale(qcplx(-1), quad::qm_mul(w, quad::qm_mul(u.derivative_q(x), w)));
            return {quad::qconj(wp[j][0]), quad::qconj(wp[j][1]), quad::qconj(wp[j][2])};
        };
        if (second) {
            // (U^{-1})'' = 2 U^{-1}U'U^{-1}U'U^{-1} - U^{-1}U''U^{-1}
            psi.second_derivative = [u, j](qreal x) -> qvec3 {
                qmat3 w = u.inverse_q(x);
                qmat3 a = quad::qm_mul(w, quad::qm_mul(u.derivative_q(x), w));
                qmat3 wpp = quad::qm_sub(quad::qm_scale(qcplx(2), quad::qm_mul(a, quad::qm_mul(u.derivative_q(x), w))),
                                         quad::qm_mul(w, quad::qm_mul(u.second_derivative_q(x), w)));
                return {quad::qconj(wpp[j][0]), quad::qconj(wpp[j][1]), quad::qconj(wpp[j][2])};
            };
        }
        psi.energy = u.lambda()[j];
        psi.flat_band = false;
        out[j] = std::move(psi);
    }
    return out;
}

double intertwining_residual(const DiracModel& base, const SeedMatrix& u,
                             const SpinorFunction& psi, std::pair<double, double> domain,
                             int n) {
    if (!psi.second_derivative)
        throw InvalidParameters("intertwining_residual: probe lacks an analytic second derivative");
    if (!u.has_second_derivatives())
        throw InvalidParameters("intertwining_residual: seed columns lack second derivatives");
    if (n < 2) throw InvalidParameters("intertwining_residual: n must be >= 2");
    const double a = domain.first, b = domain.second;
    const double h = (b - a) / (n - 1);
    const qcplx mihv(0, -static_cast<qreal>(base.hv));  // -i*hv
    const qcplx ihv(0, static_cast<qreal>(base.hv));
    const qmat3& s1 = s1_quad();

    std::vector<double> sup(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double xd = a + h * i;
        qreal x = static_cast<qreal>(xd);
        auto [g, gp] = u.log_derivative_pair_q(x);
        qmat3 v = to_quad(base.potential(xd));
        qmat3 vp = base.potential_derivative ? to_quad(base.potential_derivative(xd))
                                             : quad::qm_zero();
        qvec3 p0 = psi.value(x), p1 = psi.derivative(x), p2 = psi.second_derivative(x);
        // phi = H psi and its derivative
        qvec3 phi = qv_add(qv_scale(mihv, quad::qm_vec(s1, p1)), quad::qm_vec(v, p0));
        qvec3 phi1 = qv_add(qv_add(qv_scale(mihv, quad::qm_vec(s1, p2)), quad::qm_vec(vp, p0)),
                            quad::qm_vec(v, p1));
        // L phi
        qvec3 lphi = qv_sub(phi1, quad::qm_vec(g, phi));
        // L psi and (L psi)'
        qvec3 lpsi = qv_sub(p1, quad::qm_vec(g, p0));
        qvec3 lpsi1 = qv_sub(p2, qv_add(quad::qm_vec(gp, p0), quad::qm_vec(g, p1)));
        // H~ (L psi)
        qmat3 vt = quad::qm_add(v, quad::qm_scale(ihv, quad::qm_sub(quad::qm_mul(g, s1),
                                                                    quad::qm_mul(s1, g))));
        qvec3 rhs = qv_add(qv_scale(mihv, quad::qm_vec(s1, lpsi1)), quad::qm_vec(vt, lpsi));
        sup[i] = quad::to_double(quad::qv_max_abs(qv_sub(lphi, rhs)));
    });
    return *std::max_element(sup.begin(), sup.end());
}

HermiticityReport hermiticity_report(const SeedMatrix& u, const DiracModel& base,
                                     std::pair<double, double> domain, int n, double tol) {
    if (n < 2) throw InvalidParameters("hermiticity_report: n must be >= 2");
    const double a = domain.first, b = domain.second;
    const double h = (b - a) / (n - 1);
    std::vector<double> defects(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        Mat3 v = transformed_potential(u, base, a + h * i);
        defects[i] = is_hermitian(v, tol).defect;
    });
    HermiticityReport rep;
    rep.tol = tol;
    rep.max_defect = defects[0];
    rep.x_at_max = a;
    for (int i = 1; i < n; ++i) {
        if (defects[i] > rep.max_defect) {
            rep.max_defect = defects[i];
            rep.x_at_max = a + h * i;
        }
    }
    rep.pass = rep.max_defect < tol;
    return rep;
}

double quadrature_norm(const SpinorFunction& psi, double a, double b, int n) {
    if (!(b > a)) throw InvalidParameters("quadrature_norm: empty interval");
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n;  // Simpson needs an odd sample count
    const double h = (b - a) / (n - 1);
    std::vector<double> f(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        Vec3 v = psi.value_at(a + h * i);
        f[i] = std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
    });
    double sum = f[0] + f[n - 1];
    for (int i = 1; i < n - 1; ++i) sum += f[i] * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

SpinorFunction normalized(const SpinorFunction& psi, double a, double b, int n) {
    double nrm2 = quadrature_norm(psi, a, b, n);
    if (!(nrm2 > 0)) throw InvalidParameters("normalized: vanishing norm");
    return scale_solution(psi, qcplx(static_cast<qreal>(1.0 / std::sqrt(nrm2))));
}

TransformedModel transform(const SeedMatrix& u, const DiracModel& base) {
    TransformedModel tm;
    tm.seed = u;
    tm.missing_states = missing_states(u);
    tm.model.gamma = base.gamma;
    tm.model.hv = base.hv;
    DiracModel base_copy = base;
    tm.model.potential = [u, base_copy](double x) {
        return transformed_potential(u, base_copy, x);
    };
    if (u.has_second_derivatives() && base.potential_derivative) {
        tm.model.potential_derivative = [u, base_copy](double x) {
            auto [g, gp] = u.log_derivative_pair_q(static_cast<qreal>(x));
            (void)g;
            const qmat3& s1 = s1_quad();
            qmat3 comm = quad::qm_sub(quad::qm_mul(gp, s1), quad::qm_mul(s1, gp));
            qmat3 v = quad::qm_add(to_quad(base_copy.potential_derivative(x)),
                                   quad::qm_scale(qcplx(0, static_cast<qreal>(base_copy.hv)), comm));
            return from_quad(v);
        };
    }
    return tm;
}

}  // namespace liebdx
