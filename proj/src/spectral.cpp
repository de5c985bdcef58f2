#include "liebdx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "liebdx/errors.hpp"
#include "liebdx/ode.hpp"
#include "liebdx/parallel.hpp"

namespace liebdx {

namespace {

double degeneracy_threshold(double e) { return 1e-8 * std::max(1.0, std::abs(e)); }

cplx v33_minus_e_guard(const Mat3& v, double e, double x) {
    cplx d = cplx(e) - v[2][2];
    if (std::abs(d) <= degeneracy_threshold(e)) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "third-component elimination degenerates at e = %.12g, x = %.12g", e, x);
        throw AlgebraicDegeneracy(e, x, buf);
    }
    return d;
}

}  // namespace

Mat2 reduce_to_two_components(const DiracModel& model, double e, double x) {
    Mat3 v = model.potential(x);
    cplx d = v33_minus_e_guard(v, e, x);
    const cplx pre = 1.0 / (cplx(0, 1) * model.hv);
    Mat2 w;
    w[0][0] = pre * (v[1][0] + v[1][2] * v[2][0] / d);
    w[0][1] = pre * ((v[1][1] - e) + v[1][2] * v[2][1] / d);
    w[1][0] = pre * ((v[0][0] - e) + v[0][2] * v[2][0] / d);
    w[1][1] = pre * (v[0][1] + v[0][2] * v[2][1] / d);
    return w;
}

cplx third_component(const DiracModel& model, double e, double x, cplx psi_a, cplx psi_b) {
    Mat3 v = model.potential(x);
    cplx d = v33_minus_e_guard(v, e, x);
    return (v[2][0] * psi_a + v[2][1] * psi_b) / d;
}

double eigen_residual(const DiracModel& model, const SpinorFunction& psi, double e,
                      const Grid& grid) {
    if (grid.n < 3) throw InvalidParameters("eigen_residual: grid needs n >= 3");
    if (!(grid.x_max > grid.x_min)) throw InvalidParameters("eigen_residual: empty grid");
    const double h = grid.spacing();
    const cplx mihv(0, -model.hv);
    std::vector<double> rmax(grid.n), pmax(grid.n);
    parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t i) {
        double x = grid.x_min + h * i;
        Vec3 p = psi.value_at(x);
        Vec3 dp = psi.derivative_at(x);
        Vec3 r = mat_vec(model.potential(x), p);
        Vec3 kin = mat_vec(model.gamma, dp);
        for (int c = 0; c < 3; ++c) r[c] += mihv * kin[c] - e * p[c];
        rmax[i] = vec_max_abs(r);
        pmax[i] = vec_max_abs(p);
    });
    double sup_r = *std::max_element(rmax.begin(), rmax.end());
    double sup_p = *std::max_element(pmax.begin(), pmax.end());
    return sup_r / std::max(1.0, sup_p);
}

namespace {

// Real form of the reduced system under the gauge T = diag(1, -i):
// R = T W T^{-1}.  All four case potentials (and the free model) land in the
// class where R is real; a residual imaginary part means the model is
// outside that class.
std::array<std::array<double, 2>, 2> real_reduced(const DiracModel& model, double e, double x) {
    Mat2 w = reduce_to_two_components(model, e, x);
    cplx r11 = w[0][0];
    cplx r12 = cplx(0, 1) * w[0][1];
    cplx r21 = cplx(0, -1) * w[1][0];
    cplx r22 = w[1][1];
    double scale = std::max({std::abs(r11), std::abs(r12), std::abs(r21), std::abs(r22)});
    double imag = std::max({std::abs(r11.imag()), std::abs(r12.imag()), std::abs(r21.imag()),
                            std::abs(r22.imag())});
    if (imag >= 1e-9 * std::max(1.0, scale))
        throw std::runtime_error("shoot_bound_states: reduced system is not real in the "
                                 "diag(1,-i) gauge");
    return {{{r11.real(), r12.real()}, {r21.real(), r22.real()}}};
}

// Unit decaying solution integrated from x = from to x = 0; empty when the
// asymptotic system has no real decay rate at this energy.
std::optional<std::array<double, 2>> shoot_side(const DiracModel& model, double e, double from) {
    auto r = real_reduced(model, e, from);
    double tr = r[0][0] + r[1][1];
    double det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
    double disc = tr * tr / 4 - det;
    if (!(disc > 0)) return std::nullopt;
    double kappa = std::sqrt(disc);
    // Toward x=0 the physical solution grows: eigenvalue +kappa branch from
    // the left, -kappa branch from the right.
    double lam = tr / 2 + (from < 0 ? kappa : -kappa);

    std::array<double, 2> v{r[0][1], lam - r[0][0]};
    std::array<double, 2> alt{lam - r[1][1], r[1][0]};
    if (alt[0] * alt[0] + alt[1] * alt[1] > v[0] * v[0] + v[1] * v[1]) v = alt;
    // Canonical sign: largest component positive, so the matching determinant
    // is continuous in e.
    double big = (std::abs(v[0]) >= std::abs(v[1])) ? v[0] : v[1];
    if (big < 0) {
        v[0] = -v[0];
        v[1] = -v[1];
    }
    double n = std::hypot(v[0], v[1]);
    v[0] /= n;
    v[1] /= n;

    auto rhs = [&](double x, const std::array<double, 2>& y) -> std::array<double, 2> {
        auto m = real_reduced(model, e, x);
        return {m[0][0] * y[0] + m[0][1] * y[1], m[1][0] * y[0] + m[1][1] * y[1]};
    };
    std::array<double, 2> u = integrate_rk45<2>(rhs, from, 0.0, v, 1e-11, 1e-13);
    double un = std::hypot(u[0], u[1]);
    u[0] /= un;
    u[1] /= un;
    return u;
}

}  // namespace

SpectrumReport shoot_bound_states(const DiracModel& model, std::pair<double, double> e_range,
                                  int n_scan, double L, const std::vector<double>& expected) {
    if (n_scan < 2) throw InvalidParameters("shoot_bound_states: n_scan must be >= 2");
    if (!(L > 0)) throw InvalidParameters("shoot_bound_states: L must be positive");
    if (!(e_range.second > e_range.first))
        throw InvalidParameters("shoot_bound_states: empty energy range");

    for (double s : {-1.0, 1.0}) {
        double drift = mat_max_abs(mat_sub(model.potential(s * L), model.potential(s * 2 * L)));
        if (!(drift < 1e-8)) {
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "potential still drifts by %.3g between |x|=%g and |x|=%g", drift, L,
                          2 * L);
            throw NonAsymptoticPotential(buf);
        }
    }

    // Range of V33 over the integration window bounds the energies at which
    // the psi_C elimination can degenerate.
    double v33_lo = 0.0, v33_hi = 0.0;
    {
        const int nv = 513;
        for (int i = 0; i < nv; ++i) {
            double x = -L + 2 * L * i / (nv - 1);
            double v33 = model.potential(x)[2][2].real();
            if (i == 0) v33_lo = v33_hi = v33;
            v33_lo = std::min(v33_lo, v33);
            v33_hi = std::max(v33_hi, v33);
        }
    }
    auto in_degenerate_zone = [&](double e) {
        return e >= v33_lo - degeneracy_threshold(e) && e <= v33_hi + degeneracy_threshold(e);
    };
    auto zone_intersects = [&](double lo, double hi) {
        double t = degeneracy_threshold(std::max(std::abs(lo), std::abs(hi)));
        return lo <= v33_hi + t && hi >= v33_lo - t;
    };

    auto matching_det = [&](double e) -> std::optional<double> {
        auto left = shoot_side(model, e, -L);
        auto right = shoot_side(model, e, +L);
        if (!left || !right) return std::nullopt;
        return (*left)[0] * (*right)[1] - (*left)[1] * (*right)[0];
    };

    const double e0 = e_range.first;
    const double de = (e_range.second - e_range.first) / (n_scan - 1);
    enum { kOk, kDegenerate, kInvalid };
    std::vector<double> fs(n_scan);
    std::vector<int> status(n_scan, kOk);
    bool zone_hit = false;
    parallel_for(static_cast<std::size_t>(n_scan), [&](std::size_t i) {
        double e = e0 + de * i;
        if (in_degenerate_zone(e)) {
            status[i] = kDegenerate;
            return;
        }
        try {
            auto f = matching_det(e);
            if (f)
                fs[i] = *f;
            else
                status[i] = kInvalid;
        } catch (const AlgebraicDegeneracy&) {
            status[i] = kDegenerate;
        }
    });

    SpectrumReport report;
    report.expected = expected;
    std::sort(report.expected.begin(), report.expected.end());

    for (int i = 0; i < n_scan; ++i)
        if (status[i] == kDegenerate) {
            report.degenerate_energies.push_back(e0 + de * i);
            zone_hit = true;
        }

    for (int i = 0; i + 1 < n_scan; ++i) {
        if (status[i] != kOk || status[i + 1] != kOk) continue;
        double lo = e0 + de * i, hi = e0 + de * (i + 1);
        if (zone_intersects(lo, hi)) {
            zone_hit = true;
            continue;
        }
        if (!(fs[i] * fs[i + 1] < 0)) continue;
        double flo = fs[i];
        bool aborted = false;
        for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
            double mid = 0.5 * (lo + hi);
            std::optional<double> fm;
            try {
                fm = matching_det(mid);
            } catch (const AlgebraicDegeneracy&) {
                fm = std::nullopt;
            }
            if (!fm) {
                aborted = true;
                break;
            }
            if ((*fm > 0) == (flo > 0)) {
                lo = mid;
                flo = *fm;
            } else {
                hi = mid;
            }
        }
        if (aborted) continue;
        double root = 0.5 * (lo + hi);
        auto fr = matching_det(root);
        // Reject sign flips that are not actual zeros (eigenvector branch
        // switches, poles): a genuine root drives the determinant down.
        if (fr && std::abs(*fr) < 1e-6) {
            report.found_energies.push_back(root);
            report.residuals.push_back(std::abs(*fr));
        }
    }

    if (zone_hit && report.degenerate_energies.empty())
        report.degenerate_energies.push_back(
            std::clamp(0.5 * (v33_lo + v33_hi), e_range.first, e_range.second));

    // Deduplicate roots found from adjacent brackets.
    std::vector<std::pair<double, double>> roots;
    for (std::size_t i = 0; i < report.found_energies.size(); ++i)
        roots.emplace_back(report.found_energies[i], report.residuals[i]);
    std::sort(roots.begin(), roots.end());
    report.found_energies.clear();
    report.residuals.clear();
    for (const auto& [e, r] : roots) {
        if (!report.found_energies.empty() && std::abs(e - report.found_energies.back()) < 1e-9)
            continue;
        report.found_energies.push_back(e);
        report.residuals.push_back(r);
    }
    std::sort(report.degenerate_energies.begin(), report.degenerate_energies.end());
    return report;
}

}  // namespace liebdx
