#include "liebdx/scattering.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "liebdx/errors.hpp"
#include "liebdx/ode.hpp"
#include "liebdx/parallel.hpp"
#include "liebdx/spectral.hpp"

namespace liebdx {

using quad::qmat3;
using quad::qreal;

std::pair<Mat3, Mat3> asymptotic_w(const SeedMatrix& u, double L) {
    if (!(L > 0)) throw InvalidParameters("asymptotic_w: L must be positive");
    Mat3 out[2];
    for (int side = 0; side < 2; ++side) {
        double s = (side == 0) ? -1.0 : 1.0;
        qmat3 g1 = u.log_derivative_q(qreal(s * L));
        qmat3 g2 = u.log_derivative_q(qreal(s * 2 * L));
        double drift = static_cast<double>(quad::qm_max_abs(quad::qm_sub(g1, g2)));
        if (!(drift < 1e-8)) {
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "U'U^-1 still drifts by %.3g between x=%g and x=%g", drift, s * L,
                          s * 2 * L);
            throw NoAsymptote(buf);
        }
        out[side] = from_quad(g1);
    }
    return {out[0], out[1]};
}

namespace {

// Flux carried by a reduced state (psi_A, psi_B); the third component drops
// out of psi† S1 psi, so this is the full probability current up to the
// constant factor hv.
double flux2(cplx a, cplx b) { return 2.0 * (std::conj(a) * b).real(); }

struct Channel {
    cplx a, b;  // unit-|flux| amplitudes
    double k;   // propagating wavenumber
    double dir; // sign of the flux
};

// Plane-wave channels of the constant reduced system at one asymptotic point.
// first = outgoing/incoming pair sorted as (flux>0, flux<0).
std::pair<Channel, Channel> asymptotic_channels(const DiracModel& model, double e, double x) {
    Mat2 w = reduce_to_two_components(model, e, x);
    cplx tr = w[0][0] + w[1][1];
    cplx det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
    cplx sq = std::sqrt(tr * tr - 4.0 * det);
    Channel ch[2];
    for (int i = 0; i < 2; ++i) {
        cplx lam = (tr + (i == 0 ? sq : -sq)) / 2.0;
        if (std::abs(lam.real()) > 1e-6 * std::abs(lam)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "energy %.12g is evanescent at x = %.6g", e, x);
            throw EvanescentEnergy(buf);
        }
        cplx v0 = w[0][1], v1 = lam - w[0][0];
        cplx a0 = lam - w[1][1], a1 = w[1][0];
        if (std::norm(a0) + std::norm(a1) > std::norm(v0) + std::norm(v1)) {
            v0 = a0;
            v1 = a1;
        }
        double f = flux2(v0, v1);
        if (!(std::abs(f) > 1e-14 * (std::norm(v0) + std::norm(v1)))) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "channel at energy %.12g carries no flux", e);
            throw EvanescentEnergy(buf);
        }
        double scale = 1.0 / std::sqrt(std::abs(f));
        ch[i] = {v0 * scale, v1 * scale, std::abs(lam.imag()), f > 0 ? 1.0 : -1.0};
    }
    if (ch[0].dir * ch[1].dir >= 0)
        throw EvanescentEnergy("asymptotic channels do not split into counter-propagating pair");
    if (ch[0].dir < 0) std::swap(ch[0], ch[1]);
    return {ch[0], ch[1]};
}

}  // namespace

ScatterResult reflection_coefficient(const DiracModel& model, double e, double L) {
    if (!(L > 0)) throw InvalidParameters("reflection_coefficient: L must be positive");
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

    auto [w_in, w_ref] = asymptotic_channels(model, e, -L);
    auto [w_tr, w_tr_back] = asymptotic_channels(model, e, +L);
    (void)w_tr_back;

    // March the pure transmitted wave backwards from +L to -L.
    auto rhs = [&](double x, const std::array<double, 4>& y) -> std::array<double, 4> {
        Mat2 w = reduce_to_two_components(model, e, x);
        cplx a(y[0], y[1]), b(y[2], y[3]);
        cplx da = w[0][0] * a + w[0][1] * b;
        cplx db = w[1][0] * a + w[1][1] * b;
        return {da.real(), da.imag(), db.real(), db.imag()};
    };
    std::array<double, 4> y0{w_tr.a.real(), w_tr.a.imag(), w_tr.b.real(), w_tr.b.imag()};
    std::array<double, 4> yl = integrate_rk45<4>(rhs, +L, -L, y0, 1e-12, 1e-14);
    cplx ua(yl[0], yl[1]), ub(yl[2], yl[3]);

    // u(-L) = A w_in + B w_ref.
    cplx den = w_in.a * w_ref.b - w_in.b * w_ref.a;
    if (!(std::abs(den) > 1e-12))
        throw std::runtime_error("reflection_coefficient: left channel basis is degenerate");
    cplx A = (ua * w_ref.b - ub * w_ref.a) / den;
    cplx B = (w_in.a * ub - w_in.b * ua) / den;

    ScatterResult out;
    out.energy = e;
    out.reflection = std::max(std::norm(B) / std::norm(A), 1e-14);
    out.transmission = 1.0 / std::norm(A);
    out.k_left = w_in.k;
    out.k_right = w_tr.k;
    return out;
}

ScatterScan scatter_scan(const DiracModel& model, const std::vector<double>& energies, double L) {
    const std::size_t n = energies.size();
    std::vector<ScatterResult> slots(n);
    std::vector<std::string> errs(n);
    std::vector<char> ok(n, 0);
    parallel_for(n, [&](std::size_t i) {
        try {
            slots[i] = reflection_coefficient(model, energies[i], L);
            ok[i] = 1;
        } catch (const std::exception& ex) {
            errs[i] = ex.what();
        }
    });
    ScatterScan scan;
    for (std::size_t i = 0; i < n; ++i) {
        if (ok[i])
            scan.results.push_back(slots[i]);
        else
            scan.errors.emplace_back(energies[i], errs[i]);
    }
    return scan;
}

}  // namespace liebdx
