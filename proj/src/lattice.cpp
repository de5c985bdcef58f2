#include "liebdx/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "liebdx/errors.hpp"
#include "liebdx/parallel.hpp"

namespace liebdx {

namespace {

void check_params(const TBParams& p) {
    if (!(p.a > 0)) throw InvalidParameters("lattice: NN distance a must be positive");
    if (std::abs(p.lambda_phase - std::numbers::pi / 2) > 1e-12)
        throw Unsupported("lattice: only the pi/2 NNN Peierls phase is implemented");
}

}  // namespace

Mat3 bloch_hamiltonian(std::pair<double, double> k, const TBParams& p) {
    check_params(p);
    const double ax = p.a * k.first;
    const double ay = p.a * k.second;
    cplx f12 = p.tau1 * std::polar(1.0, ax) + p.tau3 * std::polar(1.0, -ax);
    cplx f13 = p.tau2 * std::polar(1.0, ay) + p.tau4 * std::polar(1.0, -ay);
    cplx g = cplx(0, 4.0 * p.t3 * std::sin(ax) * std::sin(ay));
    Mat3 m{{{cplx(-p.muA), f12, f13},
            {std::conj(f12), cplx(-p.muB), g},
            {std::conj(f13), std::conj(g), cplx(-p.muC)}}};
    return mat_scale(cplx(-1.0), m);
}

std::array<double, 3> dispersion_regime1(std::pair<double, double> k, const TBParams& p) {
    check_params(p);
    if (!(p.tau1 == p.tau3 && p.tau2 == p.tau4))
        throw RegimeViolation("dispersion_regime1: needs tau1 == tau3 and tau2 == tau4");
    if (!(p.muA == 0 && p.muB == 0 && p.muC == 0))
        throw RegimeViolation("dispersion_regime1: needs all on-site potentials zero");
    const double cx = std::cos(p.a * k.first);
    const double cy = std::cos(p.a * k.second);
    const double sx = std::sin(p.a * k.first);
    const double sy = std::sin(p.a * k.second);
    double e = 2.0 * std::sqrt(p.tau1 * p.tau1 * cx * cx + p.tau2 * p.tau2 * cy * cy +
                               4.0 * p.t3 * p.t3 * sx * sx * sy * sy);
    return {0.0, e, -e};
}

std::array<double, 3> dispersion_regime2(std::pair<double, double> k, const TBParams& p) {
    check_params(p);
    if (!(p.muA == 0 && p.muB == 0 && p.muC == 0))
        throw RegimeViolation("dispersion_regime2: needs all on-site potentials zero");
    if (!(p.t3 == 0)) throw RegimeViolation("dispersion_regime2: needs t3 == 0");
    double sum2 = p.tau1 * p.tau1 + p.tau2 * p.tau2 + p.tau3 * p.tau3 + p.tau4 * p.tau4;
    double e = std::sqrt(sum2 + 2.0 * p.tau1 * p.tau3 * std::cos(2.0 * p.a * k.first) +
                         2.0 * p.tau2 * p.tau4 * std::cos(2.0 * p.a * k.second));
    return {0.0, e, -e};
}

Mat3 expanded_hamiltonian(std::pair<double, double> dk, const TBParams& p) {
    check_params(p);
    double dknorm = p.a * std::hypot(dk.first, dk.second);
    if (dknorm > 0.3)
        std::fprintf(stderr,
                     "expanded_hamiltonian: |dk| a = %.3g is outside the linear regime\n",
                     dknorm);
    const SpinGenerators& sg = spin_generators();
    Mat3 h = mat_scale(cplx(p.a * (p.tau1 + p.tau3) * dk.first), sg.s1);
    h = mat_add(h, mat_scale(cplx(p.a * (p.tau2 + p.tau4) * dk.second), sg.s2));
    h = mat_add(h, mat_scale(cplx(p.tau1 - p.tau3), sg.s1t));
    h = mat_add(h, mat_scale(cplx(p.tau2 - p.tau4), sg.s2t));
    h = mat_add(h, mat_scale(cplx(4.0 * p.t3), sg.s3));
    h[0][0] += p.muA;
    h[1][1] += p.muB;
    h[2][2] += p.muC;
    return h;
}

std::array<double, 3> eigenvalues3_hermitian(const Mat3& h) {
    const double tr = (h[0][0] + h[1][1] + h[2][2]).real();
    auto minor2 = [&](int i, int j) { return (h[i][i] * h[j][j] - h[i][j] * h[j][i]).real(); };
    const double c2 = -tr;
    const double c1 = minor2(0, 1) + minor2(0, 2) + minor2(1, 2);
    const double c0 = -det3(h).real();

    // Depressed cubic t^3 + pt + q with x = t - c2/3; for Hermitian input
    // p <= 0 and the discriminant is non-negative, so the trigonometric form
    // applies.
    const double pdep = c1 - c2 * c2 / 3.0;
    const double qdep = c2 * (2.0 * c2 * c2 - 9.0 * c1) / 27.0 + c0;
    std::array<double, 3> x;
    if (pdep >= -1e-300) {
        double t = std::cbrt(-qdep);
        x = {t, t, t};
    } else {
        double mfac = 2.0 * std::sqrt(-pdep / 3.0);
        double c3t = std::clamp(3.0 * qdep / (pdep * mfac), -1.0, 1.0);
        double theta = std::acos(c3t) / 3.0;
        const double third = 2.0 * std::numbers::pi / 3.0;
        x = {mfac * std::cos(theta), mfac * std::cos(theta - third),
             mfac * std::cos(theta - 2.0 * third)};
    }
    for (double& xi : x) xi -= c2 / 3.0;

    auto cubic = [&](double v) { return ((v + c2) * v + c1) * v + c0; };
    for (double& xi : x) {
        double f = cubic(xi);
        for (int it = 0; it < 20; ++it) {
            double fp = (3.0 * xi + 2.0 * c2) * xi + c1;
            if (std::abs(fp) < 1e-300) break;
            double step = f / fp;
            double xn = xi - step;
            double fn = cubic(xn);
            if (!(std::abs(fn) < std::abs(f))) break;
            xi = xn;
            f = fn;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(xi))) break;
        }
    }
    std::sort(x.begin(), x.end());
    return x;
}

BandSurface band_scan(const TBParams& p, int nk) {
    check_params(p);
    if (nk < 2) throw InvalidParameters("band_scan: nk must be >= 2");
    BandSurface s;
    s.nk = nk;
    s.a = p.a;
    const double kmax = std::numbers::pi / (2.0 * p.a);
    s.kx.resize(nk);
    s.ky.resize(nk);
    for (int i = 0; i < nk; ++i) {
        double t = static_cast<double>(i) / (nk - 1);
        s.kx[i] = -kmax + 2.0 * kmax * t;
        s.ky[i] = s.kx[i];
    }
    s.bands.resize(static_cast<std::size_t>(nk) * nk);
    parallel_for(static_cast<std::size_t>(nk), [&](std::size_t iy) {
        for (int ix = 0; ix < nk; ++ix)
            s.bands[iy * nk + ix] =
                eigenvalues3_hermitian(bloch_hamiltonian({s.kx[ix], s.ky[iy]}, p));
    });
    return s;
}

}  // namespace liebdx
