#include "liebdx/free_model.hpp"

#include <cmath>

#include "liebdx/errors.hpp"

namespace liebdx {

using quad::qcplx;
using quad::qreal;
using quad::qvec3;

DiracModel free_hamiltonian(double m, double hv) {
    if (!(hv > 0.0)) throw InvalidParameters("free_hamiltonian: hv must be positive");
    DiracModel model;
    model.gamma = spin_generators().s1;
    model.hv = hv;
    Mat3 v = mat_scale(m, spin_generators().s3);
    model.potential = [v](double) { return v; };
    model.potential_derivative = [](double) { return mat_zero(); };
    return model;
}

SpinorFunction gap_solution(double eps, double m, double hv, Parity parity) {
    if (!(hv > 0.0)) throw InvalidParameters("gap_solution: hv must be positive");
    if (!(std::abs(eps) < std::abs(m)))
        throw EnergyOutOfRange("gap_solution: |eps| must be strictly below |m|");
    const qreal qm = m, qe = eps, qhv = hv;
    const qreal nu = sqrtq(qm * qm - qe * qe) / qhv;

    // odd_A : (hv*nu*sinh, i*eps*cosh, -m*cosh); even_A swaps sinh <-> cosh.
    // Each x-derivative swaps the sinh/cosh shapes and multiplies by nu.
    const bool odd = (parity == Parity::odd_A);
    auto components = [=](qreal x, int order) -> qvec3 {
        qreal s = sinhq(nu * x), c = coshq(nu * x);
        bool swapped = (order % 2) != 0;
        qreal scale = (order == 0) ? qreal(1) : (order == 1 ? nu : nu * nu);
        qreal shapeA = (odd != swapped) ? s : c;
        qreal shapeBC = (odd != swapped) ? c : s;
        return {qcplx(scale * qhv * nu * shapeA), qcplx(0, scale * qe * shapeBC),
                qcplx(-scale * qm * shapeBC)};
    };
    SpinorFunction psi;
    psi.value = [components](qreal x) { return components(x, 0); };
    psi.derivative = [components](qreal x) { return components(x, 1); };
    psi.second_derivative = [components](qreal x) { return components(x, 2); };
    psi.energy = eps;
    psi.flat_band = false;
    return psi;
}

SpinorFunction threshold_solution(int sign, qcplx l0, qcplx l1, double m, double hv) {
    if (sign != 1 && sign != -1)
        throw InvalidParameters("threshold_solution: sign must be +1 or -1");
    if (!(hv > 0.0)) throw InvalidParameters("threshold_solution: hv must be positive");
    if (l0.re == 0 && l0.im == 0 && l1.re == 0 && l1.im == 0)
        throw DegenerateSeed("threshold_solution: l0 and l1 cannot both vanish");
    const qreal qm = m, qhv = hv, qs = sign;
    SpinorFunction psi;
    psi.value = [=](qreal x) -> qvec3 {
        return {l1 * qhv, qs * quad::qi() * (qm * x) * l1 + l0,
                qcplx(-qm * x) * l1 + qs * quad::qi() * l0};
    };
    psi.derivative = [=](qreal) -> qvec3 {
        return {qcplx(0), qs * quad::qi() * qm * l1, qcplx(-qm) * l1};
    };
    psi.second_derivative = [](qreal) -> qvec3 { return {}; };
    psi.energy = sign * m;
    psi.flat_band = false;
    return psi;
}

SpinorFunction flat_band_solution(const FlatBandProfile& profile, double m, double hv) {
    if (!(hv > 0.0)) throw InvalidParameters("flat_band_solution: hv must be positive");
    if (!profile.chi || !profile.chi_prime || !profile.chi_double_prime)
        throw InvalidParameters("flat_band_solution: chi, chi_prime, chi_double_prime required");
    const qreal qm = m, qhv = hv;
    SpinorFunction psi;
    auto chi = profile.chi;
    auto chi1 = profile.chi_prime;
    auto chi2 = profile.chi_double_prime;
    psi.value = [=](qreal x) -> qvec3 { return {qm * chi(x), qcplx(0), -qhv * chi1(x)}; };
    psi.derivative = [=](qreal x) -> qvec3 { return {qm * chi1(x), qcplx(0), -qhv * chi2(x)}; };
    if (profile.chi_triple_prime) {
        auto chi3 = profile.chi_triple_prime;
        psi.second_derivative = [=](qreal x) -> qvec3 {
            return {qm * chi2(x), qcplx(0), -qhv * chi3(x)};
        };
    }
    psi.energy = 0.0;
    psi.flat_band = true;
    return psi;
}

namespace {
qvec3 chiral_flip(const qvec3& v) { return {v[0], -v[1], v[2]}; }
}  // namespace

SpinorFunction chiral_partner(const SpinorFunction& psi) {
    SpinorFunction out;
    auto v = psi.value;
    auto d = psi.derivative;
    out.value = [v](qreal x) { return chiral_flip(v(x)); };
    out.derivative = [d](qreal x) { return chiral_flip(d(x)); };
    if (psi.second_derivative) {
        auto d2 = psi.second_derivative;
        out.second_derivative = [d2](qreal x) { return chiral_flip(d2(x)); };
    }
    out.energy = -psi.energy;
    out.flat_band = psi.flat_band;
    return out;
}

SpinorFunction scale_solution(const SpinorFunction& psi, qcplx factor) {
    auto scaled = [factor](const std::function<qvec3(qreal)>& f) {
        return [factor, f](qreal x) -> qvec3 {
            qvec3 v = f(x);
            return {factor * v[0], factor * v[1], factor * v[2]};
        };
    };
    SpinorFunction out;
    out.value = scaled(psi.value);
    out.derivative = scaled(psi.derivative);
    if (psi.second_derivative) out.second_derivative = scaled(psi.second_derivative);
    out.energy = psi.energy;
    out.flat_band = psi.flat_band;
    return out;
}

FlatBandProfile profile_cosh(double k) {
    const qreal qk = k;
    FlatBandProfile p;
    p.chi = [qk](qreal x) { return qcplx(coshq(qk * x)); };
    p.chi_prime = [qk](qreal x) { return qcplx(qk * sinhq(qk * x)); };
    p.chi_double_prime = [qk](qreal x) { return qcplx(qk * qk * coshq(qk * x)); };
    p.chi_triple_prime = [qk](qreal x) { return qcplx(qk * qk * qk * sinhq(qk * x)); };
    return p;
}

FlatBandProfile profile_sinh(double k) {
    const qreal qk = k;
    FlatBandProfile p;
    p.chi = [qk](qreal x) { return qcplx(sinhq(qk * x)); };
    p.chi_prime = [qk](qreal x) { return qcplx(qk * coshq(qk * x)); };
    p.chi_double_prime = [qk](qreal x) { return qcplx(qk * qk * sinhq(qk * x)); };
    p.chi_triple_prime = [qk](qreal x) { return qcplx(qk * qk * qk * coshq(qk * x)); };
    return p;
}

FlatBandProfile profile_exp(double k) {
    const qreal qk = k;
    FlatBandProfile p;
    p.chi = [qk](qreal x) { return qcplx(expq(qk * x)); };
    p.chi_prime = [qk](qreal x) { return qcplx(qk * expq(qk * x)); };
    p.chi_double_prime = [qk](qreal x) { return qcplx(qk * qk * expq(qk * x)); };
    p.chi_triple_prime = [qk](qreal x) { return qcplx(qk * qk * qk * expq(qk * x)); };
    return p;
}

FlatBandProfile profile_poly_exp(double c0, double c1, double c2, double k) {
    // chi = p(x) e^{kx}; each derivative maps coefficients (a0,a1,a2) of p to
    // those of p' + k p = (a1 + k a0, 2 a2 + k a1, k a2).
    const qreal qk = k;
    std::array<std::array<qreal, 3>, 4> c;
    c[0] = {static_cast<qreal>(c0), static_cast<qreal>(c1), static_cast<qreal>(c2)};
    for (int n = 0; n < 3; ++n)
        c[n + 1] = {c[n][1] + qk * c[n][0], 2 * c[n][2] + qk * c[n][1], qk * c[n][2]};
    auto level = [qk](std::array<qreal, 3> a) {
        return [qk, a](qreal x) { return qcplx((a[0] + x * (a[1] + x * a[2])) * expq(qk * x)); };
    };
    FlatBandProfile p;
    p.chi = level(c[0]);
    p.chi_prime = level(c[1]);
    p.chi_double_prime = level(c[2]);
    p.chi_triple_prime = level(c[3]);
    return p;
}

FlatBandProfile profile_gauss_plane(double k, double w) {
    if (!(w > 0.0)) throw InvalidParameters("profile_gauss_plane: w must be positive");
    // chi = exp(i k x - x^2/(2 w^2)); with g(x) = i k - x/w^2 (so g' = -1/w^2):
    //   chi'   = g chi
    //   chi''  = (g^2 - 1/w^2) chi
    //   chi''' = (g^3 - 3 g / w^2) chi
    const qreal qk = k, iw2 = qreal(1) / (static_cast<qreal>(w) * static_cast<qreal>(w));
    auto base = [=](qreal x) {
        qreal env = expq(-x * x * iw2 / 2);
        return qcplx(env * cosq(qk * x), env * sinq(qk * x));
    };
    auto logd = [=](qreal x) { return qcplx(-x * iw2, qk); };
    FlatBandProfile p;
    p.chi = [base](qreal x) { return base(x); };
    p.chi_prime = [=](qreal x) { return logd(x) * base(x); };
    p.chi_double_prime = [=](qreal x) {
        qcplx g = logd(x);
        return (g * g - qcplx(iw2)) * base(x);
    };
    p.chi_triple_prime = [=](qreal x) {
        qcplx g = logd(x);
        return (g * g * g - (3 * iw2) * g) * base(x);
    };
    return p;
}

}  // namespace liebdx
