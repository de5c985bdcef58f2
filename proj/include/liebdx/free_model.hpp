#pragma once

// The free pseudospin-1 Dirac Hamiltonian H = -i*hv*S1*d/dx + m*S3 and its
// eigensolution catalog: gap solutions, threshold solutions, and the
// arbitrary-profile flat-band family.

#include <functional>

#include "liebdx/algebra.hpp"

namespace liebdx {

enum class Parity { even_A, odd_A };

// Flat-band profile chi and its derivatives.  chi_triple_prime is optional;
// it is required only when the profile seeds a transformation (the dressing
// kernel differentiates the seed matrix twice).
struct FlatBandProfile {
    std::function<quad::qcplx(quad::qreal)> chi;
    std::function<quad::qcplx(quad::qreal)> chi_prime;
    std::function<quad::qcplx(quad::qreal)> chi_double_prime;
    std::function<quad::qcplx(quad::qreal)> chi_triple_prime;  // may be empty
};

// A three-component solution with analytic derivatives, evaluated in quad
// precision internally.  second_derivative may be empty for objects that are
// never differentiated twice.
struct SpinorFunction {
    std::function<quad::qvec3(quad::qreal)> value;
    std::function<quad::qvec3(quad::qreal)> derivative;
    std::function<quad::qvec3(quad::qreal)> second_derivative;
    double energy = 0.0;
    bool flat_band = false;

    Vec3 value_at(double x) const { return from_quad(value(static_cast<quad::qreal>(x))); }
    Vec3 derivative_at(double x) const {
        return from_quad(derivative(static_cast<quad::qreal>(x)));
    }
    Vec3 second_derivative_at(double x) const {
        return from_quad(second_derivative(static_cast<quad::qreal>(x)));
    }
    bool has_second_derivative() const { return static_cast<bool>(second_derivative); }
};

// First-order 3x3 Dirac model: H = -i*hv*gamma*d/dx + potential(x).
// potential_derivative may be empty, meaning the potential is constant.
struct DiracModel {
    Mat3 gamma;
    double hv = 1.0;
    std::function<Mat3(double)> potential;
    std::function<Mat3(double)> potential_derivative;
};

// The free model: gamma = S1, potential = m*S3.  Requires hv > 0.
DiracModel free_hamiltonian(double m, double hv);

// In-gap solution for |eps| < |m| with nu = sqrt(m^2-eps^2)/hv:
//   odd_A : (hv*nu*sinh(nu x), i*eps*cosh(nu x), -m*cosh(nu x))
//   even_A: (hv*nu*cosh(nu x), i*eps*sinh(nu x), -m*sinh(nu x))
// Throws EnergyOutOfRange otherwise.
SpinorFunction gap_solution(double eps, double m, double hv, Parity parity);

// Threshold solution at energy sign*m:
//   (l1*hv, sign*i*l1*m*x + l0, -l1*m*x + sign*i*l0)
// Throws DegenerateSeed when l0 = l1 = 0.
SpinorFunction threshold_solution(int sign, quad::qcplx l0, quad::qcplx l1, double m, double hv);

// Flat-band (zero-energy) solution (m*chi, 0, -hv*chi') for arbitrary chi.
SpinorFunction flat_band_solution(const FlatBandProfile& profile, double m, double hv);

// S * psi with the energy label negated.
SpinorFunction chiral_partner(const SpinorFunction& psi);

// Constant rescaling; keeps the energy label.
SpinorFunction scale_solution(const SpinorFunction& psi, quad::qcplx factor);

// Ready-made profiles (all carry third derivatives).
FlatBandProfile profile_cosh(double k);
FlatBandProfile profile_sinh(double k);
FlatBandProfile profile_exp(double k);
// (c0 + c1 x + c2 x^2) * e^{k x}
FlatBandProfile profile_poly_exp(double c0, double c1, double c2, double k);
// e^{i k x} * e^{-x^2 / (2 w^2)} (Gaussian-windowed plane wave, complex-valued)
FlatBandProfile profile_gauss_plane(double k, double w);

}  // namespace liebdx
