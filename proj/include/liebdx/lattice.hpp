#pragma once

#include <array>
#include <numbers>
#include <utility>
#include <vector>

#include "liebdx/algebra.hpp"

namespace liebdx {

// Tight-binding parameters of the Lieb lattice: four nearest-neighbour
// hoppings, one next-nearest-neighbour amplitude, on-site potentials, the NN
// distance, and the NNN Peierls phase (only the pi/2 point is implemented;
// other values raise Unsupported).
struct TBParams {
    double tau1 = 1.0, tau2 = 1.0, tau3 = 1.0, tau4 = 1.0;
    double t3 = 0.0;
    double muA = 0.0, muB = 0.0, muC = 0.0;
    double a = 1.0;
    double lambda_phase = std::numbers::pi / 2;
};

// Band energies on an inclusive nk x nk grid over [-pi/2a, pi/2a]^2.
// bands[iy * nk + ix] holds the ascending eigenvalue triple at
// (kx[ix], ky[iy]).
struct BandSurface {
    int nk = 0;
    double a = 1.0;
    std::vector<double> kx, ky;
    std::vector<std::array<double, 3>> bands;
};

// Bloch Hamiltonian H(k); Hermitian for real parameters.
Mat3 bloch_hamiltonian(std::pair<double, double> k, const TBParams& p);

// Closed-form bands (e0, e_plus, e_minus) in the isotropic-hopping regime
// tau1 == tau3, tau2 == tau4, mu == 0 (exact equality required; throws
// RegimeViolation otherwise).  e0 is identically zero.
std::array<double, 3> dispersion_regime1(std::pair<double, double> k, const TBParams& p);

// Closed-form bands (e0, e_plus, e_minus) for mu == 0, t3 == 0 with
// arbitrary anisotropic hoppings; same conventions as dispersion_regime1.
std::array<double, 3> dispersion_regime2(std::pair<double, double> k, const TBParams& p);

// Low-energy Hamiltonian expanded around the Dirac valley K0 = (pi/2a, pi/2a)
// to first order in dk = k - K0.  Warns on stderr when |dk| a exceeds 0.3.
Mat3 expanded_hamiltonian(std::pair<double, double> dk, const TBParams& p);

// Ascending eigenvalues of a Hermitian 3x3 matrix via the characteristic
// cubic (trigonometric form) plus a safeguarded Newton polish.
std::array<double, 3> eigenvalues3_hermitian(const Mat3& h);

// Diagonalizes bloch_hamiltonian over the Brillouin-zone grid (nk >= 2).
BandSurface band_scan(const TBParams& p, int nk);

}  // namespace liebdx
