#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liebdx/algebra.hpp"
#include "liebdx/darboux.hpp"
#include "liebdx/free_model.hpp"

namespace liebdx {

// Outcome of a plane-wave transmission computation at one energy.  w_minus /
// w_plus hold the asymptotic intertwiner limits when the caller attached them
// (has_w); reflection_coefficient itself works from the model alone.
struct ScatterResult {
    double energy = 0.0;
    double reflection = 0.0;    // |r|^2, floored at 1e-14
    double transmission = 0.0;  // flux-weighted |t|^2
    double k_left = 0.0;        // propagating wavenumber in the left asymptotic region
    double k_right = 0.0;       // ... and in the right one
    Mat3 w_minus{};
    Mat3 w_plus{};
    bool has_w = false;
};

// Asymptotic limits of U'(x)U(x)^{-1}, evaluated at x = -L and x = +L.
// Throws NoAsymptote unless both limits have converged, i.e.
// ||U'U^{-1}(±L) - U'U^{-1}(±2L)|| < 1e-8.
std::pair<Mat3, Mat3> asymptotic_w(const SeedMatrix& u, double L);

// Reflection/transmission coefficients at energy e: integrates the reduced
// two-component system across [-L, L] with a right-moving incident wave and
// matches against the plane-wave channel basis of each asymptotic region
// separately (the two sides may differ).  Channels are normalized to unit
// flux, so transmission is automatically group-velocity weighted and
// reflection + transmission = 1 up to integration error for Hermitian models.
// Throws EvanescentEnergy when e does not propagate on both sides,
// AlgebraicDegeneracy when the two-component reduction fails at e, and
// NonAsymptoticPotential when the potential has not leveled off by |x| = L.
ScatterResult reflection_coefficient(const DiracModel& model, double e, double L = 30.0);

struct ScatterScan {
    std::vector<ScatterResult> results;                  // successful energies, input order
    std::vector<std::pair<double, std::string>> errors;  // (energy, reason) for failures
};

// Batch reflection_coefficient over the given energies; per-energy failures
// are collected instead of thrown.
ScatterScan scatter_scan(const DiracModel& model, const std::vector<double>& energies,
                         double L = 30.0);

}  // namespace liebdx
