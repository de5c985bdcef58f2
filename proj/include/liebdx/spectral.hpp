#pragma once

// Numerical verification layer: grid residuals of eigensolutions, and
// bound-state search by two-sided shooting on the reduced two-component
// system (the kinetic matrix's third row is zero, so the third equation of
// H psi = e psi is algebraic and psi_C can be eliminated).

#include <utility>
#include <vector>

#include "liebdx/darboux.hpp"

namespace liebdx {

struct Grid {
    double x_min = -10.0;
    double x_max = 10.0;
    int n = 2001;
    double spacing() const { return (x_max - x_min) / (n - 1); }
};

using Mat2 = std::array<std::array<cplx, 2>, 2>;

// Coefficient matrix W(x) of d/dx (psi_A, psi_B)^T = W (psi_A, psi_B)^T after
// eliminating psi_C = (V31 psi_A + V32 psi_B)/(e - V33).  Throws
// AlgebraicDegeneracy when |e - V33(x)| <= 1e-8 * max(1, |e|).
Mat2 reduce_to_two_components(const DiracModel& model, double e, double x);

// Reconstructs psi_C from (psi_A, psi_B) at (e, x) via the algebraic relation.
cplx third_component(const DiracModel& model, double e, double x, cplx psi_a, cplx psi_b);

// sup over the grid of ||(-i hv S1 psi' + V psi - e psi)||_inf, divided by
// max(1, sup ||psi||_inf).
double eigen_residual(const DiracModel& model, const SpinorFunction& psi, double e,
                      const Grid& grid);

struct SpectrumReport {
    std::vector<double> found_energies;      // ascending
    std::vector<double> residuals;           // |matching determinant| at each root
    std::vector<double> expected;            // caller-supplied reference, if any
    std::vector<double> degenerate_energies; // excluded: psi_C elimination breaks down
};

// Scans n_scan energies over e_range, shooting decaying solutions from -L and
// +L toward x = 0 and bisecting sign changes of the matching determinant to
// 1e-10.  Requires the potential to have flattened out: ||V(+-L) - V(+-2L)||
// < 1e-8, else NonAsymptoticPotential.  Energies where the two-component
// reduction degenerates are excluded and reported separately.
SpectrumReport shoot_bound_states(const DiracModel& model, std::pair<double, double> e_range,
                                  int n_scan, double L,
                                  const std::vector<double>& expected = {});

}  // namespace liebdx
