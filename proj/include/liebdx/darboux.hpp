#pragma once

// Darboux dressing of 3x3 first-order Dirac models.  A seed matrix U holds
// three eigensolutions at factorization energies Lambda; the intertwiner
// L = d/dx - U'U^{-1} maps eigensolutions of the base model to eigensolutions
// of the transformed one, whose potential is V + i*hv*[U'U^{-1}, S1].

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "liebdx/algebra.hpp"
#include "liebdx/free_model.hpp"

namespace liebdx {

class SeedMatrix {
public:
    SeedMatrix() = default;
    SeedMatrix(std::array<SpinorFunction, 3> cols, std::array<double, 3> lambda);

    const std::array<SpinorFunction, 3>& columns() const { return cols_; }
    const std::array<double, 3>& lambda() const { return lambda_; }
    // True when every column carries an analytic second derivative (needed by
    // anything that differentiates the dressing kernel).
    bool has_second_derivatives() const;

    Mat3 value(double x) const;
    Mat3 derivative(double x) const;

    // Quad-precision internals.  The kernel evaluations equilibrate the
    // columns (scale each to unit norm at the evaluation point) before
    // inverting; U'U^{-1} is exactly invariant under that scaling, which
    // keeps the inversion well-conditioned out to large |x| where the
    // columns' different growth rates would otherwise swamp double and even
    // raw quad precision.
    quad::qmat3 value_q(quad::qreal x) const;
    quad::qmat3 derivative_q(quad::qreal x) const;
    quad::qmat3 second_derivative_q(quad::qreal x) const;

    // G(x) = U'(x) U(x)^{-1}.  Throws SingularSeed when the equilibrated
    // determinant vanishes to quad rounding (|det| <= 1e-25).
    quad::qmat3 log_derivative_q(quad::qreal x) const;
    // (G, G') with G' = U'' U^{-1} - G^2.  Requires second derivatives.
    std::pair<quad::qmat3, quad::qmat3> log_derivative_pair_q(quad::qreal x) const;
    // Raw (unequilibrated) U(x)^{-1}, computed through the equilibrated
    // factorization for accuracy.
    quad::qmat3 inverse_q(quad::qreal x) const;

private:
    std::array<SpinorFunction, 3> cols_;
    std::array<double, 3> lambda_{};
};

// Assembles U = (psi1, psi2, psi3) and checks each column's energy label
// against lambda (flat-band columns must sit at 0).  Throws
// InconsistentLabels on mismatch.
SeedMatrix seed_matrix(const SpinorFunction& psi1, const SpinorFunction& psi2,
                       const SpinorFunction& psi3, const std::array<double, 3>& lambda);

// det U(x).  Zero is a legal return; regularity checking is regularity_scan.
cplx seed_determinant(const SeedMatrix& u, double x);

struct RegularityReport {
    double min_abs_det = 0.0;       // smallest |det U| seen (incl. refinement)
    double argmin = 0.0;            // where it occurred
    bool pass = false;              // |det| > 1e-10 * (max column norm)^3 everywhere
    double threshold_at_argmin = 0.0;
    double min_ratio = 0.0;         // smallest |det| / (max column norm)^3
    double argmin_ratio = 0.0;
};

// Samples |det U| at n uniform points of [domain.first, domain.second] and
// adaptively refines around local minima of the scale-free ratio
// |det| / (max column norm)^3; passes iff the ratio stays above 1e-10.
RegularityReport regularity_scan(const SeedMatrix& u, std::pair<double, double> domain, int n);

// L psi at x: psi'(x) - U'U^{-1} psi(x).  Throws SingularSeed.
Vec3 apply_intertwiner(const SeedMatrix& u, const SpinorFunction& psi, double x);

// base.potential(x) + i * base.hv * [U'U^{-1}, S1].  Throws SingularSeed.
Mat3 transformed_potential(const SeedMatrix& u, const DiracModel& base, double x);

// Columns of (U^{-1})^dagger with energy labels lambda_j, unnormalized.
// Derivatives are analytic via (U^{-1})' = -U^{-1} U' U^{-1}.
std::array<SpinorFunction, 3> missing_states(const SeedMatrix& u);

// sup over n sampled x of || L(H psi) - H~(L psi) ||_inf, all in quad.
// psi must carry an analytic second derivative, as must the seed columns.
double intertwining_residual(const DiracModel& base, const SeedMatrix& u,
                             const SpinorFunction& psi, std::pair<double, double> domain, int n);

struct HermiticityReport {
    double max_defect = 0.0;
    double x_at_max = 0.0;
    bool pass = false;
    double tol = 0.0;
};

// Max hermiticity defect of the transformed potential over n sampled x.
HermiticityReport hermiticity_report(const SeedMatrix& u, const DiracModel& base,
                                     std::pair<double, double> domain, int n,
                                     double tol = 1e-12);

// Composite-Simpson integral of ||psi(x)||^2 over [a, b] (n odd sample count).
double quadrature_norm(const SpinorFunction& psi, double a, double b, int n = 2001);

// psi scaled to unit quadrature norm on [a, b].
SpinorFunction normalized(const SpinorFunction& psi, double a, double b, int n = 2001);

// A dressed model bundled with its originating seed and, when known, its discrete
// spectrum and named scalar potential profiles.
struct TransformedModel {
    DiracModel model;
    SeedMatrix seed;
    std::array<SpinorFunction, 3> missing_states;
    std::vector<double> point_spectrum;  // ascending; empty when unknown
    std::vector<std::pair<std::string, std::function<double(double)>>> profiles;
};

// Generic dressing: potential evaluated through the quad kernel pipeline.
TransformedModel transform(const SeedMatrix& u, const DiracModel& base);

}  // namespace liebdx
