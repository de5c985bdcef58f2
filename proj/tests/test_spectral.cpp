#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "liebdx/cases.hpp"
#include "liebdx/errors.hpp"
#include "liebdx/spectral.hpp"

using namespace liebdx;

namespace {

const cplx I{0.0, 1.0};

bool contains(const std::vector<double>& v, double e, double tol) {
    for (double x : v)
        if (std::abs(x - e) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("two-component reduction of the free model") {
    DiracModel h = free_hamiltonian(1.0, 1.0);
    double e = 0.6;

    // Third component of a gap eigensolution is reproduced algebraically:
    // psi_C = (V31 psi_A + V32 psi_B)/(e - V33) = i m psi_B / e for V = m S3.
    SpinorFunction g = gap_solution(e, 1.0, 1.0, Parity::even_A);
    for (double x : {-1.4, 0.2, 2.5}) {
        Vec3 v = g.value_at(x);
        cplx c = third_component(h, e, x, v[0], v[1]);
        CHECK(std::abs(c - v[2]) < 1e-12 * std::max(1.0, std::abs(v[2])));
        CHECK(std::abs(c - I * 1.0 * v[1] / e) < 1e-12 * std::max(1.0, std::abs(c)));
    }

    // The derivative of (psi_A, psi_B) follows the reduced coefficient matrix.
    Mat2 w = reduce_to_two_components(h, e, 0.7);
    Vec3 v = g.value_at(0.7), dv = g.derivative_at(0.7);
    CHECK(std::abs(w[0][0] * v[0] + w[0][1] * v[1] - dv[0]) < 1e-12);
    CHECK(std::abs(w[1][0] * v[0] + w[1][1] * v[1] - dv[1]) < 1e-12);

    // At e = 0 the elimination degenerates for the free model (V33 = 0).
    CHECK_THROWS_AS(reduce_to_two_components(h, 0.0, 1.0), AlgebraicDegeneracy);
    try {
        reduce_to_two_components(h, 0.0, 1.0);
    } catch (const AlgebraicDegeneracy& ex) {
        CHECK(ex.energy() == 0.0);
    }
}

TEST_CASE("reduction of the fourth family reproduces its two-component operator") {
    CaseModel p{CaseTag::IV, 1.0, 0.5, 1.0, 1.0, false};
    TransformedModel tm = case4_model(p);
    double nu = p.nu();
    for (double e : {0.3, 1.2, -0.8}) {
        for (double x : {-1.6, 0.4, 2.2}) {
            Mat2 w = reduce_to_two_components(tm.model, e, x);
            // d/dx (psi_A, psi_B) = (1/(i hv)) [[V21, V22-e], [V11-e, V12]].
            double t = p.hv * nu * std::tanh(nu * x);
            Mat2 want{{{I * t / (I * p.hv), (p.eps - e) / (I * p.hv)},
                       {(-p.eps - e) / (I * p.hv), -I * t / (I * p.hv)}}};
            double worst = 0.0;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    worst = std::max(worst, std::abs(w[r][c] - want[r][c]));
            CHECK(worst < 1e-13);
        }
    }
}

TEST_CASE("reduction fidelity at random points") {
    // Reconstructing psi_C from a reduced state and substituting into the
    // full three-component equation leaves no residual in the first two rows.
    CaseModel p{CaseTag::I, 1.0, 0.75, 1.0, 1.0, false};
    TransformedModel tm = case1_model(p);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-6.0, 6.0), ue(-3.0, 3.0), uc(-1.0, 1.0);
    int done = 0;
    while (done < 20) {
        double x = ux(rng), e = ue(rng);
        Mat3 v = tm.model.potential(x);
        if (std::abs(e - v[2][2]) < 0.1) continue;
        ++done;
        cplx a{uc(rng), uc(rng)}, b{uc(rng), uc(rng)};
        Mat2 w = reduce_to_two_components(tm.model, e, x);
        cplx da = w[0][0] * a + w[0][1] * b;
        cplx db = w[1][0] * a + w[1][1] * b;
        cplx c = third_component(tm.model, e, x, a, b);
        // Rows 1 and 2 of (-i hv S1 d/dx + V - e) psi with psi' = (da, db, *).
        cplx r0 = -I * tm.model.hv * db + v[0][0] * a + v[0][1] * b + v[0][2] * c - e * a;
        cplx r1 = -I * tm.model.hv * da + v[1][0] * a + v[1][1] * b + v[1][2] * c - e * b;
        // Row 3 is the defining algebraic relation.
        cplx r2 = v[2][0] * a + v[2][1] * b + v[2][2] * c - e * c;
        CHECK(std::abs(r0) < 1e-10);
        CHECK(std::abs(r1) < 1e-10);
        CHECK(std::abs(r2) < 1e-10);
    }
}

TEST_CASE("grid eigen-residuals accept true eigensolutions and reject shifts") {
    CaseModel p1{CaseTag::I, 1.0, 0.75, 1.0, 1.0, false};
    TransformedModel t1 = case1_model(p1);
    Grid grid{-10.0, 10.0, 2001};
    CHECK(eigen_residual(t1.model, t1.missing_states[1], 0.0, grid) < 1e-10);
    CHECK(eigen_residual(t1.model, t1.missing_states[0], 0.75, grid) < 1e-10);

    CaseModel p4{CaseTag::IV, 1.0, 0.5, 1.0, 1.0, false};
    TransformedModel t4 = case4_model(p4);
    CHECK(eigen_residual(t4.model, t4.missing_states[0], 0.5, grid) < 1e-12);

    // A wrong energy leaves a visible residual.
    CHECK(eigen_residual(t1.model, t1.missing_states[1], 0.1, grid) > 1e-3);

    // Halving the spacing does not move a converged residual: the statistic
    // is h-independent because the derivatives are analytic.
    Grid fine{-10.0, 10.0, 4001};
    double a = eigen_residual(t4.model, t4.missing_states[0], 0.5, grid);
    double b = eigen_residual(t4.model, t4.missing_states[0], 0.5, fine);
    CHECK(std::abs(a - b) < 1e-12);

    CHECK_THROWS_AS(eigen_residual(t1.model, t1.missing_states[0], 0.75, Grid{-1.0, 1.0, 2}),
                    InvalidParameters);
    CHECK_THROWS_AS(eigen_residual(t1.model, t1.missing_states[0], 0.75, Grid{1.0, -1.0, 101}),
                    InvalidParameters);
}

TEST_CASE("bound-state shooting recovers the discrete spectra") {
    double window = 0.99;

    CaseModel p1{CaseTag::I, 1.0, 0.75, 1.0, 1.0, false};
    TransformedModel t1 = case1_model(p1);
    SpectrumReport r1 =
        shoot_bound_states(t1.model, {-window, window}, 201, 30.0, t1.point_spectrum);
    CHECK(contains(r1.found_energies, 0.75, 1e-8));
    CHECK(contains(r1.found_energies, -0.75, 1e-8));
    for (double e : r1.found_energies)
        CHECK((std::abs(e - 0.75) < 1e-8 || std::abs(e + 0.75) < 1e-8));
    CHECK(r1.expected == t1.point_spectrum);
    // The zero eigenvalue coincides with the degenerate zone of the
    // elimination; it is reported there rather than as a shooting root.
    CHECK(!r1.degenerate_energies.empty());
    bool zero_flagged = false;
    for (double e : r1.degenerate_energies) zero_flagged |= std::abs(e) < 1e-2;
    CHECK(zero_flagged);

    CaseModel p2{CaseTag::II, 1.0, -0.25, 1.0, 1.0, false};
    TransformedModel t2 = case2_model(p2);
    SpectrumReport r2 = shoot_bound_states(t2.model, {-window, window}, 201, 30.0);
    CHECK(contains(r2.found_energies, -0.25, 1e-8));
    for (double e : r2.found_energies) CHECK(std::abs(e + 0.25) < 1e-8);

    CaseModel pm{CaseTag::II, 1.0, 0.25, 1.0, 1.0, true};
    TransformedModel tmirror = case2_model(pm);
    SpectrumReport rm = shoot_bound_states(tmirror.model, {-window, window}, 201, 30.0);
    CHECK(contains(rm.found_energies, 0.25, 1e-8));

    // Third family: the only bound state sits at zero, inside the degenerate
    // zone, so the scan finds no isolated roots.
    CaseModel p3{CaseTag::III, 1.0, 0.75, 1.0, 1.0, false};
    TransformedModel t3 = case3_model(p3);
    SpectrumReport r3 = shoot_bound_states(t3.model, {-window, window}, 201, 30.0);
    CHECK(r3.found_energies.empty());

    CaseModel p4{CaseTag::IV, 1.0, 0.5, 1.0, 1.0, false};
    TransformedModel t4 = case4_model(p4);
    SpectrumReport r4 = shoot_bound_states(t4.model, {-window, window}, 201, 30.0);
    CHECK(contains(r4.found_energies, 0.5, 1e-8));
    for (double e : r4.found_energies) CHECK(std::abs(e - 0.5) < 1e-8);

    // Residuals at the accepted roots are small.
    for (const SpectrumReport* r : {&r1, &r2, &rm, &r4})
        for (double res : r->residuals) CHECK(res < 1e-6);

    // The free model has no bound states at all.
    DiracModel h = free_hamiltonian(1.0, 1.0);
    SpectrumReport rf = shoot_bound_states(h, {-0.9, 0.9}, 101, 20.0);
    CHECK(rf.found_energies.empty());
}

TEST_CASE("shooting validates its inputs") {
    DiracModel h = free_hamiltonian(1.0, 1.0);
    CHECK_THROWS_AS(shoot_bound_states(h, {-0.5, 0.5}, 1, 20.0), InvalidParameters);
    CHECK_THROWS_AS(shoot_bound_states(h, {0.5, -0.5}, 101, 20.0), InvalidParameters);
    CHECK_THROWS_AS(shoot_bound_states(h, {-0.5, 0.5}, 101, -3.0), InvalidParameters);

    // A potential that never flattens out is rejected.
    DiracModel linear = h;
    linear.potential = [](double x) {
        return mat_scale(cplx(1.0 + 0.05 * x, 0.0), spin_generators().s3);
    };
    linear.potential_derivative = [](double) {
        return mat_scale(cplx(0.05, 0.0), spin_generators().s3);
    };
    CHECK_THROWS_AS(shoot_bound_states(linear, {-0.5, 0.5}, 11, 20.0),
                    NonAsymptoticPotential);
}
