#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace liebdx {

// Inversion rejected: determinant below the scale-aware threshold.
class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix(std::complex<double> det, const std::string& what)
        : std::runtime_error(what), det_(det) {}
    std::complex<double> det() const { return det_; }

private:
    std::complex<double> det_;
};

// Seed matrix not regular at the evaluation point.
class SingularSeed : public std::runtime_error {
public:
    SingularSeed(double x, const std::string& what) : std::runtime_error(what), x_(x) {}
    double x() const { return x_; }

private:
    double x_;
};

// Column energy labels disagree with the requested factorization energies.
class InconsistentLabels : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested eigensolution lies outside its validity window.
class EnergyOutOfRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Both free coefficients of a solution family are zero.
class DegenerateSeed : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Model parameters violate the validity domain of the requested construction.
class InvalidParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The algebraic elimination of the third component degenerates at this energy.
class AlgebraicDegeneracy : public std::runtime_error {
public:
    AlgebraicDegeneracy(double e, double x, const std::string& what)
        : std::runtime_error(what), e_(e), x_(x) {}
    double energy() const { return e_; }
    double x() const { return x_; }

private:
    double e_;
    double x_;
};

// Potential has not flattened out at the requested matching distance.
class NonAsymptoticPotential : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The logarithmic derivative of the seed has not converged at the probe points.
class NoAsymptote : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scattering requested below the propagation band edge.
class EvanescentEnergy : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Tight-binding parameters violate the preconditions of a closed-form regime.
class RegimeViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested feature is accepted by the data model but has no implementation.
class Unsupported : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Command-line / config-file level validation failure.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace liebdx
