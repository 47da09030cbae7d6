#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace displacemon {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;

constexpr double pi = 3.14159265358979323846;
constexpr cxd iu{0.0, 1.0};

// CODATA values, 6 significant figures. SI throughout; flux quantum h/2e.
namespace constants {
constexpr double hbar = 1.05457e-34;     // J s
constexpr double planck = 6.62607e-34;   // J s
constexpr double k_boltzmann = 1.38065e-23; // J/K
constexpr double electron_charge = 1.60218e-19; // C
constexpr double flux_quantum = planck / (2.0 * electron_charge); // Wb
} // namespace constants

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerics-class failures (CLI exit code 3).
struct NumericsError : SimError {
    using SimError::SimError;
};

struct TruncationRisk : NumericsError {
    using NumericsError::NumericsError;
};
struct ZeroProbability : NumericsError {
    using NumericsError::NumericsError;
};
struct SingularBias : NumericsError {
    using NumericsError::NumericsError;
};
struct StepTooLarge : NumericsError {
    using NumericsError::NumericsError;
};
struct GridTooSmall : NumericsError {
    using NumericsError::NumericsError;
};
struct UnderResolved : NumericsError {
    using NumericsError::NumericsError;
};
struct NotConverged : NumericsError {
    using NumericsError::NumericsError;
};
struct InvalidGeometry : SimError {
    using SimError::SimError;
};
struct ConfigError : SimError {
    using SimError::SimError;
};
struct IOError : SimError {
    using SimError::SimError;
};

} // namespace displacemon
