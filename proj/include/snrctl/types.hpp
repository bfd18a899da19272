#ifndef SNRCTL_TYPES_HPP
#define SNRCTL_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace snrctl {

using Matrix = Eigen::MatrixXd;
using ColVec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Numerical policy shared across the library.
namespace tol {
// Pole/zero coincidence tolerance used when reducing rational functions.
inline constexpr double kCancel = 1e-9;
// Schur stability: all poles must satisfy |p| < 1 - kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-9;
// |den(e^{iw})| below this counts as a pole on the unit circle.
inline constexpr double kPoleOnCircle = 1e-12;
// Band around the unit circle used when deciding whether a loop root
// forces a perturbation of the Youla parameter.
inline constexpr double kCircleBand = 1e-6;
// Acceptable residual for the Bezout certificate VM + UN = 1.
inline constexpr double kBezout = 1e-8;
// Relative floor for trimming numerical noise in polynomial coefficients.
inline constexpr double kCoeffTrim = 1e-11;
}  // namespace tol

}  // namespace snrctl

#endif
