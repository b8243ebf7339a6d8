#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pfsic {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Matrix-level algebraic identities (completeness, Gram conditions,
// orthogonality) are enforced at kAlgebraTol; scalar normalization checks at
// kNormTol. Both sit well above double accumulation error for d <= 64,
// n <= 256.
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

// Threshold on the fiducial-overlap probability |<0|psi^xi>|^2 below which an
// outcome counts as orthogonal to the fiducial state.
inline constexpr double kOrthThreshold = 1e-12;

}  // namespace pfsic
