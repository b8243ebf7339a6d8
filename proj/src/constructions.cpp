#include "pfsic/constructions.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace pfsic {

OrthogonalMatrix::OrthogonalMatrix(Matrix entries, double tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw std::invalid_argument("orthogonal matrix must be square");
  }
  const Matrix residual = entries_.transpose() * entries_ -
                          Matrix::Identity(entries_.rows(), entries_.cols());
  const double max_abs = residual.cwiseAbs().maxCoeff();
  if (!(max_abs <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not orthogonal: max-abs residual of O^T O - I is "
        << max_abs;
    throw std::invalid_argument(msg.str());
  }
}

OrthogonalMatrix OrthogonalMatrix::identity(int m) {
  return OrthogonalMatrix(Matrix::Identity(m, m));
}

RealBasisSpec::RealBasisSpec(Matrix rows, double tol) : rows_(std::move(rows)) {
  if (rows_.rows() != rows_.cols() || rows_.rows() < 2) {
    throw std::invalid_argument("real basis must be a square matrix, d >= 2");
  }
  const Matrix residual = rows_ * rows_.transpose() -
                          Matrix::Identity(rows_.rows(), rows_.cols());
  const double max_abs = residual.cwiseAbs().maxCoeff();
  if (!(max_abs <= tol)) {
    std::ostringstream msg;
    msg << "basis rows are not orthonormal: max-abs Gram residual " << max_abs;
    throw std::invalid_argument(msg.str());
  }
  if (rows_.row(0).minCoeff() <= 0.0) {
    throw std::invalid_argument(
        "first basis row must have strictly positive components");
  }
}

RankOnePOVM minimal_pfsic(int d) {
  if (d < 2) {
    throw std::invalid_argument("minimal PFSIC requires d >= 2");
  }
  const int n = 2 * d - 1;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double inv_root2 = 1.0 / std::sqrt(2.0);

  CMatrix a(d, n);
  a.row(0).setConstant(Complex(1.0 / root_n, 0.0));
  for (int j = 1; j < d; ++j) {
    for (int xi = 0; xi < n; ++xi) {
      // The natural basis vectors projected orthogonal to b_0 and then
      // re-orthonormalized by subtracting a multiple of the projected e_0.
      const double common =
          ((xi == 0 ? 1.0 : 0.0) + 1.0 / root_n) / (root_n + 1.0);
      const double b = ((xi == 2 * j - 1 ? 1.0 : 0.0) - common) * inv_root2;
      const double c = ((xi == 2 * j ? 1.0 : 0.0) - common) * inv_root2;
      a(j, xi) = Complex(b, c);
    }
  }
  return RankOnePOVM(std::move(a));
}

RealBasisSpec symmetric_real_basis(int d) {
  if (d < 2) {
    throw std::invalid_argument("symmetric real basis requires d >= 2");
  }
  const double root_d = std::sqrt(static_cast<double>(d));
  Matrix rows(d, d);
  rows.row(0).setConstant(1.0 / root_d);
  for (int j = 1; j < d; ++j) {
    for (int xi = 0; xi < d; ++xi) {
      const double common =
          ((xi == 0 ? 1.0 : 0.0) + 1.0 / root_d) / (root_d + 1.0);
      rows(j, xi) = common - (xi == j ? 1.0 : 0.0);
    }
  }
  return RealBasisSpec(std::move(rows));
}

RankOnePOVM two_basis_pfsic(int d, double p_chi,
                            const std::optional<RealBasisSpec>& basis) {
  if (d < 2) {
    throw std::invalid_argument("two-basis POVM requires d >= 2");
  }
  if (!(p_chi >= 0.0 && p_chi <= 1.0)) {
    throw std::invalid_argument("p_chi must lie in [0, 1]");
  }
  const RealBasisSpec u = basis ? *basis : symmetric_real_basis(d);
  if (u.dim() != d) {
    throw std::invalid_argument("basis dimension does not match d");
  }
  const double p_tau = 1.0 - p_chi;
  const double w_chi = std::sqrt(p_chi);
  const double w_tau = std::sqrt(p_tau);

  // A zero-weight basis contributes only zero vectors; drop it and return the
  // surviving orthonormal basis as a d-outcome POVM.
  const bool keep_chi = p_chi > 0.0;
  const bool keep_tau = p_tau > 0.0;
  const int n = (keep_chi ? d : 0) + (keep_tau ? d : 0);

  CMatrix a(d, n);
  int col = 0;
  if (keep_chi) {
    for (int xi = 0; xi < d; ++xi, ++col) {
      for (int j = 0; j < d; ++j) {
        a(j, col) = Complex(w_chi * u.rows()(j, xi), 0.0);
      }
    }
  }
  if (keep_tau) {
    // tau basis: same real components with rows 1..d-1 rotated by i, which is
    // the gauge-fixed form of the basis whose zero components carry phase -i.
    for (int xi = 0; xi < d; ++xi, ++col) {
      a(0, col) = Complex(w_tau * u.rows()(0, xi), 0.0);
      for (int j = 1; j < d; ++j) {
        a(j, col) = Complex(0.0, w_tau * u.rows()(j, xi));
      }
    }
  }
  return RankOnePOVM(std::move(a));
}

RankOnePOVM orthogonal_mix(const RankOnePOVM& povm, const OrthogonalMatrix& mix,
                           bool strict, double orth_threshold) {
  const int n = povm.n_outcomes();
  const int m = mix.size();
  if (m < n) {
    throw std::invalid_argument(
        "orthogonal mix must have size >= the outcome count (" +
        std::to_string(n) + "); got " + std::to_string(m));
  }
  CMatrix padded = CMatrix::Zero(povm.dim(), m);
  padded.leftCols(n) = povm.matrix();
  // |phi^xi> = sum_eta O^xi_eta |psi^eta>
  CMatrix mixed = padded * mix.entries().transpose().cast<Complex>();
  RankOnePOVM result = gauge_fix(RankOnePOVM(std::move(mixed)));
  if (strict) {
    for (int xi = 0; xi < result.n_outcomes(); ++xi) {
      const double p0 = std::norm(result.matrix()(0, xi));
      if (p0 < orth_threshold) {
        throw std::runtime_error(
            "orthogonal mix left outcome " + std::to_string(xi) +
            " orthogonal to the fiducial state (strict mode)");
      }
    }
  }
  return result;
}

}  // namespace pfsic
