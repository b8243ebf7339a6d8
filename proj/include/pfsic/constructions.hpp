#pragma once

#include <optional>

#include "pfsic/povm.hpp"
#include "pfsic/types.hpp"

namespace pfsic {

/// Real orthogonal matrix, validated O^T O = I within tol at construction.
class OrthogonalMatrix {
 public:
  explicit OrthogonalMatrix(Matrix entries, double tol = kAlgebraTol);

  static OrthogonalMatrix identity(int m);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// d x d real orthogonal matrix whose rows are basis vectors u_j, with every
/// component of the first row strictly positive: rows()(j, xi) = u_j^xi.
class RealBasisSpec {
 public:
  explicit RealBasisSpec(Matrix rows, double tol = kAlgebraTol);

  int dim() const { return static_cast<int>(rows_.rows()); }
  const Matrix& rows() const { return rows_; }

 private:
  Matrix rows_;
};

/// The minimal PFSIC with n = 2d-1 outcomes: b_0 = (1,...,1)/sqrt(n) and the
/// remaining real vectors obtained by projecting the natural basis orthogonal
/// to b_0 and re-orthonormalizing symmetrically. For d = 2 this is the trine
/// measurement in the equatorial plane of the Bloch sphere.
RankOnePOVM minimal_pfsic(int d);

/// Orthogonal d x d basis with first row (1,...,1)/sqrt(d); default basis for
/// two_basis_pfsic. For d = 2 the rows are (1,1)/sqrt2 and (1,-1)/sqrt2.
RealBasisSpec symmetric_real_basis(int d);

/// 2d-outcome POVM that flips a coin with probabilities (p_chi, 1-p_chi)
/// between measuring in a real basis {chi^xi} and its phase-rotated partner
/// {tau^xi}. The classical Fisher matrix is diag(4 p_chi, 4 p_tau, ...); the
/// POVM is a PFSIC exactly at p_chi = 1/2. A degenerate weight (p_chi 0 or 1)
/// drops the zero-weight basis, leaving a d-outcome orthonormal-basis POVM.
RankOnePOVM two_basis_pfsic(int d, double p_chi,
                            const std::optional<RealBasisSpec>& basis = {});

/// Orthogonal mixing |phi^xi> = sum_eta O^xi_eta |psi^eta> of the POVM
/// vectors, zero-padded to mix.size() outcomes when mix.size() exceeds the
/// outcome count. The result is gauge-fixed (negative fiducial overlaps are
/// rephased). Completeness and the classical Fisher matrix are preserved.
/// In strict mode the mix fails when any mixed outcome becomes orthogonal to
/// the fiducial state.
RankOnePOVM orthogonal_mix(const RankOnePOVM& povm, const OrthogonalMatrix& mix,
                           bool strict = true,
                           double orth_threshold = kOrthThreshold);

}  // namespace pfsic
