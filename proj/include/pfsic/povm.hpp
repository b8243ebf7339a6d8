#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pfsic/state.hpp"
#include "pfsic/types.hpp"

namespace pfsic {

/// POVM completeness violation. Carries the max-abs entry of
/// sum_xi |psi^xi><psi^xi| - identity (equivalently, the residual of the
/// real-form Gram conditions).
class CompletenessError : public std::runtime_error {
 public:
  CompletenessError(const std::string& what, double residual);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Max-abs entry of sum_xi |psi^xi><psi^xi| - I for column vectors of a d x n
/// matrix.
double completeness_residual(const CMatrix& vectors);
double completeness_residual(const std::vector<CVector>& vectors);

/// Rank-one POVM with elements E^xi = |psi^xi><psi^xi|, stored as the d x n
/// matrix whose column xi is |psi^xi>. Construction validates n >= d and the
/// completeness condition sum_xi (a^xi_j)* a^xi_k = delta_{jk}, so every
/// instance in the program is a valid POVM.
class RankOnePOVM {
 public:
  explicit RankOnePOVM(CMatrix vectors, double tol = kAlgebraTol);

  int dim() const { return static_cast<int>(vectors_.rows()); }
  int n_outcomes() const { return static_cast<int>(vectors_.cols()); }
  const CMatrix& matrix() const { return vectors_; }
  CVector vector(int xi) const { return vectors_.col(xi); }
  /// E^xi as a dense matrix.
  CMatrix element(int xi) const;

 private:
  CMatrix vectors_;
};

/// Builds a RankOnePOVM from a list of equal-length vectors; throws
/// CompletenessError when the completeness residual exceeds tol.
RankOnePOVM povm_from_vectors(const std::vector<CVector>& vectors,
                              double tol = kAlgebraTol);

/// Rephases every vector by a unit complex factor so that <0|psi^xi> is real
/// and nonnegative. POVM elements are unchanged. A vector with
/// <0|psi^xi> = 0 is left as it is.
RankOnePOVM gauge_fix(const RankOnePOVM& povm);

bool is_gauge_fixed(const RankOnePOVM& povm, double tol = kNormTol);

/// The 2d real n-vectors b_k, c_k with a^xi_k = b_k^xi + i c_k^xi of a
/// gauge-fixed POVM. c_0 = 0 identically and the completeness conditions read
///   b_j.b_k + c_j.c_k = delta_{jk},   b_j.c_k - c_j.b_k = 0.
class RealDecomposition {
 public:
  int dim() const { return static_cast<int>(b_.rows()); }
  int n_outcomes() const { return static_cast<int>(b_.cols()); }
  /// Row k is b_k (resp. c_k).
  const Matrix& b_rows() const { return b_; }
  const Matrix& c_rows() const { return c_; }
  Vector b(int k) const { return b_.row(k).transpose(); }
  Vector c(int k) const { return c_.row(k).transpose(); }

 private:
  friend RealDecomposition real_decomposition(const RankOnePOVM&, double);
  RealDecomposition(Matrix b, Matrix c) : b_(std::move(b)), c_(std::move(c)) {}
  Matrix b_;
  Matrix c_;
};

/// Decomposes a gauge-fixed POVM into its real vectors and re-verifies the
/// Gram conditions within tol. Throws std::invalid_argument for a
/// non-gauge-fixed POVM and CompletenessError when the Gram residual is
/// above tol.
RealDecomposition real_decomposition(const RankOnePOVM& povm,
                                     double tol = kAlgebraTol);

/// Max-abs violation of the real-form completeness conditions.
double gram_residual(const RealDecomposition& rd);

/// p^xi = |<psi^xi|Psi>|^2. Nonnegative and summing to 1 (within the POVM's
/// completeness residual).
Vector outcome_probabilities(const RankOnePOVM& povm, const PureState& state);

}  // namespace pfsic
