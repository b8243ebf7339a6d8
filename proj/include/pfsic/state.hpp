#pragma once

#include "pfsic/types.hpp"

namespace pfsic {

/// Normalized pure state in dimension d >= 2. Basis vector 0 plays the role
/// of the fiducial state throughout the toolkit.
class PureState {
 public:
  /// Requires amplitudes already normalized within kNormTol; use
  /// make_pure_state to normalize an arbitrary nonzero vector.
  explicit PureState(CVector amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex amplitude(int k) const { return amps_[k]; }

 private:
  CVector amps_;
};

/// Normalizes a nonzero amplitude vector. Throws std::invalid_argument
/// ("degenerate state") for the zero vector.
PureState make_pure_state(const CVector& amplitudes);

/// The fiducial state |0>.
PureState fiducial_state(int d);

/// Local deviation parameters x = (x^{1,0}, x^{1,1}, ..., x^{d-1,0},
/// x^{d-1,1}). Component alpha = 2(k-1)+sigma is x^{k,sigma}; this ordering
/// is a repo-wide contract shared by all Fisher matrices and estimates.
class LocalParams {
 public:
  LocalParams(int dim, Vector x);

  static LocalParams zero(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(x_.size()); }
  const Vector& x() const { return x_; }
  double at(int k, int sigma) const { return x_[index(k, sigma)]; }

  /// alpha = 2(k-1)+sigma for k in 1..d-1, sigma in {0,1}.
  static int index(int k, int sigma) { return 2 * (k - 1) + sigma; }

 private:
  int dim_;
  Vector x_;
};

/// Exactly normalized version of |0> + sum_k (x^{k0} + i x^{k1}) |k>.
/// The exact normalization keeps sampled probabilities a true distribution;
/// at x = 0 it coincides with the linear model. Warns on stderr when
/// max |x^{k,sigma}| > 0.2, where the linear model is no longer meaningful.
PureState perturbed_state(int d, const LocalParams& params);

}  // namespace pfsic
