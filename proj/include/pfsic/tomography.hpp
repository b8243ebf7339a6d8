#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pfsic/povm.hpp"
#include "pfsic/state.hpp"
#include "pfsic/types.hpp"

namespace pfsic {

/// Multinomial draw of n_shots outcomes from the POVM's distribution at
/// `state`; counts sum to n_shots. Deterministic in the seed.
std::vector<std::int64_t> sample_outcomes(const RankOnePOVM& povm,
                                          const PureState& state,
                                          std::int64_t n_shots,
                                          std::uint64_t seed);

/// One-step weighted-least-squares estimate of the local parameters from
/// observed outcome frequencies f:
///   x_hat = C^{-1} s,  s_a = sum_xi (D^xi_a / p0^xi) f^xi,
/// with D^xi_{k0} = 2 b_0^xi b_k^xi, D^xi_{k1} = 2 b_0^xi c_k^xi the
/// probability derivatives at the fiducial state. Outcomes orthogonal to the
/// fiducial state are excluded, matching classical_fisher. The estimator is
/// exact at f = p0 and attains covariance C^{-1}/N asymptotically.
/// Throws std::runtime_error("not locally informationally complete") when C
/// is singular.
LocalParams estimate_from_frequencies(const RankOnePOVM& povm,
                                      const Vector& frequencies,
                                      double orth_threshold = kOrthThreshold);

LocalParams estimate_local(const RankOnePOVM& povm,
                           const std::vector<std::int64_t>& counts,
                           double orth_threshold = kOrthThreshold);

struct SimConfig {
  RankOnePOVM povm;
  LocalParams true_params;
  std::int64_t shots_per_trial = 0;  // N
  int trials = 0;                    // M
  std::uint64_t seed = 0;
  int threads = 1;  // 0 = one worker per hardware thread
  double orth_threshold = kOrthThreshold;
};

struct SimReport {
  int dim = 0;
  int n_outcomes = 0;
  std::int64_t shots_per_trial = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  /// Generator identity, for reproducibility.
  std::string rng;
  Vector true_params;
  /// trials x (2d-2); row t is the estimate of trial t.
  Matrix estimates;
  Vector empirical_mean;
  /// Sample covariance (0 x 0 when trials < 2).
  Matrix empirical_cov;
  /// (N C)^{-1}; for a PFSIC this is I/(2N).
  Matrix predicted_cov;
  double max_relative_diag_error = std::numeric_limits<double>::quiet_NaN();
  double offdiag_max_abs = std::numeric_limits<double>::quiet_NaN();
  bool insufficient_trials = false;
};

/// Runs `trials` independent sample->estimate trials at the exactly
/// normalized perturbed state. Trial t draws its outcomes from substream
/// (seed, t), so results are identical whether trials run sequentially or in
/// parallel. Statistics are reduced in trial order from the stored estimates.
SimReport run_trials(const SimConfig& config);

/// Trine outcome probabilities for the perturbed d=2 state and for the state
/// whose Bloch z component is flipped. The two distributions agree to 1e-12
/// (the op throws otherwise): the trine is blind to the sign of the z
/// component, so local informational completeness does not imply global.
std::pair<Vector, Vector> trine_ambiguity_demo(const LocalParams& params);

}  // namespace pfsic
