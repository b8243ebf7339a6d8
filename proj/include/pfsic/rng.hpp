#pragma once

#include <cstdint>

#include "pfsic/constructions.hpp"
#include "pfsic/povm.hpp"
#include "pfsic/types.hpp"

namespace pfsic {

/// Generator identity recorded in simulation reports.
inline constexpr const char* kRngName = "splitmix64";

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed of substream `index` of a master seed. Substreams back per-trial
/// sampling so trials can run in parallel with sequential-identical results.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Small deterministic generator (the splitmix64 sequence). All sampling in
/// the toolkit goes through this so results do not depend on the standard
/// library's distribution implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1), 53 random bits.
  double next_double();
  /// Standard normal via Box-Muller.
  double next_gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-ish random m x m orthogonal matrix (QR of a Gaussian matrix with the
/// sign correction).
Matrix random_orthogonal(int m, SplitMix64& rng);

/// Haar-ish random d x d unitary (QR of a Ginibre matrix with the phase
/// correction).
CMatrix random_unitary(int d, SplitMix64& rng);

/// Random valid rank-one POVM: a random orthonormal basis embedded into n
/// outcomes through a random n x n orthogonal mix. Valid by construction and
/// gauge-fixed; outcomes may come arbitrarily close to fiducial-orthogonal.
RankOnePOVM random_povm(int d, int n, SplitMix64& rng);

}  // namespace pfsic
