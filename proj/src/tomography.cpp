#include "pfsic/tomography.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "pfsic/constructions.hpp"
#include "pfsic/fisher.hpp"
#include "pfsic/rng.hpp"

namespace pfsic {

namespace {

std::vector<std::int64_t> sample_counts(const std::vector<double>& cdf,
                                        std::int64_t n_shots,
                                        std::uint64_t seed) {
  std::vector<std::int64_t> counts(cdf.size(), 0);
  SplitMix64 rng(seed);
  for (std::int64_t shot = 0; shot < n_shots; ++shot) {
    const double u = rng.next_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= counts.size()) {
      idx = counts.size() - 1;  // guard against cumulative rounding
    }
    ++counts[idx];
  }
  return counts;
}

std::vector<double> cumulative(const Vector& probs) {
  std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
  double running = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    running += probs[i];
    cdf[static_cast<std::size_t>(i)] = running;
  }
  return cdf;
}

// Shared core of the one-step estimator: x_hat = C^{-1} D^T (f / p0) with the
// derivative rows D^xi_a/p0^xi reduced to 2 b_k^xi / b_0^xi.
struct LinearEstimator {
  LinearEstimator(const RankOnePOVM& povm, double orth_threshold)
      : param_dim(2 * povm.dim() - 2) {
    const RealDecomposition rd = real_decomposition(povm);
    const int d = povm.dim();
    const int n = povm.n_outcomes();

    const Matrix c = classical_fisher(povm, orth_threshold);
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    if (es.info() != Eigen::Success ||
        es.eigenvalues().minCoeff() <= 1e-9) {
      throw std::runtime_error("not locally informationally complete");
    }
    c_inverse = es.eigenvectors() *
                es.eigenvalues().cwiseInverse().asDiagonal() *
                es.eigenvectors().transpose();

    design = Matrix::Zero(param_dim, n);
    for (int xi = 0; xi < n; ++xi) {
      const double b0 = rd.b_rows()(0, xi);
      if (b0 * b0 < orth_threshold) {
        continue;  // excluded outcomes contribute nothing to C or s
      }
      for (int k = 1; k < d; ++k) {
        design(LocalParams::index(k, 0), xi) = 2.0 * rd.b_rows()(k, xi) / b0;
        design(LocalParams::index(k, 1), xi) = 2.0 * rd.c_rows()(k, xi) / b0;
      }
    }
  }

  Vector estimate(const Vector& frequencies) const {
    return c_inverse * (design * frequencies);
  }

  int param_dim;
  Matrix design;     // param_dim x n, zero columns on excluded outcomes
  Matrix c_inverse;  // C^{-1}
};

}  // namespace

std::vector<std::int64_t> sample_outcomes(const RankOnePOVM& povm,
                                          const PureState& state,
                                          std::int64_t n_shots,
                                          std::uint64_t seed) {
  if (n_shots < 1) {
    throw std::invalid_argument("shot count must be >= 1");
  }
  return sample_counts(cumulative(outcome_probabilities(povm, state)), n_shots,
                       seed);
}

LocalParams estimate_from_frequencies(const RankOnePOVM& povm,
                                      const Vector& frequencies,
                                      double orth_threshold) {
  if (frequencies.size() != povm.n_outcomes()) {
    throw std::invalid_argument("frequency vector length must equal the "
                                "outcome count");
  }
  const LinearEstimator estimator(povm, orth_threshold);
  return LocalParams(povm.dim(), estimator.estimate(frequencies));
}

LocalParams estimate_local(const RankOnePOVM& povm,
                           const std::vector<std::int64_t>& counts,
                           double orth_threshold) {
  if (static_cast<int>(counts.size()) != povm.n_outcomes()) {
    throw std::invalid_argument("count vector length must equal the outcome "
                                "count");
  }
  const std::int64_t total =
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total < 1) {
    throw std::invalid_argument("count vector must contain at least one shot");
  }
  Vector frequencies(counts.size());
  for (std::size_t xi = 0; xi < counts.size(); ++xi) {
    frequencies[static_cast<Eigen::Index>(xi)] =
        static_cast<double>(counts[xi]) / static_cast<double>(total);
  }
  return estimate_from_frequencies(povm, frequencies, orth_threshold);
}

SimReport run_trials(const SimConfig& config) {
  if (config.shots_per_trial < 1) {
    throw std::invalid_argument("shots_per_trial must be >= 1");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  const int d = config.povm.dim();
  const int n = config.povm.n_outcomes();
  const int p = 2 * d - 2;
  const std::int64_t shots = config.shots_per_trial;
  const int trials = config.trials;

  const PureState truth = perturbed_state(d, config.true_params);
  const std::vector<double> cdf =
      cumulative(outcome_probabilities(config.povm, truth));
  const LinearEstimator estimator(config.povm, config.orth_threshold);

  Matrix estimates(trials, p);
  const auto run_trial = [&](int t) {
    const std::vector<std::int64_t> counts =
        sample_counts(cdf, shots, substream_seed(config.seed,
                                                 static_cast<std::uint64_t>(t)));
    Vector frequencies(n);
    for (int xi = 0; xi < n; ++xi) {
      frequencies[xi] = static_cast<double>(counts[static_cast<std::size_t>(xi)]) /
                        static_cast<double>(shots);
    }
    estimates.row(t) = estimator.estimate(frequencies).transpose();
  };

  int workers = config.threads;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) {
      workers = 1;
    }
  }
  workers = std::min(workers, trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) {
      run_trial(t);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int t = next.fetch_add(1);
          if (t >= trials) {
            return;
          }
          run_trial(t);
        }
      });
    }
    for (auto& worker : pool) {
      worker.join();
    }
  }

  SimReport report;
  report.dim = d;
  report.n_outcomes = n;
  report.shots_per_trial = shots;
  report.trials = trials;
  report.seed = config.seed;
  report.rng = kRngName;
  report.true_params = config.true_params.x();
  report.estimates = std::move(estimates);
  // Reduction in fixed trial order: identical for any worker count.
  report.empirical_mean = report.estimates.colwise().mean().transpose();
  report.predicted_cov = estimator.c_inverse / static_cast<double>(shots);

  if (trials < 2) {
    report.insufficient_trials = true;
    report.empirical_cov = Matrix();
    return report;
  }
  const Matrix centered =
      report.estimates.rowwise() - report.empirical_mean.transpose();
  report.empirical_cov =
      centered.transpose() * centered / static_cast<double>(trials - 1);

  double max_rel = 0.0;
  double max_off = 0.0;
  for (int a = 0; a < p; ++a) {
    max_rel = std::max(max_rel,
                       std::abs(report.empirical_cov(a, a) -
                                report.predicted_cov(a, a)) /
                           report.predicted_cov(a, a));
    for (int b = 0; b < p; ++b) {
      if (a != b) {
        max_off = std::max(max_off, std::abs(report.empirical_cov(a, b)));
      }
    }
  }
  report.max_relative_diag_error = max_rel;
  report.offdiag_max_abs = max_off;
  return report;
}

std::pair<Vector, Vector> trine_ambiguity_demo(const LocalParams& params) {
  if (params.dim() != 2) {
    throw std::invalid_argument("trine demo is defined for d = 2");
  }
  const RankOnePOVM trine = minimal_pfsic(2);
  const PureState state = perturbed_state(2, params);

  const Complex a0 = state.amplitude(0);
  const Complex a1 = state.amplitude(1);
  const Complex cross = std::conj(a0) * a1;
  const double rx = 2.0 * cross.real();
  const double ry = 2.0 * cross.imag();
  const double rz = std::norm(a0) - std::norm(a1);

  // Pure state with Bloch vector (rx, ry, -rz).
  CVector flipped(2);
  const double b0 = std::sqrt(std::max(0.0, (1.0 - rz) / 2.0));
  if (b0 < 1e-15) {
    flipped << Complex(0.0, 0.0), Complex(1.0, 0.0);
  } else {
    flipped << Complex(b0, 0.0), Complex(rx, ry) / (2.0 * b0);
  }

  const Vector p_state = outcome_probabilities(trine, state);
  const Vector p_flipped = outcome_probabilities(trine, make_pure_state(flipped));
  if ((p_state - p_flipped).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::logic_error(
        "trine distinguished a Bloch z flip; this cannot happen for "
        "equatorial POVM elements");
  }
  return {p_state, p_flipped};
}

}  // namespace pfsic
