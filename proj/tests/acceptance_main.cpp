// Acceptance suite: one criterion per function, each printing a PASS/FAIL
// line with its wall-clock time. The binary exits with the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "pfsic/constructions.hpp"
#include "pfsic/fisher.hpp"
#include "pfsic/povm.hpp"
#include "pfsic/rng.hpp"
#include "pfsic/tomography.hpp"

using namespace pfsic;

namespace {

int g_failures = 0;

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::runtime_error(message);
  }
}

std::string fmt(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

void criterion(int id, const std::string& name, double budget_seconds,
               const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string error;
  try {
    body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (error.empty() && elapsed > budget_seconds) {
    error = "runtime " + fmt(elapsed) + " s exceeds budget " +
            fmt(budget_seconds) + " s";
  }
  if (error.empty()) {
    std::printf("[PASS] %2d: %s  (%.3f s)\n", id, name.c_str(), elapsed);
  } else {
    ++g_failures;
    std::printf("[FAIL] %2d: %s  (%.3f s)\n        %s\n", id, name.c_str(),
                elapsed, error.c_str());
  }
  std::fflush(stdout);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

RankOnePOVM computational_basis(int d) {
  return RankOnePOVM(CMatrix::Identity(d, d));
}

// 1. Minimal construction: n = 2d-1, completeness, C = 2I, GM = d-1.
void pfsic_construction_exactness() {
  for (int d = 2; d <= 16; ++d) {
    const RankOnePOVM povm = minimal_pfsic(d);
    require(povm.n_outcomes() == 2 * d - 1,
            "d=" + std::to_string(d) + ": outcome count != 2d-1");
    require(completeness_residual(povm.matrix()) <= 1e-10,
            "d=" + std::to_string(d) + ": completeness residual above 1e-10");
    const Matrix c = classical_fisher(povm);
    const double c_dev =
        max_abs(c - 2.0 * Matrix::Identity(2 * d - 2, 2 * d - 2));
    require(c_dev <= 1e-10,
            "d=" + std::to_string(d) + ": |C - 2I| = " + fmt(c_dev));
    const double gm = gill_massar(c, quantum_fisher_pure(d));
    require(std::abs(gm - (d - 1.0)) <= 1e-10,
            "d=" + std::to_string(d) + ": GM quantity " + fmt(gm));
  }
}

// 2. The d = 2 construction is the trine, with equatorial Bloch vectors.
void trine_reproduction() {
  const RankOnePOVM povm = gauge_fix(minimal_pfsic(2));
  const double inv_root3 = 1.0 / std::sqrt(3.0);
  const Complex phase = std::polar(1.0, std::numbers::pi / 4.0);
  const Complex turn = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  CMatrix expected(2, 3);
  expected << Complex(inv_root3, 0), Complex(inv_root3, 0),
      Complex(inv_root3, 0), -phase * inv_root3, -phase * turn * inv_root3,
      -phase * std::conj(turn) * inv_root3;
  require(max_abs((povm.matrix() - expected).cwiseAbs()) <= 1e-12,
          "trine vectors deviate above 1e-12");
  for (int xi = 0; xi < 3; ++xi) {
    const CVector v = povm.vector(xi);
    const double bloch_z =
        (std::norm(v[0]) - std::norm(v[1])) / v.squaredNorm();
    require(std::abs(bloch_z) <= 1e-12,
            "outcome " + std::to_string(xi) + " leaves the equatorial plane");
  }
}

// 3. Two-basis family: diagonal C, GM saturation for every weight, PFSIC
//    exactly at p = 1/2.
void two_basis_family() {
  for (int d = 2; d <= 8; ++d) {
    for (const double p_chi : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const RankOnePOVM povm = two_basis_pfsic(d, p_chi);
      const Matrix c = classical_fisher(povm);
      Matrix expected = Matrix::Zero(2 * d - 2, 2 * d - 2);
      for (int k = 1; k < d; ++k) {
        expected(LocalParams::index(k, 0), LocalParams::index(k, 0)) =
            4.0 * p_chi;
        expected(LocalParams::index(k, 1), LocalParams::index(k, 1)) =
            4.0 * (1.0 - p_chi);
      }
      require(max_abs(c - expected) <= 1e-10,
              "d=" + std::to_string(d) + ", p=" + fmt(p_chi) +
                  ": C is not the expected diagonal");
      const double gm = gill_massar(c, quantum_fisher_pure(d));
      require(std::abs(gm - (d - 1.0)) <= 1e-9,
              "d=" + std::to_string(d) + ", p=" + fmt(p_chi) +
                  ": GM quantity " + fmt(gm));
      const bool expected_pfsic = p_chi == 0.5;
      require(is_pfsic(povm).pfsic == expected_pfsic,
              "d=" + std::to_string(d) + ", p=" + fmt(p_chi) +
                  ": PFSIC verdict wrong");
    }
  }
}

// 4. Gill-Massar bound over randomized POVMs, with equality whenever no
//    element is near-orthogonal to the fiducial state.
void gm_bound_suite() {
  SplitMix64 rng(0x5eed0004);
  int cases = 0;
  for (int d = 2; d <= 5; ++d) {
    for (int i = 0; i < 130; ++i) {
      const int n = d + static_cast<int>(
                            rng.next() % static_cast<std::uint64_t>(2 * d + 1));
      const RankOnePOVM povm = random_povm(d, n, rng);
      const double gm =
          gill_massar(classical_fisher(povm), quantum_fisher_pure(d));
      require(gm <= d - 1.0 + 1e-9,
              "GM bound violated: " + fmt(gm) + " for d=" + std::to_string(d));
      const double min_prob =
          real_decomposition(povm).b_rows().row(0).cwiseAbs2().minCoeff();
      if (min_prob > 1e-10) {
        require(std::abs(gm - (d - 1.0)) <= 1e-9,
                "GM equality violated at min fiducial probability " +
                    fmt(min_prob));
      }
      ++cases;
    }
  }
  require(cases >= 500, "fewer than 500 cases");
  const double gm_basis = gill_massar(classical_fisher(computational_basis(3)),
                                      quantum_fisher_pure(3));
  require(gm_basis == 0.0, "computational basis GM quantity is not 0");
}

// 5. Gram-form C against the finite-difference oracle.
void fisher_oracle_equivalence() {
  SplitMix64 rng(0x5eed0005);
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + static_cast<int>(rng.next() % 5);
    const int n = d + static_cast<int>(
                          rng.next() % static_cast<std::uint64_t>(2 * d + 1));
    const RankOnePOVM povm = random_povm(d, n, rng);
    const double dev =
        max_abs(classical_fisher(povm) - classical_fisher_fd(povm));
    require(dev <= 1e-6, "oracle deviation " + fmt(dev) + " at case " +
                             std::to_string(i));
  }
}

// 6. Orthogonal mixing keeps PFSICs PFSIC and C invariant.
void mixing_invariance() {
  SplitMix64 rng(0x5eed0006);
  int cases = 0;
  while (cases < 100) {
    for (int d = 2; d <= 5 && cases < 100; ++d, ++cases) {
      const RankOnePOVM base =
          (cases % 2 == 0) ? minimal_pfsic(d) : two_basis_pfsic(d, 0.5);
      const int padding = static_cast<int>(rng.next() % 3);
      const int m = base.n_outcomes() + padding;
      const RankOnePOVM mixed =
          orthogonal_mix(base, OrthogonalMatrix(random_orthogonal(m, rng)));
      require(is_pfsic(mixed).pfsic, "mixed POVM is no longer a PFSIC");
      const double c_change =
          max_abs(classical_fisher(mixed) - classical_fisher(base));
      require(c_change <= 1e-10, "C changed by " + fmt(c_change));
    }
  }
}

// 7. Cramer-Rao saturation: empirical covariance of the estimator matches
//    (N C)^{-1} = I/(2N) for the minimal PFSIC.
void cramer_rao_saturation() {
  SimConfig config{minimal_pfsic(3), LocalParams::zero(3), 100000, 2000,
                   0x5eed0007, 0};
  const SimReport report = run_trials(config);
  const double predicted = 1.0 / (2.0 * 100000.0);
  for (int a = 0; a < 4; ++a) {
    const double rel =
        std::abs(report.empirical_cov(a, a) - predicted) / predicted;
    require(rel <= 0.10, "diagonal entry " + std::to_string(a) +
                             " off by relative " + fmt(rel));
    for (int b = 0; b < 4; ++b) {
      if (a != b) {
        require(std::abs(report.empirical_cov(a, b)) < 1e-6,
                "off-diagonal (" + std::to_string(a) + "," +
                    std::to_string(b) + ") = " +
                    fmt(report.empirical_cov(a, b)));
      }
    }
  }
}

// 8. Information budget: p_chi = 0.8 buys 4x variance contrast between the
//    real and imaginary parameters.
void information_budget_tradeoff() {
  SimConfig config{two_basis_pfsic(2, 0.8), LocalParams::zero(2), 100000, 2000,
                   0x5eed0008, 0};
  const SimReport report = run_trials(config);
  const double ratio =
      report.empirical_cov(1, 1) / report.empirical_cov(0, 0);
  require(std::abs(ratio - 4.0) <= 0.15 * 4.0,
          "variance ratio " + fmt(ratio) + " not within 15% of 4");
}

// 9. Trine global ambiguity: Bloch z-flipped pairs are indistinguishable.
void global_ambiguity() {
  SplitMix64 rng(0x5eed0009);
  for (int i = 0; i < 100; ++i) {
    Vector x(2);
    x << rng.next_double() - 0.5, rng.next_double() - 0.5;
    const auto [p_state, p_flipped] = trine_ambiguity_demo(LocalParams(2, x));
    const double dev = (p_state - p_flipped).cwiseAbs().maxCoeff();
    require(dev <= 1e-12, "probability deviation " + fmt(dev));
  }
}

// 10. No POVM with n < 2d-1 outcomes is ever a PFSIC.
void outcome_floor() {
  SplitMix64 rng(0x5eed000a);
  for (int d = 2; d <= 6; ++d) {
    require(!is_pfsic(computational_basis(d)).pfsic,
            "computational basis passed is_pfsic");
    require(!is_pfsic(two_basis_pfsic(d, 1.0)).pfsic,
            "degenerate two-basis POVM passed is_pfsic");
    for (int i = 0; i < 200; ++i) {
      const int n =
          d + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d - 1));
      const RankOnePOVM povm = random_povm(d, n, rng);
      require(povm.n_outcomes() < 2 * d - 1, "case generator out of range");
      require(!is_pfsic(povm).pfsic,
              "POVM with n = " + std::to_string(n) + " < 2d-1 passed");
    }
  }
}

}  // namespace

int main() {
  criterion(1, "minimal PFSIC construction exactness (d = 2..16)", 1.0,
            pfsic_construction_exactness);
  criterion(2, "trine reproduction and equatorial Bloch vectors", 1.0,
            trine_reproduction);
  criterion(3, "two-basis family: diagonal C, GM saturation, PFSIC at 1/2",
            1.0, two_basis_family);
  criterion(4, "Gill-Massar bound over 520 randomized POVMs", 10.0,
            gm_bound_suite);
  criterion(5, "Gram-form vs finite-difference Fisher matrix (200 POVMs)",
            30.0, fisher_oracle_equivalence);
  criterion(6, "orthogonal-mixing invariance (100 mixes)", 5.0,
            mixing_invariance);
  criterion(7, "Cramer-Rao saturation, d=3, N=1e5, M=2000", 60.0,
            cramer_rao_saturation);
  criterion(8, "information-budget tradeoff at p_chi = 0.8", 30.0,
            information_budget_tradeoff);
  criterion(9, "trine global ambiguity over 100 draws", 1.0, global_ambiguity);
  criterion(10, "PFSIC outcome floor n >= 2d-1", 10.0, outcome_floor);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
