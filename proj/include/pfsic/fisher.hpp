#pragma once

#include <optional>
#include <vector>

#include "pfsic/povm.hpp"
#include "pfsic/types.hpp"

namespace pfsic {

/// Quantum Fisher matrix at a pure fiducial state in the canonical local
/// parameterization: 4 I_{2d-2}.
Matrix quantum_fisher_pure(int d);

/// Outcomes whose fiducial probability (b_0^xi)^2 falls below the
/// orthogonality threshold. These carry no linear information about the local
/// parameters and are excluded from Fisher sums.
std::vector<int> orthogonal_outcomes(const RankOnePOVM& povm,
                                     double orth_threshold = kOrthThreshold);

/// Classical Fisher matrix at the fiducial state in Gram form,
///   C_{j0,k0} = 4 b_j.b_k,  C_{j1,k1} = 4 c_j.c_k,  C_{j0,k1} = 4 b_j.c_k,
/// with the sums restricted to outcomes not orthogonal to the fiducial
/// state. Requires a gauge-fixed POVM. Indices follow LocalParams::index.
Matrix classical_fisher(const RankOnePOVM& povm,
                        double orth_threshold = kOrthThreshold);

/// Independent finite-difference route to the same matrix: central
/// differences of outcome probabilities over exactly-normalized perturbed
/// states,
///   C_{ab} = sum_xi (1/p^xi) (dp^xi/dx^a)(dp^xi/dx^b).
/// step must lie in [1e-7, 1e-3].
Matrix classical_fisher_fd(const RankOnePOVM& povm, double step = 1e-5,
                           double orth_threshold = kOrthThreshold);

/// Gill-Massar quantity tr(Q^{-1} C); bounded above by d-1. Throws for
/// singular Q.
double gill_massar(const Matrix& c_matrix, const Matrix& q_matrix);

/// Fisher-symmetry quantity tr((Q^{-1/2} C Q^{-1/2})^2); bounded below by
/// [tr(Q^{-1}C)]^2 / p with p the parameter count. Accepts any positive
/// definite Q via eigendecomposition. Throws for singular Q.
double fisher_symmetry_quantity(const Matrix& c_matrix, const Matrix& q_matrix);

struct PfsicVerdict {
  bool pfsic = false;
  /// Max-abs violation of 2 b_j.b_k = delta, 2 c_j.c_k = delta, 2 b_j.c_k = 0.
  double deviation = 0.0;
  double tolerance = 0.0;
  double min_fiducial_prob = 0.0;
  int n_outcomes = 0;
  /// Theoretical floor on the outcome count, 2d-1.
  int min_outcomes = 0;
};

/// A POVM is a PFSIC when C = 2 I_{2d-2} and no element is orthogonal to the
/// fiducial state. Requires a gauge-fixed POVM.
PfsicVerdict is_pfsic(const RankOnePOVM& povm, double tol = 1e-9,
                      double orth_threshold = kOrthThreshold);

struct FdCheck {
  double step = 0.0;
  double max_abs_deviation = 0.0;
};

struct FisherReport {
  int dim = 0;
  int n_outcomes = 0;
  Matrix classical;
  Matrix quantum;
  double gm = 0.0;
  double gm_bound = 0.0;        // d-1
  double symmetry = 0.0;
  double symmetry_floor = 0.0;  // (d-1)/2
  double c_deviation_from_2id = 0.0;
  PfsicVerdict pfsic;
  std::vector<int> excluded_outcomes;
  std::optional<FdCheck> fd;
};

struct FisherOptions {
  double pfsic_tol = 1e-9;
  double orth_threshold = kOrthThreshold;
  bool fd_check = false;
  double fd_step = 1e-5;
};

/// Full Fisher analysis of a gauge-fixed POVM at the fiducial state. Checks
/// the structural facts (C positive semidefinite, the Gill-Massar bound, the
/// symmetry floor) and throws std::logic_error if any fails, since a valid
/// POVM cannot violate them.
FisherReport fisher_report(const RankOnePOVM& povm,
                           const FisherOptions& opts = {});

}  // namespace pfsic
