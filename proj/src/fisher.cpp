#include "pfsic/fisher.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pfsic {

namespace {

// Eigendecomposition of a symmetric positive definite matrix; throws when any
// eigenvalue is not safely positive.
Eigen::SelfAdjointEigenSolver<Matrix> positive_definite_eigen(
    const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(name) + " matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error(std::string("eigendecomposition of ") + name +
                             " matrix failed");
  }
  const double max_eig = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, max_eig)) {
    throw std::runtime_error(std::string("singular ") + name + " matrix");
  }
  return es;
}

void check_same_shape(const Matrix& c_matrix, const Matrix& q_matrix) {
  if (c_matrix.rows() != q_matrix.rows() ||
      c_matrix.cols() != q_matrix.cols()) {
    throw std::invalid_argument(
        "classical and quantum Fisher matrices must have the same shape");
  }
}

}  // namespace

Matrix quantum_fisher_pure(int d) {
  if (d < 2) {
    throw std::invalid_argument("quantum Fisher matrix requires d >= 2");
  }
  return 4.0 * Matrix::Identity(2 * d - 2, 2 * d - 2);
}

std::vector<int> orthogonal_outcomes(const RankOnePOVM& povm,
                                     double orth_threshold) {
  const RealDecomposition rd = real_decomposition(povm);
  std::vector<int> excluded;
  for (int xi = 0; xi < povm.n_outcomes(); ++xi) {
    const double p0 = rd.b_rows()(0, xi) * rd.b_rows()(0, xi);
    if (p0 < orth_threshold) {
      excluded.push_back(xi);
    }
  }
  return excluded;
}

Matrix classical_fisher(const RankOnePOVM& povm, double orth_threshold) {
  const RealDecomposition rd = real_decomposition(povm);
  const int d = povm.dim();
  const int n = povm.n_outcomes();
  const int p = 2 * d - 2;

  std::vector<int> included;
  included.reserve(static_cast<std::size_t>(n));
  for (int xi = 0; xi < n; ++xi) {
    const double p0 = rd.b_rows()(0, xi) * rd.b_rows()(0, xi);
    if (p0 >= orth_threshold) {
      included.push_back(xi);
    }
  }

  // Sub-matrices over the surviving outcomes, rows 1..d-1.
  Matrix bs(d - 1, static_cast<Eigen::Index>(included.size()));
  Matrix cs(d - 1, static_cast<Eigen::Index>(included.size()));
  for (std::size_t i = 0; i < included.size(); ++i) {
    bs.col(static_cast<Eigen::Index>(i)) =
        rd.b_rows().col(included[i]).tail(d - 1);
    cs.col(static_cast<Eigen::Index>(i)) =
        rd.c_rows().col(included[i]).tail(d - 1);
  }

  const Matrix gbb = 4.0 * (bs * bs.transpose());
  const Matrix gcc = 4.0 * (cs * cs.transpose());
  const Matrix gbc = 4.0 * (bs * cs.transpose());

  Matrix c = Matrix::Zero(p, p);
  for (int j = 1; j < d; ++j) {
    for (int k = 1; k < d; ++k) {
      c(LocalParams::index(j, 0), LocalParams::index(k, 0)) = gbb(j - 1, k - 1);
      c(LocalParams::index(j, 1), LocalParams::index(k, 1)) = gcc(j - 1, k - 1);
      c(LocalParams::index(j, 0), LocalParams::index(k, 1)) = gbc(j - 1, k - 1);
      c(LocalParams::index(k, 1), LocalParams::index(j, 0)) = gbc(j - 1, k - 1);
    }
  }
  return c;
}

Matrix classical_fisher_fd(const RankOnePOVM& povm, double step,
                           double orth_threshold) {
  if (!(step >= 1e-7 && step <= 1e-3)) {
    throw std::invalid_argument(
        "finite-difference step must lie in [1e-7, 1e-3]");
  }
  const int d = povm.dim();
  const int n = povm.n_outcomes();
  const int p = 2 * d - 2;

  const Vector p0 = outcome_probabilities(povm, fiducial_state(d));

  Matrix dp(p, n);
  for (int alpha = 0; alpha < p; ++alpha) {
    Vector x = Vector::Zero(p);
    x[alpha] = step;
    const Vector plus =
        outcome_probabilities(povm, perturbed_state(d, LocalParams(d, x)));
    x[alpha] = -step;
    const Vector minus =
        outcome_probabilities(povm, perturbed_state(d, LocalParams(d, x)));
    dp.row(alpha) = (plus - minus).transpose() / (2.0 * step);
  }

  Matrix c = Matrix::Zero(p, p);
  for (int xi = 0; xi < n; ++xi) {
    if (p0[xi] < orth_threshold) {
      continue;
    }
    c += dp.col(xi) * dp.col(xi).transpose() / p0[xi];
  }
  return c;
}

double gill_massar(const Matrix& c_matrix, const Matrix& q_matrix) {
  check_same_shape(c_matrix, q_matrix);
  const auto es = positive_definite_eigen(q_matrix, "quantum Fisher");
  const Matrix rotated =
      es.eigenvectors().transpose() * c_matrix * es.eigenvectors();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < rotated.rows(); ++i) {
    trace += rotated(i, i) / es.eigenvalues()[i];
  }
  return trace;
}

double fisher_symmetry_quantity(const Matrix& c_matrix,
                                const Matrix& q_matrix) {
  check_same_shape(c_matrix, q_matrix);
  const auto es = positive_definite_eigen(q_matrix, "quantum Fisher");
  const Matrix inv_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  const Matrix s = inv_sqrt * c_matrix * inv_sqrt;
  return s.squaredNorm();  // tr(S^2) for symmetric S
}

PfsicVerdict is_pfsic(const RankOnePOVM& povm, double tol,
                      double orth_threshold) {
  const RealDecomposition rd = real_decomposition(povm);
  const int d = povm.dim();

  double deviation = 0.0;
  for (int j = 1; j < d; ++j) {
    for (int k = 1; k < d; ++k) {
      const double delta = (j == k) ? 1.0 : 0.0;
      deviation = std::max(
          deviation, std::abs(2.0 * rd.b_rows().row(j).dot(rd.b_rows().row(k)) -
                              delta));
      deviation = std::max(
          deviation, std::abs(2.0 * rd.c_rows().row(j).dot(rd.c_rows().row(k)) -
                              delta));
      deviation = std::max(
          deviation, std::abs(2.0 * rd.b_rows().row(j).dot(rd.c_rows().row(k))));
    }
  }
  const double min_prob = rd.b_rows().row(0).cwiseAbs2().minCoeff();

  PfsicVerdict verdict;
  verdict.deviation = deviation;
  verdict.tolerance = tol;
  verdict.min_fiducial_prob = min_prob;
  verdict.n_outcomes = povm.n_outcomes();
  verdict.min_outcomes = 2 * d - 1;
  verdict.pfsic = deviation <= tol && min_prob > orth_threshold;
  return verdict;
}

FisherReport fisher_report(const RankOnePOVM& povm, const FisherOptions& opts) {
  const int d = povm.dim();
  if (d < 2) {
    throw std::invalid_argument("Fisher analysis requires d >= 2");
  }
  FisherReport report;
  report.dim = d;
  report.n_outcomes = povm.n_outcomes();
  report.classical = classical_fisher(povm, opts.orth_threshold);
  report.quantum = quantum_fisher_pure(d);
  report.gm = gill_massar(report.classical, report.quantum);
  report.gm_bound = static_cast<double>(d - 1);
  report.symmetry = fisher_symmetry_quantity(report.classical, report.quantum);
  report.symmetry_floor = 0.5 * static_cast<double>(d - 1);
  report.c_deviation_from_2id =
      (report.classical -
       2.0 * Matrix::Identity(2 * d - 2, 2 * d - 2)).cwiseAbs().maxCoeff();
  report.pfsic = is_pfsic(povm, opts.pfsic_tol, opts.orth_threshold);
  report.excluded_outcomes = orthogonal_outcomes(povm, opts.orth_threshold);

  // Structural facts; a valid POVM cannot violate them.
  Eigen::SelfAdjointEigenSolver<Matrix> es(report.classical);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::logic_error("classical Fisher matrix is not positive "
                           "semidefinite");
  }
  if (report.gm > report.gm_bound + 1e-9) {
    std::ostringstream msg;
    msg << "Gill-Massar bound violated: " << report.gm << " > "
        << report.gm_bound;
    throw std::logic_error(msg.str());
  }
  if (report.symmetry <
      report.gm * report.gm / static_cast<double>(2 * d - 2) - 1e-9) {
    throw std::logic_error("Fisher-symmetry quantity below its floor");
  }

  if (opts.fd_check) {
    const Matrix fd =
        classical_fisher_fd(povm, opts.fd_step, opts.orth_threshold);
    report.fd = FdCheck{opts.fd_step,
                        (fd - report.classical).cwiseAbs().maxCoeff()};
  }
  return report;
}

}  // namespace pfsic
