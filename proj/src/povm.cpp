#include "pfsic/povm.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace pfsic {

CompletenessError::CompletenessError(const std::string& what, double residual)
    : std::runtime_error(what), residual_(residual) {}

double completeness_residual(const CMatrix& vectors) {
  const auto d = vectors.rows();
  CMatrix sum = vectors * vectors.adjoint();
  sum -= CMatrix::Identity(d, d);
  return sum.cwiseAbs().maxCoeff();
}

double completeness_residual(const std::vector<CVector>& vectors) {
  if (vectors.empty()) {
    throw std::invalid_argument("POVM needs at least one vector");
  }
  const auto d = vectors.front().size();
  CMatrix m(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t xi = 0; xi < vectors.size(); ++xi) {
    if (vectors[xi].size() != d) {
      throw std::invalid_argument("POVM vectors must all have one dimension");
    }
    m.col(static_cast<Eigen::Index>(xi)) = vectors[xi];
  }
  return completeness_residual(m);
}

RankOnePOVM::RankOnePOVM(CMatrix vectors, double tol)
    : vectors_(std::move(vectors)) {
  const int d = dim();
  const int n = n_outcomes();
  if (d < 2) {
    throw std::invalid_argument("POVM requires dimension >= 2");
  }
  if (n < d) {
    throw std::invalid_argument(
        "a rank-one POVM needs at least d outcomes; got n = " +
        std::to_string(n) + " in dimension " + std::to_string(d));
  }
  const double residual = completeness_residual(vectors_);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "POVM completeness violated: max-abs residual " << residual
        << " exceeds tolerance " << tol;
    throw CompletenessError(msg.str(), residual);
  }
}

CMatrix RankOnePOVM::element(int xi) const {
  return vectors_.col(xi) * vectors_.col(xi).adjoint();
}

RankOnePOVM povm_from_vectors(const std::vector<CVector>& vectors, double tol) {
  if (vectors.empty()) {
    throw std::invalid_argument("POVM needs at least one vector");
  }
  const auto d = vectors.front().size();
  CMatrix m(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t xi = 0; xi < vectors.size(); ++xi) {
    if (vectors[xi].size() != d) {
      throw std::invalid_argument("POVM vectors must all have one dimension");
    }
    m.col(static_cast<Eigen::Index>(xi)) = vectors[xi];
  }
  return RankOnePOVM(std::move(m), tol);
}

RankOnePOVM gauge_fix(const RankOnePOVM& povm) {
  CMatrix fixed = povm.matrix();
  for (int xi = 0; xi < povm.n_outcomes(); ++xi) {
    const Complex overlap = fixed(0, xi);
    const double mag = std::abs(overlap);
    if (mag == 0.0) {
      continue;
    }
    fixed.col(xi) *= std::conj(overlap) / mag;
    fixed(0, xi) = Complex(mag, 0.0);
  }
  return RankOnePOVM(std::move(fixed));
}

bool is_gauge_fixed(const RankOnePOVM& povm, double tol) {
  for (int xi = 0; xi < povm.n_outcomes(); ++xi) {
    const Complex overlap = povm.matrix()(0, xi);
    if (std::abs(overlap.imag()) > tol || overlap.real() < -tol) {
      return false;
    }
  }
  return true;
}

double gram_residual(const RealDecomposition& rd) {
  const int d = rd.dim();
  const Matrix& b = rd.b_rows();
  const Matrix& c = rd.c_rows();
  const Matrix sym =
      b * b.transpose() + c * c.transpose() - Matrix::Identity(d, d);
  const Matrix antisym = b * c.transpose() - c * b.transpose();
  return std::max(sym.cwiseAbs().maxCoeff(), antisym.cwiseAbs().maxCoeff());
}

RealDecomposition real_decomposition(const RankOnePOVM& povm, double tol) {
  const CMatrix& a = povm.matrix();
  for (int xi = 0; xi < povm.n_outcomes(); ++xi) {
    const Complex overlap = a(0, xi);
    if (std::abs(overlap.imag()) > tol || overlap.real() < -tol) {
      throw std::invalid_argument(
          "POVM is not gauge-fixed: <0|psi^" + std::to_string(xi) +
          "> is not real and nonnegative");
    }
  }
  Matrix b = a.real();
  Matrix c = a.imag();
  b.row(0) = b.row(0).cwiseMax(0.0);
  c.row(0).setZero();

  RealDecomposition rd(std::move(b), std::move(c));
  const double residual = gram_residual(rd);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "real-decomposition Gram conditions violated: residual " << residual
        << " exceeds tolerance " << tol;
    throw CompletenessError(msg.str(), residual);
  }
  return rd;
}

Vector outcome_probabilities(const RankOnePOVM& povm, const PureState& state) {
  if (povm.dim() != state.dim()) {
    throw std::invalid_argument("POVM dimension " + std::to_string(povm.dim()) +
                                " does not match state dimension " +
                                std::to_string(state.dim()));
  }
  return (povm.matrix().adjoint() * state.amplitudes()).cwiseAbs2();
}

}  // namespace pfsic
