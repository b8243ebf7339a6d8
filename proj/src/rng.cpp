#include "pfsic/rng.hpp"

#include <cmath>
#include <numbers>

namespace pfsic {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Matrix random_orthogonal(int m, SplitMix64& rng) {
  if (m < 1) {
    throw std::invalid_argument("orthogonal matrix size must be >= 1");
  }
  Matrix gauss(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      gauss(i, j) = rng.next_gaussian();
    }
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  const Vector diag = qr.matrixQR().diagonal();
  for (int i = 0; i < m; ++i) {
    if (diag[i] < 0.0) {
      q.col(i) = -q.col(i);
    }
  }
  return q;
}

CMatrix random_unitary(int d, SplitMix64& rng) {
  if (d < 1) {
    throw std::invalid_argument("unitary size must be >= 1");
  }
  CMatrix ginibre(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const double re = rng.next_gaussian();
      const double im = rng.next_gaussian();
      ginibre(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(ginibre);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    const Complex r = qr.matrixQR()(i, i);
    const double mag = std::abs(r);
    if (mag > 0.0) {
      q.col(i) *= r / mag;
    }
  }
  return q;
}

RankOnePOVM random_povm(int d, int n, SplitMix64& rng) {
  if (n < d) {
    throw std::invalid_argument("random POVM needs n >= d");
  }
  const RankOnePOVM basis{random_unitary(d, rng)};
  const OrthogonalMatrix mix{random_orthogonal(n, rng)};
  return orthogonal_mix(basis, mix, /*strict=*/false);
}

}  // namespace pfsic
