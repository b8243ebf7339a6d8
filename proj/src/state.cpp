#include "pfsic/state.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <utility>

namespace pfsic {

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw std::invalid_argument("pure state requires dimension >= 2");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol) {
    throw std::invalid_argument("pure state amplitudes are not normalized");
  }
}

PureState make_pure_state(const CVector& amplitudes) {
  if (amplitudes.size() < 2) {
    throw std::invalid_argument("pure state requires dimension >= 2");
  }
  const double norm = amplitudes.norm();
  if (norm == 0.0) {
    throw std::invalid_argument("degenerate state");
  }
  return PureState(amplitudes / norm);
}

PureState fiducial_state(int d) {
  if (d < 2) {
    throw std::invalid_argument("pure state requires dimension >= 2");
  }
  CVector amps = CVector::Zero(d);
  amps[0] = 1.0;
  return PureState(std::move(amps));
}

LocalParams::LocalParams(int dim, Vector x) : dim_(dim), x_(std::move(x)) {
  if (dim_ < 2) {
    throw std::invalid_argument("local parameters require dimension >= 2");
  }
  if (x_.size() != 2 * dim_ - 2) {
    throw std::invalid_argument(
        "local parameter vector must have length 2d-2 = " +
        std::to_string(2 * dim_ - 2) + ", got " + std::to_string(x_.size()));
  }
}

LocalParams LocalParams::zero(int dim) {
  return LocalParams(dim, Vector::Zero(2 * dim - 2));
}

PureState perturbed_state(int d, const LocalParams& params) {
  if (params.dim() != d) {
    throw std::invalid_argument("local parameter dimension mismatch: d = " +
                                std::to_string(d) + ", params for d = " +
                                std::to_string(params.dim()));
  }
  static std::atomic<bool> warned{false};
  const double largest = params.x().cwiseAbs().maxCoeff();
  if (largest > 0.2 && !warned.exchange(true)) {
    std::cerr << "pfsic: warning: local parameter magnitude " << largest
              << " exceeds 0.2; this is far outside the linear neighborhood "
                 "of the fiducial state (further warnings suppressed)\n";
  }
  CVector amps(d);
  amps[0] = 1.0;
  for (int k = 1; k < d; ++k) {
    amps[k] = Complex(params.at(k, 0), params.at(k, 1));
  }
  amps /= std::sqrt(1.0 + params.x().squaredNorm());
  return PureState(std::move(amps));
}

}  // namespace pfsic
