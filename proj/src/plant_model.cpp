#include "codesign/plant_model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "codesign/errors.hpp"

namespace codesign {

MassSpringChain default_mass_spring_chain() {
  return MassSpringChain{
      {0.1966, 0.2511, 0.6160, 0.4733, 0.10517, 0.4509, 0.1629, 0.1487, 0.1859, 0.0700},
      {0.5472, 0.1386, 0.1493, 0.2575, 0.08407, 0.1966, 0.0511, 0.6160, 0.4733, 0.10517},
      {0.0509, 0.1629, 0.0487, 0.1859, 0.0700, 0.5472, 0.0386, 0.1493, 0.2575, 0.08407},
  };
}

ContinuousLinearModel make_continuous_model(Matrix a, Matrix b) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InvalidModelError("state matrix must be square and nonempty");
  }
  if (b.rows() != a.rows() || b.cols() == 0) {
    throw InvalidModelError("input matrix must have " + std::to_string(a.rows()) +
                            " rows and at least one column");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw InvalidModelError("model matrices contain nonfinite entries");
  }
  return ContinuousLinearModel{std::move(a), std::move(b)};
}

ContinuousLinearModel build_mass_spring_chain(const MassSpringChain& chain) {
  const std::size_t count = chain.masses.size();
  if (count == 0) throw InvalidModelError("mass-spring chain is empty");
  if (chain.spring_constants.size() != count || chain.damping_constants.size() != count) {
    throw InvalidModelError("mass, spring and damper lists differ in length");
  }
  for (std::size_t i = 0; i < count; ++i) {
    // Dampers may be absent (c = 0); masses and springs must be present.
    const bool valid = chain.masses[i] > 0.0 && chain.spring_constants[i] > 0.0 &&
                       chain.damping_constants[i] >= 0.0 && std::isfinite(chain.masses[i]) &&
                       std::isfinite(chain.spring_constants[i]) &&
                       std::isfinite(chain.damping_constants[i]);
    if (!valid) {
      throw InvalidModelError("physical constants must be finite, masses and springs positive "
                              "and dampers nonnegative (element " + std::to_string(i) + ")");
    }
  }

  const int masses = static_cast<int>(count);
  Matrix a = Matrix::Zero(2 * masses, 2 * masses);
  Matrix b = Matrix::Zero(2 * masses, masses);

  // Element e connects mass e to mass e-1 (or to the wall for e = 0). Its
  // force on mass e is -k (p_e - p_{e-1}) - c (v_e - v_{e-1}); the opposite
  // force acts on mass e-1.
  for (int e = 0; e < masses; ++e) {
    const double k = chain.spring_constants[e];
    const double c = chain.damping_constants[e];
    const int self = e;
    const double inv_self = 1.0 / chain.masses[self];
    a(velocity_index(self), position_index(self)) -= k * inv_self;
    a(velocity_index(self), velocity_index(self)) -= c * inv_self;
    if (e > 0) {
      const int prev = e - 1;
      const double inv_prev = 1.0 / chain.masses[prev];
      a(velocity_index(self), position_index(prev)) += k * inv_self;
      a(velocity_index(self), velocity_index(prev)) += c * inv_self;
      a(velocity_index(prev), position_index(prev)) -= k * inv_prev;
      a(velocity_index(prev), velocity_index(prev)) -= c * inv_prev;
      a(velocity_index(prev), position_index(self)) += k * inv_prev;
      a(velocity_index(prev), velocity_index(self)) += c * inv_prev;
    }
  }
  for (int i = 0; i < masses; ++i) {
    a(position_index(i), velocity_index(i)) = 1.0;
    b(velocity_index(i), i) = 1.0 / chain.masses[i];
  }
  return ContinuousLinearModel{std::move(a), std::move(b)};
}

Matrix matrix_exponential(const Matrix& a) {
  Matrix result = a.exp();
  if (!result.allFinite()) throw NumericalError("matrix exponential is not finite");
  return result;
}

DiscreteLinearModel discretize_zoh(const ContinuousLinearModel& model, double sampling_time) {
  if (!(sampling_time > 0.0) || !std::isfinite(sampling_time)) {
    throw DomainError("sampling time must be positive");
  }
  const int n = model.states();
  const int m = model.inputs();
  // [[A, B], [0, 0]] * T  ->  [[A_d, B_d], [0, I]]
  Matrix augmented = Matrix::Zero(n + m, n + m);
  augmented.topLeftCorner(n, n) = model.a * sampling_time;
  augmented.topRightCorner(n, m) = model.b * sampling_time;
  const Matrix phi = matrix_exponential(augmented);
  return DiscreteLinearModel{phi.topLeftCorner(n, n), phi.topRightCorner(n, m), sampling_time};
}

double spectral_radius(const Matrix& a) {
  Eigen::EigenSolver<Matrix> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace codesign
