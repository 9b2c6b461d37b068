#include "codesign/ocp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "codesign/errors.hpp"

namespace codesign {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

}  // namespace

OcpWeights build_weights(double q_speed, int states, int inputs) {
  if (!(q_speed > 0.0) || !std::isfinite(q_speed)) {
    throw DomainError("q_speed must be positive");
  }
  if (states <= 0 || states % 2 != 0 || inputs <= 0) {
    throw DomainError("weights need an even state dimension and at least one input");
  }
  OcpWeights weights;
  weights.q_speed = q_speed;
  weights.q = Matrix::Zero(states, states);
  for (int i = 0; i < states; i += 2) {
    weights.q(i, i) = 1.0;
    weights.q(i + 1, i + 1) = q_speed;
  }
  weights.r = 1e-4 * Matrix::Identity(inputs, inputs);
  weights.w = Matrix::Zero(states, inputs);
  weights.p = weights.q;
  return weights;
}

DiscreteCost discretize_cost(const OcpWeights& weights, const ContinuousLinearModel& model,
                             double sampling_time) {
  if (!(sampling_time > 0.0) || !std::isfinite(sampling_time)) {
    throw DomainError("sampling time must be positive");
  }
  const int n = model.states();
  const int m = model.inputs();
  const int z = n + m;

  // Augmented ZOH dynamics F = [[A, B], [0, 0]] and stage weight
  // S = [[Q, W], [W', R]]. With C = [[-F', S], [0, F]] T and
  // exp(C) = [[E11, E12], [0, E22]], the integral of exp(F't) S exp(Ft)
  // over [0, T] equals E22' E12.
  Matrix f = Matrix::Zero(z, z);
  f.topLeftCorner(n, n) = model.a;
  f.topRightCorner(n, m) = model.b;
  Matrix stage = Matrix::Zero(z, z);
  stage.topLeftCorner(n, n) = weights.q;
  stage.topRightCorner(n, m) = weights.w;
  stage.bottomLeftCorner(m, n) = weights.w.transpose();
  stage.bottomRightCorner(m, m) = weights.r;

  Matrix c = Matrix::Zero(2 * z, 2 * z);
  c.topLeftCorner(z, z) = -f.transpose() * sampling_time;
  c.topRightCorner(z, z) = stage * sampling_time;
  c.bottomRightCorner(z, z) = f * sampling_time;
  const Matrix e = matrix_exponential(c);
  Matrix integral = e.bottomRightCorner(z, z).transpose() * e.topRightCorner(z, z);

  const double asymmetry = relative_asymmetry(integral);
  if (!integral.allFinite() || asymmetry > kSymmetryTolerance) {
    throw NumericalError("discretized cost lost symmetry (" + std::to_string(asymmetry) + ")");
  }
  integral = symmetrized(integral);

  DiscreteCost cost;
  cost.q = integral.topLeftCorner(n, n);
  cost.w = integral.topRightCorner(n, m);
  cost.r = integral.bottomRightCorner(m, m);
  cost.p = weights.p;
  return cost;
}

SpectralBounds spectral_bounds(const Matrix& h) {
  if (h.rows() == 0 || h.rows() != h.cols()) throw DomainError("Hessian must be square");
  if (relative_asymmetry(h) > 1e-9) throw DomainError("Hessian is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  SpectralBounds bounds;
  bounds.l = solver.eigenvalues().maxCoeff();
  bounds.mu = solver.eigenvalues().minCoeff();
  bounds.cond = bounds.mu > 0.0 ? bounds.l / bounds.mu : std::numeric_limits<double>::infinity();
  return bounds;
}

CondensedQp condense(const DiscreteOcp& ocp) {
  const auto& a = ocp.model.a;
  const auto& b = ocp.model.b;
  const int n = ocp.model.states();
  const int m = ocp.model.inputs();
  const int horizon = ocp.horizon;
  if (horizon < 1 || m == 0) throw DomainError("condensed problem would be empty");
  if (ocp.u_min.size() != m || ocp.u_max.size() != m) {
    throw DomainError("input bounds must have one entry per input");
  }
  if (!(ocp.u_min.array() < ocp.u_max.array()).all()) {
    throw DomainError("input bounds must satisfy u_min < u_max");
  }
  const int nm = horizon * m;

  // x_k = Sx_k x_0 + Su_k theta for k = 0..N.
  Matrix sx = Matrix::Zero((horizon + 1) * n, n);
  Matrix su = Matrix::Zero((horizon + 1) * n, nm);
  sx.topRows(n).setIdentity();
  for (int k = 1; k <= horizon; ++k) {
    sx.middleRows(k * n, n) = a * sx.middleRows((k - 1) * n, n);
    su.middleRows(k * n, n) = a * su.middleRows((k - 1) * n, n);
    su.block(k * n, (k - 1) * m, n, m) = b;
  }

  // Weighted state stack and cross term, block by block.
  Matrix q_su = Matrix::Zero((horizon + 1) * n, nm);
  Matrix q_sx = Matrix::Zero((horizon + 1) * n, n);
  for (int k = 0; k <= horizon; ++k) {
    const Matrix& weight = k < horizon ? ocp.cost.q : ocp.cost.p;
    q_su.middleRows(k * n, n) = weight * su.middleRows(k * n, n);
    q_sx.middleRows(k * n, n) = weight * sx.middleRows(k * n, n);
  }
  Matrix hessian = su.transpose() * q_su;
  Matrix gain = su.transpose() * q_sx;
  for (int k = 0; k < horizon; ++k) {
    hessian.block(k * m, k * m, m, m) += ocp.cost.r;
    // x_k' W u_k contributes Su_k' W E_k + E_k' W' Su_k to H and E_k' W' Sx_k to G.
    const Matrix wu = su.middleRows(k * n, n).transpose() * ocp.cost.w;  // nm x m
    hessian.middleCols(k * m, m) += wu;
    hessian.middleRows(k * m, m) += wu.transpose();
    gain.middleRows(k * m, m) += ocp.cost.w.transpose() * sx.middleRows(k * n, n);
  }

  CondensedQp qp;
  qp.hessian = symmetrized(hessian);
  qp.state_gain = std::move(gain);
  qp.theta_min = ocp.u_min.replicate(horizon, 1);
  qp.theta_max = ocp.u_max.replicate(horizon, 1);
  qp.spectrum = spectral_bounds(qp.hessian);
  qp.horizon = horizon;
  qp.states = n;
  qp.inputs = m;
  return qp;
}

DiscreteOcp make_ocp(const ContinuousLinearModel& plant, const OcpWeights& weights,
                     double sampling_time, int horizon, const Vector& u_min,
                     const Vector& u_max) {
  DiscreteOcp ocp;
  ocp.model = discretize_zoh(plant, sampling_time);
  ocp.cost = discretize_cost(weights, plant, sampling_time);
  ocp.horizon = horizon;
  ocp.u_min = u_min;
  ocp.u_max = u_max;
  return ocp;
}

}  // namespace codesign
