#pragma once

// Seeded problem generators shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "codesign/ocp.hpp"

namespace codesign::fixtures {

struct RandomBoxQp {
  CondensedQp qp;
  Vector x_hat;  // linear term is qp.state_gain * x_hat
};

/**
 * Strictly convex box QP of dimension `dim` whose Hessian eigenvalues are
 * log-uniform in [1, cond]; state_gain is the identity so x_hat is the
 * linear term itself. Roughly half the bounds end up active.
 */
inline RandomBoxQp random_box_qp(int dim, double cond, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector eig(dim);
  for (int i = 0; i < dim; ++i) eig(i) = std::exp(unit(rng) * std::log(cond));
  eig(0) = 1.0;
  if (dim > 1) eig(dim - 1) = cond;
  Matrix h = q * eig.asDiagonal() * q.transpose();
  h = 0.5 * (h + h.transpose());

  RandomBoxQp out;
  out.qp.hessian = h;
  out.qp.state_gain = Matrix::Identity(dim, dim);
  out.qp.theta_min.resize(dim);
  out.qp.theta_max.resize(dim);
  for (int i = 0; i < dim; ++i) {
    out.qp.theta_min(i) = -(0.1 + 0.9 * unit(rng));
    out.qp.theta_max(i) = 0.1 + 0.9 * unit(rng);
  }
  out.qp.spectrum = spectral_bounds(h);
  out.qp.horizon = 1;
  out.qp.states = dim;
  out.qp.inputs = dim;
  out.x_hat.resize(dim);
  for (int i = 0; i < dim; ++i) out.x_hat(i) = 2.0 * cond * normal(rng) / std::sqrt(dim);
  return out;
}

/// Random stable-ish discrete OCP with n states, m inputs and horizon N.
struct RandomOcp {
  DiscreteOcp ocp;
  Vector x0;
};

inline RandomOcp random_ocp(int n, int m, int horizon, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random = [&](int r, int c) {
    Matrix a(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) a(i, j) = normal(rng);
    return a;
  };
  RandomOcp out;
  Matrix a = random(n, n);
  const double radius = a.eigenvalues().cwiseAbs().maxCoeff();
  a *= 1.1 / radius;
  const Matrix lq = random(n, n);
  const Matrix lr = random(m, m);
  const Matrix lp = random(n, n);
  out.ocp.model = {a, random(n, m), 0.1};
  out.ocp.cost.q = lq * lq.transpose() + 0.1 * Matrix::Identity(n, n);
  out.ocp.cost.r = lr * lr.transpose() + 0.5 * Matrix::Identity(m, m);
  // Small cross term keeps the stage weight positive definite.
  out.ocp.cost.w = 0.05 * random(n, m);
  out.ocp.cost.p = lp * lp.transpose() + 0.1 * Matrix::Identity(n, n);
  out.ocp.horizon = horizon;
  out.ocp.u_min = Vector::Constant(m, -1e6);
  out.ocp.u_max = Vector::Constant(m, 1e6);
  out.x0 = random(n, 1);
  return out;
}

}  // namespace codesign::fixtures
