#pragma once

#include "codesign/linalg.hpp"
#include "codesign/plant_model.hpp"

namespace codesign {

/// Continuous-time stage/terminal weights of the regulation problem.
struct OcpWeights {
  Matrix q;  // n x n, PSD
  Matrix r;  // m x m, PD
  Matrix w;  // n x m cross term
  Matrix p;  // n x n terminal, PD
  double q_speed = 1.0;
};

/**
 * Q_c = I (x) diag(1, q_speed), R_c = 1e-4 I, W_c = 0, P_c = Q_c.
 * `states` must be even (one position/velocity pair per mass).
 */
OcpWeights build_weights(double q_speed, int states, int inputs);

/// Stage cost 1/2 x'Qx + 1/2 u'Ru + x'Wu per sample, plus 1/2 x'Px at the end.
struct DiscreteCost {
  Matrix q;
  Matrix r;
  Matrix w;
  Matrix p;
};

/**
 * Exact sampled-data cost under zero-order hold (Van Loan construction):
 * the stage cost equals the integral of the continuous stage cost over one
 * sampling interval. The terminal weight is copied unchanged.
 */
DiscreteCost discretize_cost(const OcpWeights& weights, const ContinuousLinearModel& model,
                             double sampling_time);

struct DiscreteOcp {
  DiscreteLinearModel model;
  DiscreteCost cost;
  int horizon = 1;
  Vector u_min;
  Vector u_max;
};

struct SpectralBounds {
  double l = 0.0;     // largest eigenvalue
  double mu = 0.0;    // smallest eigenvalue
  double cond = 0.0;  // l / mu, +inf when mu <= 0
};

/// Eigenvalue extremes of a symmetric matrix; throws DomainError if asymmetric.
SpectralBounds spectral_bounds(const Matrix& h);

/**
 * Box-constrained QP in the stacked input sequence theta = (u_0, ..., u_{N-1}):
 *   minimize 1/2 theta' H theta + theta' h,  h = G x_hat.
 */
struct CondensedQp {
  Matrix hessian;      // (N m) x (N m)
  Matrix state_gain;   // G, (N m) x n
  Vector theta_min;
  Vector theta_max;
  SpectralBounds spectrum;
  int horizon = 0;
  int states = 0;
  int inputs = 0;

  int size() const { return static_cast<int>(hessian.rows()); }
  Vector linear_term(const Vector& x_hat) const { return state_gain * x_hat; }
  double objective(const Vector& theta, const Vector& linear) const {
    return 0.5 * theta.dot(hessian * theta) + theta.dot(linear);
  }
};

/// Eliminates the predicted states; H is symmetrized after assembly.
CondensedQp condense(const DiscreteOcp& ocp);

/// Builds the full OCP for a plant, weights, sampling time and horizon.
DiscreteOcp make_ocp(const ContinuousLinearModel& plant, const OcpWeights& weights,
                     double sampling_time, int horizon, const Vector& u_min,
                     const Vector& u_max);

}  // namespace codesign
