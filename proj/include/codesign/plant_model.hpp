#pragma once

#include <vector>

#include "codesign/linalg.hpp"

namespace codesign {

/// x' = A x + B u.
struct ContinuousLinearModel {
  Matrix a;
  Matrix b;

  int states() const { return static_cast<int>(a.rows()); }
  int inputs() const { return static_cast<int>(b.cols()); }
};

/// x+ = A x + B u, sampled at `sampling_time` seconds.
struct DiscreteLinearModel {
  Matrix a;
  Matrix b;
  double sampling_time = 0.0;

  int states() const { return static_cast<int>(a.rows()); }
  int inputs() const { return static_cast<int>(b.cols()); }
};

/**
 * Chain of masses connected by springs and dampers. Element i links mass i to
 * mass i-1; element 0 links the first mass to the fixed wall.
 */
struct MassSpringChain {
  std::vector<double> masses;             // kg
  std::vector<double> spring_constants;   // N/m
  std::vector<double> damping_constants;  // N*s/m
};

/// Ten-mass chain used by both case studies.
MassSpringChain default_mass_spring_chain();

/// Validates shapes and finiteness; throws InvalidModelError.
ContinuousLinearModel make_continuous_model(Matrix a, Matrix b);

/**
 * Force-balance model of the chain. State is interleaved per mass:
 * (p_1, v_1, p_2, v_2, ...); input i is the force on mass i.
 */
ContinuousLinearModel build_mass_spring_chain(const MassSpringChain& chain);

inline int position_index(int mass) { return 2 * mass; }
inline int velocity_index(int mass) { return 2 * mass + 1; }
inline int mass_of_state(int state) { return state / 2; }
inline bool is_velocity_state(int state) { return state % 2 == 1; }

/// Scaling-and-squaring Pade exponential; throws NumericalError on nonfinite output.
Matrix matrix_exponential(const Matrix& a);

/**
 * Exact zero-order-hold discretization. B_d comes from the exponential of
 * the augmented matrix [[A, B], [0, 0]] * T_s.
 */
DiscreteLinearModel discretize_zoh(const ContinuousLinearModel& model, double sampling_time);

/// Spectral radius of a square matrix.
double spectral_radius(const Matrix& a);

}  // namespace codesign
