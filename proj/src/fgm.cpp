#include "codesign/fgm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "codesign/errors.hpp"

namespace codesign {

namespace {

constexpr double kTwo53 = 9007199254740992.0;

double row_abs_sum_max(const Matrix& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

double compute_beta(double l, double mu) {
  if (!(mu > 0.0)) throw NonconvexProblemError("convexity parameter must be positive");
  if (!(l >= mu)) throw DomainError("largest eigenvalue below convexity parameter");
  const double sl = std::sqrt(l);
  const double sm = std::sqrt(mu);
  return (sl - sm) / (sl + sm);
}

FgmSolver::FgmSolver(const CondensedQp& qp, FgmConfig config)
    : config_(config), inputs_(qp.inputs), lower_(qp.theta_min), upper_(qp.theta_max) {
  if (config_.iterations < 1) throw DomainError("FGM needs at least one iteration");
  const double l = qp.spectrum.l;
  beta_ = compute_beta(l, qp.spectrum.mu);
  const int size = qp.size();
  step_matrix_ = Matrix::Identity(size, size) - qp.hessian / l;
  scaled_gain_ = qp.state_gain / l;

  if (!config_.fixed) return;
  const FixedPointFormat format = *config_.fixed;
  format.validate();
  auto raw_matrix = [&](const Matrix& m) {
    return m.unaryExpr([&](double v) {
      return static_cast<double>(fixed::to_raw(v, format, &constants_saturated_));
    });
  };
  step_raw_ = raw_matrix(step_matrix_);
  gain_raw_ = raw_matrix(scaled_gain_);
  lower_raw_.resize(size);
  upper_raw_.resize(size);
  for (int i = 0; i < size; ++i) {
    lower_raw_[i] = fixed::to_raw(lower_[i], format, &constants_saturated_);
    upper_raw_[i] = fixed::to_raw(upper_[i], format, &constants_saturated_);
  }
  beta_raw_ = fixed::to_raw(beta_, format, &constants_saturated_);
  one_plus_beta_raw_ = fixed::to_raw(1.0 + beta_, format, &constants_saturated_);

  // Split |M_raw| into base-2^s digits (sign carried by every digit) using the
  // widest s for which each digit product sum stays below 2^53.
  const double max_raw = static_cast<double>(format.max_raw());
  const Matrix magnitude = step_raw_.cwiseAbs();
  const double largest = magnitude.maxCoeff();
  for (int bits = 52; bits >= 1; --bits) {
    const double base = std::ldexp(1.0, bits);
    std::vector<Matrix> digits;
    Matrix rest = magnitude;
    bool exact = true;
    do {
      Matrix digit = rest.unaryExpr([base](double v) { return std::fmod(v, base); });
      rest = ((rest - digit) / base).eval();
      if (row_abs_sum_max(digit) * max_raw >= kTwo53) {
        exact = false;
        break;
      }
      digits.push_back(digit.cwiseProduct(step_raw_.cwiseSign()));
    } while (rest.maxCoeff() > 0.0);
    if (exact) {
      step_digits_ = std::move(digits);
      digit_bits_ = bits;
      break;
    }
    if (largest < 1.0) break;
  }
}

FgmSolution FgmSolver::solve(const Vector& x_hat, const Vector& theta0) const {
  if (theta0.size() != size()) {
    throw DomainError("initial guess has " + std::to_string(theta0.size()) +
                      " entries, expected " + std::to_string(size()));
  }
  if (x_hat.size() != scaled_gain_.cols()) throw DomainError("state dimension mismatch");
  return config_.fixed ? solve_fixed(x_hat, theta0) : solve_double(x_hat, theta0);
}

FgmSolution FgmSolver::solve_double(const Vector& x_hat, const Vector& theta0) const {
  const Vector offset = scaled_gain_ * x_hat;
  Vector z = theta0.cwiseMax(lower_).cwiseMin(upper_);
  Vector nu = z;
  Vector theta(size());
  Vector z_next(size());
  for (int i = 0; i < config_.iterations; ++i) {
    theta.noalias() = step_matrix_ * nu;
    theta -= offset;
    z_next = theta.cwiseMax(lower_).cwiseMin(upper_);
    nu = (1.0 + beta_) * z_next - beta_ * z;
    z.swap(z_next);
    if (!nu.allFinite()) {
      throw DivergenceError("FGM iterate became nonfinite at iteration " + std::to_string(i));
    }
  }
  FgmSolution solution;
  solution.first_input = z.head(inputs_);
  solution.theta = std::move(z);
  return solution;
}

FgmSolution FgmSolver::solve_fixed(const Vector& x_hat, const Vector& theta0) const {
  const FixedPointFormat format = *config_.fixed;
  const int f = format.fraction_bits;
  const int size = this->size();
  const int states = static_cast<int>(x_hat.size());
  bool saturated = constants_saturated_;

  std::vector<std::int64_t> x_raw(states);
  for (int j = 0; j < states; ++j) x_raw[j] = fixed::to_raw(x_hat[j], format, &saturated);

  // h/L, accumulated at 2f fraction bits then rounded once.
  std::vector<std::int64_t> offset_raw(size);
  for (int i = 0; i < size; ++i) {
    __int128 acc = 0;
    for (int j = 0; j < states; ++j) {
      acc += static_cast<__int128>(static_cast<std::int64_t>(gain_raw_(i, j))) * x_raw[j];
    }
    offset_raw[i] = fixed::saturate(fixed::round_shift(acc, f), format, &saturated);
  }

  std::vector<std::int64_t> z(size);
  for (int i = 0; i < size; ++i) {
    z[i] = std::clamp(fixed::to_raw(theta0[i], format, &saturated), lower_raw_[i],
                      upper_raw_[i]);
  }
  std::vector<std::int64_t> nu = z;
  std::vector<std::int64_t> z_next(size);
  Vector nu_double(size);
  Vector acc_double(size);
  std::vector<__int128> acc(size);

  for (int it = 0; it < config_.iterations; ++it) {
    if (!step_digits_.empty()) {
      for (int i = 0; i < size; ++i) nu_double[i] = static_cast<double>(nu[i]);
      for (int i = 0; i < size; ++i) acc[i] = -(static_cast<__int128>(offset_raw[i]) << f);
      for (std::size_t p = 0; p < step_digits_.size(); ++p) {
        // Integer-valued doubles with partial sums below 2^53: exact.
        acc_double.noalias() = step_digits_[p] * nu_double;
        const int shift = static_cast<int>(p) * digit_bits_;
        for (int i = 0; i < size; ++i) {
          acc[i] += static_cast<__int128>(static_cast<std::int64_t>(acc_double[i])) << shift;
        }
      }
    } else {
      for (int i = 0; i < size; ++i) {
        acc[i] = -(static_cast<__int128>(offset_raw[i]) << f);
        for (int j = 0; j < size; ++j) {
          acc[i] += static_cast<__int128>(static_cast<std::int64_t>(step_raw_(i, j))) * nu[j];
        }
      }
    }
    for (int i = 0; i < size; ++i) {
      const __int128 theta = fixed::round_shift(acc[i], f);
      z_next[i] = std::clamp(fixed::saturate(theta, format, &saturated), lower_raw_[i],
                             upper_raw_[i]);
    }
    for (int i = 0; i < size; ++i) {
      const __int128 momentum = static_cast<__int128>(one_plus_beta_raw_) * z_next[i] -
                                static_cast<__int128>(beta_raw_) * z[i];
      nu[i] = fixed::saturate(fixed::round_shift(momentum, f), format, &saturated);
    }
    z.swap(z_next);
  }

  FgmSolution solution;
  solution.theta.resize(size);
  for (int i = 0; i < size; ++i) solution.theta[i] = fixed::from_raw(z[i], format);
  solution.first_input = solution.theta.head(inputs_);
  solution.saturated = saturated;
  return solution;
}

FgmSolution solve(const CondensedQp& qp, const Vector& x_hat, const Vector& theta0,
                  const FgmConfig& config) {
  return FgmSolver(qp, config).solve(x_hat, theta0);
}

Vector shift_warm_start(const Vector& theta, int inputs) {
  const auto size = theta.size();
  if (inputs <= 0 || size % inputs != 0) throw DomainError("warm start size mismatch");
  Vector shifted(size);
  shifted.head(size - inputs) = theta.tail(size - inputs);
  shifted.tail(inputs) = theta.tail(inputs);
  return shifted;
}

FixedPointFormat derive_fixed_format(const CondensedQp& qp, int fraction_bits,
                                     double state_bound) {
  if (!qp.theta_min.allFinite() || !qp.theta_max.allFinite()) {
    throw FormatDerivationError("box bounds must be finite");
  }
  const double l = qp.spectrum.l;
  const double beta = compute_beta(l, qp.spectrum.mu);
  const int size = qp.size();
  const Matrix step = Matrix::Identity(size, size) - qp.hessian / l;
  const Matrix gain = qp.state_gain / l;

  const double box = std::max(qp.theta_min.cwiseAbs().maxCoeff(),
                              qp.theta_max.cwiseAbs().maxCoeff());
  // nu = (1 + beta) z_next - beta z with both z in the box.
  const double nu_bound = (1.0 + 2.0 * beta) * box;
  const Vector offset_bound = gain.cwiseAbs().rowwise().sum() * state_bound;
  const Vector product_bound = step.cwiseAbs().rowwise().sum() * nu_bound;
  const double gradient_bound = (product_bound + offset_bound).maxCoeff();

  const double bound = std::max({box, nu_bound, gradient_bound, offset_bound.maxCoeff(),
                                 step.cwiseAbs().maxCoeff(), gain.cwiseAbs().maxCoeff(),
                                 1.0 + beta, state_bound});
  if (!std::isfinite(bound)) throw FormatDerivationError("iterate bound is not finite");

  FixedPointFormat format;
  format.fraction_bits = fraction_bits;
  format.integer_bits = std::max(2, static_cast<int>(std::floor(std::log2(bound))) + 2);
  if (format.fraction_bits < 1 || format.total_bits() > 64) {
    throw FormatDerivationError("derived format exceeds 64 bits");
  }
  return format;
}

}  // namespace codesign
