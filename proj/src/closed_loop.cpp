#include "codesign/closed_loop.hpp"

#include <cmath>
#include <limits>

#include "codesign/errors.hpp"

namespace codesign {

void SimulationConfig::validate() const {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(substep > 0.0) || substep > t_max) throw DomainError("substep must lie in (0, t_max]");
  if (!(divergence_threshold > 0.0)) throw DomainError("divergence_threshold must be positive");
}

MpcController::MpcController(CondensedQp qp, FgmConfig config, double sampling_time)
    : qp_(std::move(qp)), solver_(qp_, config), sampling_time_(sampling_time) {
  if (!(sampling_time > 0.0)) throw DomainError("sampling time must be positive");
}

void MpcController::reset() {
  has_previous_ = false;
  saturated_solves_ = 0;
  solves_ = 0;
}

Vector MpcController::compute(const Vector& state) {
  Vector theta0 = Vector::Zero(qp_.size());
  if (solver_.config().warm_start && has_previous_) {
    theta0 = shift_warm_start(previous_theta_, qp_.inputs);
  }
  FgmSolution solution = solver_.solve(state, theta0);
  ++solves_;
  if (solution.saturated) ++saturated_solves_;
  previous_theta_ = std::move(solution.theta);
  has_previous_ = true;
  return solution.first_input;
}

Trajectory simulate(const ContinuousLinearModel& plant, Controller& controller,
                    const Vector& x0, const SimulationConfig& cfg) {
  cfg.validate();
  if (x0.size() != plant.states()) throw DomainError("initial state dimension mismatch");
  if (controller.inputs() != plant.inputs()) throw DomainError("controller input mismatch");
  const double ts = controller.sampling_time();
  const int per_sample = std::max(1, static_cast<int>(std::lround(ts / cfg.substep)));
  const double substep = ts / per_sample;
  const DiscreteLinearModel fine = discretize_zoh(plant, substep);
  const long steps = static_cast<long>(std::floor(cfg.t_max / substep + 1e-9));

  Trajectory trajectory;
  trajectory.substep = substep;
  trajectory.times.reserve(steps + 1);
  trajectory.states.reserve(steps + 1);
  controller.reset();

  Vector x = x0;
  Vector u = Vector::Zero(plant.inputs());
  Vector next(x.size());
  trajectory.times.push_back(0.0);
  trajectory.states.push_back(x);
  for (long k = 0; k < steps; ++k) {
    if (k % per_sample == 0) {
      try {
        u = controller.compute(x);
      } catch (const DivergenceError&) {
        trajectory.diverged = true;
        break;
      }
      trajectory.input_times.push_back(k * substep);
      trajectory.inputs.push_back(u);
    }
    next.noalias() = fine.a * x;
    next.noalias() += fine.b * u;
    x.swap(next);
    trajectory.times.push_back((k + 1) * substep);
    trajectory.states.push_back(x);
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > cfg.divergence_threshold) {
      trajectory.diverged = true;
      break;
    }
  }
  return trajectory;
}

std::optional<double> settling_time(const Trajectory& trajectory, double epsilon) {
  if (trajectory.diverged || trajectory.states.empty()) return std::nullopt;
  std::size_t first = trajectory.states.size();
  while (first > 0 && trajectory.states[first - 1].norm() <= epsilon) --first;
  if (first == trajectory.states.size()) return std::nullopt;
  return trajectory.times[first];
}

InitialConditionBank default_initial_conditions(InitialConditionLayout layout) {
  // Twenty rows by five columns, drawn uniformly from [-0.2, 0.2].
  static constexpr double kTable[20][5] = {
      {0.0329, 0.0163, 0.1480, -0.0941, -0.0728},
      {-0.1523, 0.1759, 0.0582, -0.0082, 0.0557},
      {0.0179, 0.0589, 0.0176, 0.0884, 0.0090},
      {0.1975, -0.1125, -0.1577, -0.1561, -0.1746},
      {-0.0382, -0.0207, -0.0537, 0.1054, 0.0512},
      {0.1088, 0.1731, 0.1891, -0.1232, -0.1445},
      {0.0785, -0.1625, 0.0102, 0.0121, 0.1445},
      {-0.0061, -0.0426, 0.0686, 0.0965, 0.0080},
      {-0.0609, -0.1400, 0.0344, -0.0951, -0.1822},
      {0.1020, -0.1029, -0.0230, 0.0751, -0.0563},
      {0.0945, -0.0421, 0.0734, 0.0816, -0.0231},
      {-0.1922, -0.0677, -0.0303, -0.0919, -0.1212},
      {0.1287, -0.0280, 0.1551, -0.0435, 0.1076},
      {-0.0413, 0.1234, 0.1020, -0.0490, -0.1136},
      {0.1162, 0.1797, -0.0690, 0.0685, -0.0245},
      {0.1334, 0.1075, -0.1331, 0.1448, 0.1959},
      {0.0058, 0.1537, 0.0352, -0.1381, -0.1201},
      {-0.0372, 0.0995, 0.1302, 0.1160, -0.0726},
      {0.0136, -0.1640, -0.1553, -0.1455, 0.0715},
      {-0.0019, -0.1241, -0.0020, -0.1410, -0.1780},
  };
  InitialConditionBank bank;
  if (layout == InitialConditionLayout::Columns) {
    for (int col = 0; col < 5; ++col) {
      Vector x(20);
      for (int row = 0; row < 20; ++row) x[row] = kTable[row][col];
      bank.push_back(std::move(x));
    }
  } else {
    for (const auto& row : kTable) {
      Vector x = Vector::Zero(20);
      for (int col = 0; col < 5; ++col) x[col] = row[col];
      bank.push_back(std::move(x));
    }
  }
  return bank;
}

double performance_measure(const ContinuousLinearModel& plant, const ControllerFactory& factory,
                           const InitialConditionBank& bank, const SimulationConfig& cfg) {
  double total = 0.0;
  for (const Vector& x0 : bank) {
    auto controller = factory();
    const Trajectory trajectory = simulate(plant, *controller, x0, cfg);
    const auto settled = settling_time(trajectory, cfg.epsilon);
    if (!settled) return std::numeric_limits<double>::infinity();
    total += *settled;
  }
  return total;
}

}  // namespace codesign
