#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "codesign/fgm.hpp"
#include "codesign/linalg.hpp"
#include "codesign/ocp.hpp"
#include "codesign/plant_model.hpp"

namespace codesign {

struct SimulationConfig {
  double t_max = 25.0;
  double epsilon = 0.01;  // settling threshold on ||x||_2
  double substep = 0.01;  // requested plant integration step
  double divergence_threshold = 1e3;

  void validate() const;
};

/// Sampled-data state feedback, invoked once per sampling period.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual double sampling_time() const = 0;
  virtual int inputs() const = 0;
  /// Forgets any warm-start memory.
  virtual void reset() {}
  virtual Vector compute(const Vector& state) = 0;
};

class ZeroController final : public Controller {
 public:
  ZeroController(double sampling_time, int inputs)
      : sampling_time_(sampling_time), inputs_(inputs) {}
  double sampling_time() const override { return sampling_time_; }
  int inputs() const override { return inputs_; }
  Vector compute(const Vector&) override { return Vector::Zero(inputs_); }

 private:
  double sampling_time_;
  int inputs_;
};

/// Receding-horizon controller that applies the first block of each FGM solution.
class MpcController final : public Controller {
 public:
  MpcController(CondensedQp qp, FgmConfig config, double sampling_time);

  double sampling_time() const override { return sampling_time_; }
  int inputs() const override { return qp_.inputs; }
  void reset() override;
  Vector compute(const Vector& state) override;

  const CondensedQp& qp() const { return qp_; }
  /// Number of controller calls whose fixed-point iterates saturated.
  int saturated_solves() const { return saturated_solves_; }
  int solves() const { return solves_; }

 private:
  CondensedQp qp_;
  FgmSolver solver_;
  double sampling_time_;
  Vector previous_theta_;
  bool has_previous_ = false;
  int saturated_solves_ = 0;
  int solves_ = 0;
};

struct Trajectory {
  std::vector<double> times;   // uniform substep grid, starting at 0
  std::vector<Vector> states;  // one per grid time
  std::vector<double> input_times;
  std::vector<Vector> inputs;  // one per controller call
  double substep = 0.0;
  bool diverged = false;
};

/**
 * Simulates the continuous plant under sampled-data feedback. The effective
 * substep is sampling_time / round(sampling_time / cfg.substep) so controller
 * updates fall on the grid; the plant advances with the exact ZOH map of that
 * substep. Stops at t_max, or early (flagged) once ||x||_2 exceeds the
 * divergence threshold or the controller diverges.
 */
Trajectory simulate(const ContinuousLinearModel& plant, Controller& controller,
                    const Vector& x0, const SimulationConfig& cfg);

/// First grid time after which ||x||_2 <= epsilon holds for the rest of the trajectory.
std::optional<double> settling_time(const Trajectory& trajectory, double epsilon);

using InitialConditionBank = std::vector<Vector>;

enum class InitialConditionLayout {
  /// Each of the five table columns is one 20-entry initial state.
  Columns,
  /// Each of the twenty table rows sets the first five states; the rest are zero.
  Rows,
};

InitialConditionBank default_initial_conditions(
    InitialConditionLayout layout = InitialConditionLayout::Columns);

using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

/**
 * Sum of settling times over the bank; +inf if any run diverges or never
 * settles. Runs are independent and summed in bank order.
 */
double performance_measure(const ContinuousLinearModel& plant, const ControllerFactory& factory,
                           const InitialConditionBank& bank, const SimulationConfig& cfg);

}  // namespace codesign
