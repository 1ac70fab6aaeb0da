#ifndef SLIPGAIT_INTEGRATE_HPP_
#define SLIPGAIT_INTEGRATE_HPP_

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace slipgait {

/// Dense-output segment of one accepted Dormand-Prince step: a quartic
/// interpolant in the step-local variable sigma = (t - t0)/h.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  Eigen::VectorXd y0;
  Eigen::Matrix<double, Eigen::Dynamic, 4> Q; // n x 4 interpolation weights

  Eigen::VectorXd eval(double t) const;
  Eigen::VectorXd eval_derivative(double t) const;
  double t1() const { return t0 + h; }
};

/// Piecewise dense trajectory with binary-search evaluation.
struct Trajectory {
  std::vector<DenseSegment> segments;

  double t_begin() const { return segments.empty() ? 0.0 : segments.front().t0; }
  double t_end() const { return segments.empty() ? 0.0 : segments.back().t1(); }
  Eigen::VectorXd eval(double t) const;
  Eigen::VectorXd eval_derivative(double t) const;
  bool empty() const { return segments.empty(); }
};

struct IntegratorSettings {
  double rtol = 1e-9;
  double atol = 1e-11;
  double h_init = 1e-4;
  double h_max = 0.05;
  double h_min = 1e-14;
  long max_steps = 2000000;
};

/// Why an integration terminated.
enum class IntegrateStatus { kReachedEnd, kEvent, kAborted, kStepSizeUnderflow };

struct IntegrateResult {
  IntegrateStatus status = IntegrateStatus::kReachedEnd;
  double t_end = 0.0;
  Eigen::VectorXd y_end;
  Trajectory trajectory;
  long n_steps = 0;
  long n_rhs = 0;
};

using RhsFn = std::function<void(double, const Eigen::VectorXd &, Eigen::VectorXd &)>;
/// Scalar guard; an event fires on a downward zero crossing.
using EventFn = std::function<double(double, const Eigen::VectorXd &)>;
/// Called after each accepted step; returning false aborts the run.
using StepCallback = std::function<bool(double, const Eigen::VectorXd &)>;

/// Adaptive Dormand-Prince 5(4) with quartic dense output.
///
/// When an event function is supplied, the integrator watches for downward
/// sign changes of the guard after `event_dwell` seconds and refines the
/// crossing on the dense interpolant (bisection followed by secant polish)
/// to near machine precision. The trajectory is truncated at the event.
IntegrateResult integrate_dopri5(const RhsFn &rhs, double t0,
                                 const Eigen::VectorXd &y0, double t_end,
                                 const IntegratorSettings &settings = {},
                                 const EventFn &event = nullptr,
                                 double event_dwell = 0.0,
                                 const StepCallback &after_step = nullptr);

} // namespace slipgait

#endif // SLIPGAIT_INTEGRATE_HPP_
