#ifndef SLIPGAIT_SLIP_HPP_
#define SLIPGAIT_SLIP_HPP_

#include <string>
#include <vector>

#include "slipgait/dynamics.hpp"
#include "slipgait/model.hpp"

namespace slipgait {

/// Virtual affine nonholonomic constraint A dq = b_k, with the per-step
/// reference b_k = v_nom + s_k held over blocks of consecutive steps.
struct SlipSchedule {
  RowVec7 A_row = (RowVec7() << 1.0, 0.0, 0.10, 0.08, 0.04, -0.05, -0.03).finished();
  double v_nom = 0.0;
  std::vector<double> s_levels{0.0};
  /// Steps per slip level before advancing to the next (cyclic).
  int block_len = 1;

  void validate() const;
  std::string to_json() const;
  static SlipSchedule from_json(const std::string &text);
};

/// Slip output eta_s = A dq - b_k, zero when the virtual tangential speed
/// matches the prescribed slip law.
double slip_output(const Vec7 &dq, const RowVec7 &A_row, double b_k);
double slip_output(const Vec7 &dq, const SlipSchedule &schedule, double b_k);

/// Reference b_k for stance phase k (1-based).
double slip_reference(const SlipSchedule &schedule, int step_index);

/// Decomposition of etadot_s = Gamma_s + M_s u along the stance dynamics.
/// Gamma_s = Gamma0 + G_lambda * lambda; the Adot and db/dq contributions
/// vanish for the constant A / piecewise-constant b used by the schedule,
/// but the general form is kept for smooth slip laws.
struct SlipEval {
  double eta_s = 0.0;
  double Gamma_s = 0.0;  // drift at the supplied lambda
  RowVec7 M_s = RowVec7::Zero();
  double Gamma0 = 0.0;   // drift with lambda = 0
  Eigen::RowVector2d G_lambda = Eigen::RowVector2d::Zero();
};

SlipEval slip_decomposition(const StanceDynamics &dyn, const Vec2 &lambda,
                            const RowVec7 &A_row, double b_k,
                            const RowVec7 &Adot_row = RowVec7::Zero(),
                            const RowVec7 &db_dq = RowVec7::Zero());

SlipEval slip_decomposition(const ModelParams &params, const Vec7 &q, const Vec7 &dq,
                            const Vec2 &lambda, const SlipSchedule &schedule,
                            double b_k);

} // namespace slipgait

#endif // SLIPGAIT_SLIP_HPP_
