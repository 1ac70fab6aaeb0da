#ifndef SLIPGAIT_CONTROL_HPP_
#define SLIPGAIT_CONTROL_HPP_

#include <string>

#include "slipgait/dynamics.hpp"
#include "slipgait/gait.hpp"
#include "slipgait/model.hpp"
#include "slipgait/slip.hpp"

namespace slipgait {

/// Feedback gains for the combined controller. Kp, Kd must be symmetric
/// positive definite; scalars in the JSON form expand to scaled identity.
struct Gains {
  double k_s = 20.0;
  Mat6 Kp = 100.0 * Mat6::Identity();
  Mat6 Kd = 20.0 * Mat6::Identity();

  void validate() const;
  std::string to_json() const;
  static Gains from_json(const std::string &text);
};

enum class ControllerMode { kControlled, kOpenLoop };

/// One controller evaluation: the torque command plus the regularity and
/// transverse quantities recorded along every run.
struct ControlEval {
  Vec7 u = Vec7::Zero();
  double sigma_min_A = 0.0;
  double norm_Ms = 0.0;
  double eta_s = 0.0;
  Vec6 y = Vec6::Zero();
  Vec6 ydot = Vec6::Zero();
  double theta = 0.0;
  /// Ground reaction consistent with u (self-consistent evaluations only).
  ContactForces forces;
};

/// Stacked decoupling matrix [M_s; M_h] with its smallest singular value.
struct StackedDecoupling {
  Mat7 A_mat;
  double sigma_min = 0.0;
};

StackedDecoupling stacked_decoupling(const StanceDynamics &dyn, const Vec2 &lambda,
                                     const GaitSpec &spec, const RowVec7 &A_row);
StackedDecoupling stacked_decoupling(const ModelParams &params, const Vec7 &q,
                                     const Vec7 &dq, const Vec2 &lambda,
                                     const GaitSpec &spec, const RowVec7 &A_row);

/// Combined feedback u = A^{-1} [-Gamma_s - k_s eta_s; -H - Kd ydot - Kp y]
/// evaluated at an externally supplied ground reaction.
ControlEval combined_feedback(const StanceDynamics &dyn, const Vec2 &lambda,
                              const Gains &gains, const GaitSpec &spec,
                              const RowVec7 &A_row, double b_k);

/// Same law with the ground reaction resolved self-consistently: the
/// contact force is affine in u under every supported tangential law, so
/// the coupled (u, lambda) system is solved exactly.
ControlEval combined_feedback_consistent(const ModelParams &params,
                                         const StanceDynamics &dyn,
                                         const Gains &gains, const GaitSpec &spec,
                                         const RowVec7 &A_row, double b_k);

/// Slip-invariance law u = Ms^+ (-Gamma_s - k_s eta_s) with the
/// minimum-norm right inverse of the slip row.
Vec7 slip_only_feedback(const StanceDynamics &dyn, const Vec2 &lambda, double k_s,
                        const RowVec7 &A_row, double b_k);
ControlEval slip_only_feedback_consistent(const ModelParams &params,
                                          const StanceDynamics &dyn, double k_s,
                                          const RowVec7 &A_row, double b_k);

/// Gait-only comparison law u = Mh^+ (-H - Kd ydot - Kp y); the slip
/// channel is left unregulated.
Vec7 open_loop_controller(const StanceDynamics &dyn, const Vec2 &lambda,
                          const Gains &gains, const GaitSpec &spec);
ControlEval open_loop_controller_consistent(const ModelParams &params,
                                            const StanceDynamics &dyn,
                                            const Gains &gains, const GaitSpec &spec,
                                            const RowVec7 &A_row, double b_k);

/// Dispatch on the run mode; always the self-consistent evaluation.
ControlEval evaluate_controller(ControllerMode mode, const ModelParams &params,
                                const StanceDynamics &dyn, const Gains &gains,
                                const GaitSpec &spec, const RowVec7 &A_row,
                                double b_k);

} // namespace slipgait

#endif // SLIPGAIT_CONTROL_HPP_
