#ifndef SLIPGAIT_GAIT_HPP_
#define SLIPGAIT_GAIT_HPP_

#include <string>

#include "slipgait/dynamics.hpp"
#include "slipgait/model.hpp"

namespace slipgait {

/// Value and first two derivatives of a scalar curve.
struct Curve2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Bernstein-basis evaluation of one Bezier coefficient row at theta in [0,1].
/// Values outside [0,1] are clamped (the clamp count is reported through
/// GaitSpec warnings by callers that track it). Throws DegreeTooLow for
/// degree < 2.
Curve2 bezier_eval(const Eigen::VectorXd &alpha_row, double theta);

/// Virtual-holonomic-constraint specification: six desired joint evolutions
/// parameterized by the normalized phasing variable.
struct GaitSpec {
  int degree = 5;
  /// 6 x (degree+1) Bezier coefficients, one row per controlled output.
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(6, 6);
  /// Raw phase is the hip x position in the current step frame (the stance
  /// contact point at step start is the frame origin).
  double theta_min = 0.0;
  double theta_max = 1.0;
  /// Constant selection of the controlled coordinates; rows must be
  /// independent of the phasing coordinate (zero first column).
  Mat67 h_select = (Mat67() << Eigen::MatrixXd::Zero(6, 1),
                    Eigen::MatrixXd::Identity(6, 6)).finished();

  void validate() const;
  std::string to_json() const;
  static GaitSpec from_json(const std::string &text);

  double theta_range() const { return theta_max - theta_min; }
};

/// Normalized phase and its configuration gradient.
struct PhaseEval {
  double theta = 0.0;        // clamped to [0,1]
  RowVec7 dtheta_dq = RowVec7::Zero();
  bool clamped = false;
};

PhaseEval phase(const Vec7 &q, const GaitSpec &spec);

/// Desired outputs h_d(theta) with phase derivatives, all six rows.
struct DesiredOutputs {
  Vec6 value;
  Vec6 d1; // d h_d / d theta (normalized theta)
  Vec6 d2;
};

DesiredOutputs desired_outputs(const GaitSpec &spec, double theta);

/// Output y = h_select q - h_d(theta(q)) with Jacobian and velocity.
struct OutputEval {
  Vec6 y;
  Mat67 Jy;
  Vec6 ydot;
  PhaseEval phase;
};

OutputEval holonomic_output(const Vec7 &q, const Vec7 &dq, const GaitSpec &spec);

/// Decomposition of the output acceleration along the stance dynamics:
///   yddot = H + M_h u, with H = H0 + H_lambda * lambda.
struct OutputAccel {
  Vec6 H;        // drift at the supplied lambda
  Mat67 M_h;     // Jy D^{-1} B
  Vec6 H0;       // drift with lambda = 0
  Mat67 Jy;
  Eigen::Matrix<double, 6, 2> H_lambda; // Jy D^{-1} J_c^T
};

OutputAccel output_accel_decomposition(const StanceDynamics &dyn, const Vec2 &lambda,
                                       const GaitSpec &spec);
OutputAccel output_accel_decomposition(const ModelParams &params, const Vec7 &q,
                                       const Vec7 &dq, const Vec2 &lambda,
                                       const GaitSpec &spec);

} // namespace slipgait

#endif // SLIPGAIT_GAIT_HPP_
