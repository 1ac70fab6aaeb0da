#ifndef SLIPGAIT_MODEL_HPP_
#define SLIPGAIT_MODEL_HPP_

#include <array>
#include <string>

#include <Eigen/Dense>

namespace slipgait {

using Vec2 = Eigen::Vector2d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec13 = Eigen::Matrix<double, 13, 1>;
using Vec14 = Eigen::Matrix<double, 14, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat27 = Eigen::Matrix<double, 2, 7>;
using Mat67 = Eigen::Matrix<double, 6, 7>;
using RowVec7 = Eigen::Matrix<double, 1, 7>;

inline constexpr int kNumCoords = 7;
inline constexpr int kNumLinks = 5;

/// Generalized coordinate layout:
///   q[0] base x (hip, m)      q[1] base y (hip, m)   q[2] torso pitch (rad)
///   q[3] stance hip (rad)     q[4] stance knee (rad)
///   q[5] swing hip (rad)      q[6] swing knee (rad)
/// Angles are relative: thigh = torso pitch + hip, shank = thigh + knee.
/// Zero pose is legs straight down, torso straight up; positive angles
/// move the distal end toward +x.
struct State {
  Vec7 q = Vec7::Zero();
  Vec7 dq = Vec7::Zero();

  Vec14 packed() const {
    Vec14 x;
    x << q, dq;
    return x;
  }
  static State unpack(const Vec14 &x) {
    State s;
    s.q = x.head<7>();
    s.dq = x.tail<7>();
    return s;
  }
};

/// How the tangential ground reaction is produced during stance.
enum class TangentialLaw {
  kFrictionless,   // lambda_t = 0
  kKineticCoulomb, // lambda_t = -mu * lambda_n * sign(v_t)
  kPrescribed,     // lambda_t = prescribed constant
};

/// Link order everywhere: torso, stance thigh, stance shank,
/// swing thigh, swing shank. The two thighs and the two shanks must be
/// identical so the leg-swap relabeling is exact.
struct ModelParams {
  std::array<double, kNumLinks> link_masses{4.0, 1.0, 0.6, 1.0, 0.6};
  std::array<double, kNumLinks> link_lengths{0.5, 0.4, 0.4, 0.4, 0.4};
  std::array<double, kNumLinks> link_com_offsets{0.25, 0.2, 0.2, 0.2, 0.2};
  // Slender-rod values (m L^2 / 12) for the defaults.
  std::array<double, kNumLinks> link_inertias{4.0 * 0.25 / 12.0, 1.0 * 0.16 / 12.0,
                                              0.6 * 0.16 / 12.0, 1.0 * 0.16 / 12.0,
                                              0.6 * 0.16 / 12.0};
  double gravity = 9.81;
  double mu_kinetic = 0.0;
  Mat7 actuation = Mat7::Identity();

  TangentialLaw tangential_law = TangentialLaw::kFrictionless;
  double prescribed_lambda_t = 0.0;
  /// Baumgarte gains 2w, w^2 stabilize the normal contact at acceleration level.
  double baumgarte_omega = 50.0;
  /// Regularization threshold for sign(v_t) in the Coulomb law.
  double v_eps = 1e-6;

  double total_mass() const;
  /// Throws ValidationError on any violated invariant.
  void validate() const;

  std::string to_json() const;
  static ModelParams from_json(const std::string &text);
};

/// Ground reaction at the stance contact point.
struct ContactForces {
  double lambda_t = 0.0;
  double lambda_n = 0.0;
  /// False when the solve produced lambda_n < 0 (contact wants to separate).
  bool valid = true;

  Vec2 vec() const { return Vec2(lambda_t, lambda_n); }
};

/// Position-level kinematics of one material point of the chain:
/// the point itself, its Jacobian, and the Hessians of both coordinates
/// (H[c](i,j) = d^2 p_c / dq_i dq_j). Hessians make Jdot*dq and the
/// Christoffel assembly analytic.
struct PointKin {
  Vec2 p = Vec2::Zero();
  Mat27 J = Mat27::Zero();
  Mat7 Hx = Mat7::Zero();
  Mat7 Hy = Mat7::Zero();

  Vec2 velocity(const Vec7 &dq) const { return J * dq; }
  /// Jdot(q, dq) * dq, i.e. the velocity-product acceleration term.
  Vec2 jdot_dq(const Vec7 &dq) const {
    return Vec2(dq.dot(Hx * dq), dq.dot(Hy * dq));
  }
  /// dJ/dq_k as a 2x7 matrix.
  Mat27 dJ_dq(int k) const {
    Mat27 dJ;
    dJ.row(0) = Hx.row(k);
    dJ.row(1) = Hy.row(k);
    return dJ;
  }
};

/// Point kinematics of the five link COMs plus both feet, evaluated at q.
struct ChainKin {
  std::array<PointKin, kNumLinks> com;
  PointKin stance_foot;
  PointKin swing_foot;
  /// Constant angular-velocity rows: omega_i = ang_rows[i] * dq.
  static const std::array<RowVec7, kNumLinks> &angular_rows();
};

ChainKin chain_kinematics(const ModelParams &params, const Vec7 &q);

} // namespace slipgait

#endif // SLIPGAIT_MODEL_HPP_
