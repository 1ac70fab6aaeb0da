#ifndef SLIPGAIT_DYNAMICS_HPP_
#define SLIPGAIT_DYNAMICS_HPP_

#include <array>

#include "slipgait/model.hpp"

namespace slipgait {

/// Contact-point geometry needed by the stance dynamics and the guard.
struct ContactGeometry {
  Vec2 p_f;        // stance foot position
  Vec2 p_sw;       // swing foot position
  Mat27 J_f;       // stance foot Jacobian (== contact Jacobian J_c)
  Mat27 J_i;       // swing foot Jacobian (impact contact)
  double h_sw;     // swing foot height
  RowVec7 J_hsw;   // gradient of h_sw
  Vec2 jdot_dq_f;  // Jdot_f(q,dq)*dq
  Vec2 jdot_dq_i;  // Jdot_i(q,dq)*dq
};

/// 7x7 inertia matrix D(q). Symmetric positive definite.
Mat7 mass_matrix(const ModelParams &params, const Vec7 &q);

/// All partial derivatives dD/dq_k (zero for the base coordinates).
std::array<Mat7, kNumCoords> mass_matrix_partials(const ModelParams &params,
                                                  const Vec7 &q);

/// Coriolis matrix from Christoffel symbols of D, so Ddot - 2C is
/// skew-symmetric.
Mat7 coriolis_matrix(const ModelParams &params, const Vec7 &q, const Vec7 &dq);

/// Gravity generalized forces G(q) = dV/dq.
Vec7 gravity_forces(const ModelParams &params, const Vec7 &q);

/// Combined C(q,dq)*dq + G(q).
Vec7 bias_forces(const ModelParams &params, const Vec7 &q, const Vec7 &dq);

double potential_energy(const ModelParams &params, const Vec7 &q);
double kinetic_energy(const ModelParams &params, const Vec7 &q, const Vec7 &dq);
double total_energy(const ModelParams &params, const State &x);

ContactGeometry contact_geometry(const ModelParams &params, const Vec7 &q);

/// Everything the stance-phase force/acceleration computations share.
/// Building it once per state evaluation avoids recomputing D and the
/// contact kinematics in the controller and the plant.
struct StanceDynamics {
  Vec7 q;
  Vec7 dq;
  Mat7 D;
  Eigen::LLT<Mat7> D_llt;
  Vec7 bias; // C*dq + G
  ContactGeometry geom;
  Mat7 Dinv_B;         // D^{-1} B
  Eigen::Matrix<double, 7, 2> Dinv_Jct; // D^{-1} J_c^T

  Vec7 solve_D(const Vec7 &rhs) const { return D_llt.solve(rhs); }
};

StanceDynamics stance_dynamics(const ModelParams &params, const Vec7 &q,
                               const Vec7 &dq);

/// Affine dependence of the contact force on the input u:
///   lambda_n(u) = lambda_n0 + l_row * u,  lambda_t = c_t * lambda_n + t0.
/// c_t and t0 come from the configured tangential law; the normal force
/// solves the Baumgarte-stabilized normal acceleration constraint.
struct ContactSolve {
  double lambda_n0 = 0.0;
  RowVec7 l_row = RowVec7::Zero();
  double c_t = 0.0;
  double t0 = 0.0;

  ContactForces at(const Vec7 &u) const {
    ContactForces f;
    f.lambda_n = lambda_n0 + l_row.dot(u);
    f.lambda_t = c_t * f.lambda_n + t0;
    f.valid = f.lambda_n >= 0.0;
    return f;
  }
};

ContactSolve contact_solve(const ModelParams &params, const StanceDynamics &dyn);

/// Ground reaction forces for a given input. Throws SingularContact when
/// the normal-constraint operator degenerates.
ContactForces contact_forces(const ModelParams &params, const Vec7 &q,
                             const Vec7 &dq, const Vec7 &u);

/// Stance-phase forward dynamics qddot = D^{-1}(Bu + J_c^T lambda - C dq - G),
/// with lambda from the contact solve. The optional out parameter reports the
/// forces actually applied.
Vec7 forward_dynamics(const ModelParams &params, const Vec7 &q, const Vec7 &dq,
                      const Vec7 &u, ContactForces *forces_out = nullptr);

Vec7 forward_dynamics(const ModelParams &params, const StanceDynamics &dyn,
                      const Vec7 &u, ContactForces *forces_out = nullptr);

} // namespace slipgait

#endif // SLIPGAIT_DYNAMICS_HPP_
