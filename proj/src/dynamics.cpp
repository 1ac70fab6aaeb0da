#include "slipgait/dynamics.hpp"

#include <cmath>

#include "slipgait/errors.hpp"

namespace slipgait {

Mat7 mass_matrix(const ModelParams &params, const Vec7 &q) {
  const ChainKin kin = chain_kinematics(params, q);
  const auto &w = ChainKin::angular_rows();
  Mat7 D = Mat7::Zero();
  for (int i = 0; i < kNumLinks; ++i) {
    D.noalias() += params.link_masses[i] * kin.com[i].J.transpose() * kin.com[i].J;
    D.noalias() += params.link_inertias[i] * w[i].transpose() * w[i];
  }
  // Symmetrize away roundoff.
  D = 0.5 * (D + D.transpose()).eval();
  return D;
}

std::array<Mat7, kNumCoords> mass_matrix_partials(const ModelParams &params,
                                                  const Vec7 &q) {
  const ChainKin kin = chain_kinematics(params, q);
  std::array<Mat7, kNumCoords> dD;
  dD.fill(Mat7::Zero());
  // J depends on the angle coordinates only, so k = 0, 1 vanish.
  for (int k = 2; k < kNumCoords; ++k) {
    for (int i = 0; i < kNumLinks; ++i) {
      const Mat27 dJ = kin.com[i].dJ_dq(k);
      const Mat7 term = kin.com[i].J.transpose() * dJ;
      dD[k].noalias() += params.link_masses[i] * (term + term.transpose());
    }
  }
  return dD;
}

Mat7 coriolis_matrix(const ModelParams &params, const Vec7 &q, const Vec7 &dq) {
  const auto dD = mass_matrix_partials(params, q);
  Mat7 C = Mat7::Zero();
  for (int i = 0; i < kNumCoords; ++i)
    for (int j = 0; j < kNumCoords; ++j) {
      double cij = 0.0;
      for (int k = 0; k < kNumCoords; ++k)
        cij += (dD[k](i, j) + dD[j](i, k) - dD[i](j, k)) * dq[k];
      C(i, j) = 0.5 * cij;
    }
  return C;
}

Vec7 gravity_forces(const ModelParams &params, const Vec7 &q) {
  const ChainKin kin = chain_kinematics(params, q);
  Vec7 G = Vec7::Zero();
  for (int i = 0; i < kNumLinks; ++i)
    G += params.link_masses[i] * params.gravity * kin.com[i].J.row(1).transpose();
  return G;
}

Vec7 bias_forces(const ModelParams &params, const Vec7 &q, const Vec7 &dq) {
  return coriolis_matrix(params, q, dq) * dq + gravity_forces(params, q);
}

double potential_energy(const ModelParams &params, const Vec7 &q) {
  const ChainKin kin = chain_kinematics(params, q);
  double V = 0.0;
  for (int i = 0; i < kNumLinks; ++i)
    V += params.link_masses[i] * params.gravity * kin.com[i].p.y();
  return V;
}

double kinetic_energy(const ModelParams &params, const Vec7 &q, const Vec7 &dq) {
  return 0.5 * dq.dot(mass_matrix(params, q) * dq);
}

double total_energy(const ModelParams &params, const State &x) {
  return kinetic_energy(params, x.q, x.dq) + potential_energy(params, x.q);
}

ContactGeometry contact_geometry(const ModelParams &params, const Vec7 &q) {
  const ChainKin kin = chain_kinematics(params, q);
  ContactGeometry g;
  g.p_f = kin.stance_foot.p;
  g.p_sw = kin.swing_foot.p;
  g.J_f = kin.stance_foot.J;
  g.J_i = kin.swing_foot.J;
  g.h_sw = kin.swing_foot.p.y();
  g.J_hsw = kin.swing_foot.J.row(1);
  g.jdot_dq_f = Vec2::Zero();
  g.jdot_dq_i = Vec2::Zero();
  return g;
}

StanceDynamics stance_dynamics(const ModelParams &params, const Vec7 &q,
                               const Vec7 &dq) {
  StanceDynamics dyn;
  dyn.q = q;
  dyn.dq = dq;
  const ChainKin kin = chain_kinematics(params, q);
  const auto &w = ChainKin::angular_rows();
  Mat7 D = Mat7::Zero();
  for (int i = 0; i < kNumLinks; ++i) {
    D.noalias() += params.link_masses[i] * kin.com[i].J.transpose() * kin.com[i].J;
    D.noalias() += params.link_inertias[i] * w[i].transpose() * w[i];
  }
  dyn.D = 0.5 * (D + D.transpose()).eval();
  dyn.D_llt.compute(dyn.D);
  if (dyn.D_llt.info() != Eigen::Success)
    throw SingularMass("inertia matrix is not positive definite");
  dyn.bias = coriolis_matrix(params, q, dq) * dq + gravity_forces(params, q);

  dyn.geom.p_f = kin.stance_foot.p;
  dyn.geom.p_sw = kin.swing_foot.p;
  dyn.geom.J_f = kin.stance_foot.J;
  dyn.geom.J_i = kin.swing_foot.J;
  dyn.geom.h_sw = kin.swing_foot.p.y();
  dyn.geom.J_hsw = kin.swing_foot.J.row(1);
  dyn.geom.jdot_dq_f = kin.stance_foot.jdot_dq(dq);
  dyn.geom.jdot_dq_i = kin.swing_foot.jdot_dq(dq);

  dyn.Dinv_B = dyn.D_llt.solve(params.actuation);
  dyn.Dinv_Jct = dyn.D_llt.solve(dyn.geom.J_f.transpose());
  return dyn;
}

ContactSolve contact_solve(const ModelParams &params, const StanceDynamics &dyn) {
  const RowVec7 J_t = dyn.geom.J_f.row(0);
  const RowVec7 J_n = dyn.geom.J_f.row(1);
  const Vec7 Dinv_Jnt = dyn.Dinv_Jct.col(1);
  const Vec7 Dinv_Jtt = dyn.Dinv_Jct.col(0);

  const double a_nn = J_n.dot(Dinv_Jnt);
  if (a_nn < 1e-10)
    throw SingularContact("normal-constraint operator J_n D^-1 J_n^T below 1e-10");

  ContactSolve cs;
  switch (params.tangential_law) {
    case TangentialLaw::kFrictionless:
      cs.c_t = 0.0;
      cs.t0 = 0.0;
      break;
    case TangentialLaw::kKineticCoulomb: {
      const double v_t = J_t.dot(dyn.dq);
      const double s = v_t / std::max(std::abs(v_t), params.v_eps);
      cs.c_t = -params.mu_kinetic * s;
      cs.t0 = 0.0;
      break;
    }
    case TangentialLaw::kPrescribed:
      cs.c_t = 0.0;
      cs.t0 = params.prescribed_lambda_t;
      break;
  }

  // Normal acceleration constraint with Baumgarte stabilization:
  //   J_n qddot + Jdot_n dq = -2 w pdot_y - w^2 p_y
  const double w = params.baumgarte_omega;
  const double p_y = dyn.geom.p_f.y();
  const double pdot_y = J_n.dot(dyn.dq);
  const double acc_des = -2.0 * w * pdot_y - w * w * p_y;

  const double a_eff = a_nn + cs.c_t * J_n.dot(Dinv_Jtt);
  if (std::abs(a_eff) < 1e-10)
    throw SingularContact("tangential law degenerates the normal contact solve");

  const Vec7 free_force = -dyn.bias + dyn.geom.J_f.row(0).transpose() * cs.t0;
  const double b0 =
      acc_des - dyn.geom.jdot_dq_f.y() - J_n.dot(dyn.D_llt.solve(free_force));
  cs.lambda_n0 = b0 / a_eff;
  cs.l_row = -(J_n * dyn.Dinv_B) / a_eff;
  return cs;
}

ContactForces contact_forces(const ModelParams &params, const Vec7 &q,
                             const Vec7 &dq, const Vec7 &u) {
  const StanceDynamics dyn = stance_dynamics(params, q, dq);
  return contact_solve(params, dyn).at(u);
}

Vec7 forward_dynamics(const ModelParams &params, const StanceDynamics &dyn,
                      const Vec7 &u, ContactForces *forces_out) {
  const ContactForces f = contact_solve(params, dyn).at(u);
  if (forces_out) *forces_out = f;
  const Vec7 rhs = params.actuation * u + dyn.geom.J_f.transpose() * f.vec() - dyn.bias;
  return dyn.solve_D(rhs);
}

Vec7 forward_dynamics(const ModelParams &params, const Vec7 &q, const Vec7 &dq,
                      const Vec7 &u, ContactForces *forces_out) {
  const StanceDynamics dyn = stance_dynamics(params, q, dq);
  return forward_dynamics(params, dyn, u, forces_out);
}

} // namespace slipgait
