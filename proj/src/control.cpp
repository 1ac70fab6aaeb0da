#include "slipgait/control.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "slipgait/errors.hpp"

namespace slipgait {
namespace {

using json = nlohmann::json;

void check_spd(const Mat6 &K, const char *name) {
  if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + K.cwiseAbs().maxCoeff()))
    throw ValidationError(std::string(name) + " must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat6> es(K);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError(std::string(name) + " must be positive definite");
}

// Resolves u = u0 + w * lambda_n against the affine contact solve
// lambda_n(u) = lambda_n0 + l*u. Exact: the coupling is rank one.
Vec7 resolve_contact_coupling(const ContactSolve &cs, const Vec7 &u0, const Vec7 &w,
                              ContactForces *forces_out) {
  const double denom = 1.0 - cs.l_row.dot(w);
  if (std::abs(denom) < 1e-12)
    throw SingularContact("control/contact coupling is singular");
  const double lambda_n = (cs.lambda_n0 + cs.l_row.dot(u0)) / denom;
  const Vec7 u = u0 + w * lambda_n;
  if (forces_out) *forces_out = cs.at(u);
  return u;
}

Eigen::Matrix<double, 7, 2> stack_lambda_rows(const SlipEval &slip,
                                              const OutputAccel &out) {
  Eigen::Matrix<double, 7, 2> V;
  V.row(0) = slip.G_lambda;
  V.bottomRows<6>() = out.H_lambda;
  return V;
}

} // namespace

void Gains::validate() const {
  if (!(k_s > 0.0)) throw ValidationError("k_s must be positive");
  check_spd(Kp, "Kp");
  check_spd(Kd, "Kd");
}

StackedDecoupling stacked_decoupling(const StanceDynamics &dyn, const Vec2 & /*lambda*/,
                                     const GaitSpec &spec, const RowVec7 &A_row) {
  StackedDecoupling sd;
  const SlipEval slip = slip_decomposition(dyn, Vec2::Zero(), A_row, 0.0);
  const OutputAccel out = output_accel_decomposition(dyn, Vec2::Zero(), spec);
  sd.A_mat.row(0) = slip.M_s;
  sd.A_mat.bottomRows<6>() = out.M_h;
  sd.sigma_min = Eigen::JacobiSVD<Mat7>(sd.A_mat).singularValues().minCoeff();
  if (sd.sigma_min < 1e-8)
    throw NearSingularDecoupling("stacked decoupling matrix near singular");
  return sd;
}

StackedDecoupling stacked_decoupling(const ModelParams &params, const Vec7 &q,
                                     const Vec7 &dq, const Vec2 &lambda,
                                     const GaitSpec &spec, const RowVec7 &A_row) {
  return stacked_decoupling(stance_dynamics(params, q, dq), lambda, spec, A_row);
}

ControlEval combined_feedback(const StanceDynamics &dyn, const Vec2 &lambda,
                              const Gains &gains, const GaitSpec &spec,
                              const RowVec7 &A_row, double b_k) {
  const SlipEval slip = slip_decomposition(dyn, lambda, A_row, b_k);
  const OutputAccel out = output_accel_decomposition(dyn, lambda, spec);
  const OutputEval ev = holonomic_output(dyn.q, dyn.dq, spec);

  Mat7 A_mat;
  A_mat.row(0) = slip.M_s;
  A_mat.bottomRows<6>() = out.M_h;
  const double sigma_min = Eigen::JacobiSVD<Mat7>(A_mat).singularValues().minCoeff();
  if (sigma_min < 1e-8)
    throw NearSingularDecoupling("stacked decoupling matrix near singular");

  Vec7 v;
  v[0] = -slip.Gamma_s - gains.k_s * slip.eta_s;
  v.tail<6>() = -out.H - gains.Kd * ev.ydot - gains.Kp * ev.y;

  ControlEval ce;
  ce.u = A_mat.partialPivLu().solve(v);
  ce.sigma_min_A = sigma_min;
  ce.norm_Ms = slip.M_s.norm();
  ce.eta_s = slip.eta_s;
  ce.y = ev.y;
  ce.ydot = ev.ydot;
  ce.theta = ev.phase.theta;
  ce.forces.lambda_t = lambda[0];
  ce.forces.lambda_n = lambda[1];
  return ce;
}

ControlEval combined_feedback_consistent(const ModelParams &params,
                                         const StanceDynamics &dyn,
                                         const Gains &gains, const GaitSpec &spec,
                                         const RowVec7 &A_row, double b_k) {
  const ContactSolve cs = contact_solve(params, dyn);
  const Vec2 lambda_base(cs.t0, 0.0); // prescribed tangential part, if any

  const SlipEval slip = slip_decomposition(dyn, lambda_base, A_row, b_k);
  const OutputAccel out = output_accel_decomposition(dyn, lambda_base, spec);
  const OutputEval ev = holonomic_output(dyn.q, dyn.dq, spec);

  Mat7 A_mat;
  A_mat.row(0) = slip.M_s;
  A_mat.bottomRows<6>() = out.M_h;
  const double sigma_min = Eigen::JacobiSVD<Mat7>(A_mat).singularValues().minCoeff();
  if (sigma_min < 1e-8)
    throw NearSingularDecoupling("stacked decoupling matrix near singular");
  const auto lu = A_mat.partialPivLu();

  Vec7 v0;
  v0[0] = -slip.Gamma_s - gains.k_s * slip.eta_s;
  v0.tail<6>() = -out.H - gains.Kd * ev.ydot - gains.Kp * ev.y;

  const Vec2 m_lambda(cs.c_t, 1.0); // lambda = lambda_base + m_lambda * lambda_n
  const Vec7 u0 = lu.solve(v0);
  const Vec7 w = lu.solve(Vec7(-stack_lambda_rows(slip, out) * m_lambda));

  ControlEval ce;
  ce.u = resolve_contact_coupling(cs, u0, w, &ce.forces);
  ce.sigma_min_A = sigma_min;
  ce.norm_Ms = slip.M_s.norm();
  ce.eta_s = slip.eta_s;
  ce.y = ev.y;
  ce.ydot = ev.ydot;
  ce.theta = ev.phase.theta;
  return ce;
}

Vec7 slip_only_feedback(const StanceDynamics &dyn, const Vec2 &lambda, double k_s,
                        const RowVec7 &A_row, double b_k) {
  const SlipEval slip = slip_decomposition(dyn, lambda, A_row, b_k);
  const double ms2 = slip.M_s.squaredNorm();
  if (slip.M_s.norm() <= 1e-10)
    throw SlipChannelSingular("slip channel row M_s has zero norm");
  const Vec7 ms_pinv = slip.M_s.transpose() / ms2;
  return ms_pinv * (-slip.Gamma_s - k_s * slip.eta_s);
}

ControlEval slip_only_feedback_consistent(const ModelParams &params,
                                          const StanceDynamics &dyn, double k_s,
                                          const RowVec7 &A_row, double b_k) {
  const ContactSolve cs = contact_solve(params, dyn);
  const Vec2 lambda_base(cs.t0, 0.0);
  const SlipEval slip = slip_decomposition(dyn, lambda_base, A_row, b_k);
  if (slip.M_s.norm() <= 1e-10)
    throw SlipChannelSingular("slip channel row M_s has zero norm");
  const Vec7 ms_pinv = slip.M_s.transpose() / slip.M_s.squaredNorm();
  const Vec2 m_lambda(cs.c_t, 1.0);

  const Vec7 u0 = ms_pinv * (-slip.Gamma_s - k_s * slip.eta_s);
  const Vec7 w = ms_pinv * (-slip.G_lambda.dot(m_lambda));

  ControlEval ce;
  ce.u = resolve_contact_coupling(cs, u0, w, &ce.forces);
  ce.norm_Ms = slip.M_s.norm();
  ce.eta_s = slip.eta_s;
  return ce;
}

Vec7 open_loop_controller(const StanceDynamics &dyn, const Vec2 &lambda,
                          const Gains &gains, const GaitSpec &spec) {
  const OutputAccel out = output_accel_decomposition(dyn, lambda, spec);
  const OutputEval ev = holonomic_output(dyn.q, dyn.dq, spec);
  Eigen::JacobiSVD<Mat67> svd(out.M_h);
  if (svd.singularValues().minCoeff() < 1e-10)
    throw HolonomicChannelSingular("holonomic channel M_h lost row rank");
  const Vec6 v = -out.H - gains.Kd * ev.ydot - gains.Kp * ev.y;
  const Mat6 MMt = out.M_h * out.M_h.transpose();
  return out.M_h.transpose() * MMt.llt().solve(v);
}

ControlEval open_loop_controller_consistent(const ModelParams &params,
                                            const StanceDynamics &dyn,
                                            const Gains &gains, const GaitSpec &spec,
                                            const RowVec7 &A_row, double b_k) {
  const ContactSolve cs = contact_solve(params, dyn);
  const Vec2 lambda_base(cs.t0, 0.0);
  const SlipEval slip = slip_decomposition(dyn, lambda_base, A_row, b_k);
  const OutputAccel out = output_accel_decomposition(dyn, lambda_base, spec);
  const OutputEval ev = holonomic_output(dyn.q, dyn.dq, spec);

  Eigen::JacobiSVD<Mat67> svd(out.M_h);
  if (svd.singularValues().minCoeff() < 1e-10)
    throw HolonomicChannelSingular("holonomic channel M_h lost row rank");
  const Mat6 MMt = out.M_h * out.M_h.transpose();
  const auto llt = MMt.llt();
  const Vec2 m_lambda(cs.c_t, 1.0);

  const Vec6 v0 = -out.H - gains.Kd * ev.ydot - gains.Kp * ev.y;
  const Vec7 u0 = out.M_h.transpose() * llt.solve(v0);
  const Vec7 w =
      out.M_h.transpose() * llt.solve(Vec6(-out.H_lambda * m_lambda));

  // Regularity of the full stack is still monitored in open loop; Table 1
  // reports it for both cases.
  Mat7 A_mat;
  A_mat.row(0) = slip.M_s;
  A_mat.bottomRows<6>() = out.M_h;

  ControlEval ce;
  ce.u = resolve_contact_coupling(cs, u0, w, &ce.forces);
  ce.sigma_min_A = Eigen::JacobiSVD<Mat7>(A_mat).singularValues().minCoeff();
  ce.norm_Ms = slip.M_s.norm();
  ce.eta_s = slip.eta_s;
  ce.y = ev.y;
  ce.ydot = ev.ydot;
  ce.theta = ev.phase.theta;
  return ce;
}

ControlEval evaluate_controller(ControllerMode mode, const ModelParams &params,
                                const StanceDynamics &dyn, const Gains &gains,
                                const GaitSpec &spec, const RowVec7 &A_row,
                                double b_k) {
  if (mode == ControllerMode::kControlled)
    return combined_feedback_consistent(params, dyn, gains, spec, A_row, b_k);
  return open_loop_controller_consistent(params, dyn, gains, spec, A_row, b_k);
}

std::string Gains::to_json() const {
  json j;
  j["k_s"] = k_s;
  auto mat = [](const Mat6 &K) {
    std::vector<std::vector<double>> rows(6, std::vector<double>(6));
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) rows[r][c] = K(r, c);
    return rows;
  };
  // Emit scalars when the matrices are scaled identity.
  if ((Kp - Kp(0, 0) * Mat6::Identity()).cwiseAbs().maxCoeff() == 0.0)
    j["kp"] = Kp(0, 0);
  else
    j["kp"] = mat(Kp);
  if ((Kd - Kd(0, 0) * Mat6::Identity()).cwiseAbs().maxCoeff() == 0.0)
    j["kd"] = Kd(0, 0);
  else
    j["kd"] = mat(Kd);
  return j.dump(2);
}

Gains Gains::from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("Gains: ") + e.what());
  }
  Gains g;
  auto load = [&j](const char *key, Mat6 &K) {
    if (!j.contains(key)) return;
    const auto &v = j.at(key);
    if (v.is_number()) {
      K = v.get<double>() * Mat6::Identity();
    } else {
      if (!v.is_array() || v.size() != 6)
        throw ValidationError(std::string(key) + " must be a scalar or 6x6 matrix");
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) K(r, c) = v[r][c].get<double>();
    }
  };
  try {
    if (j.contains("k_s")) g.k_s = j["k_s"].get<double>();
    load("kp", g.Kp);
    load("kd", g.Kd);
  } catch (const json::exception &e) {
    throw ValidationError(std::string("Gains: ") + e.what());
  }
  g.validate();
  return g;
}

} // namespace slipgait
