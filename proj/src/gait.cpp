#include "slipgait/gait.hpp"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "slipgait/errors.hpp"

namespace slipgait {
namespace {

using json = nlohmann::json;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
  return r;
}

// Raw Bernstein evaluation without clamping; used on the clamped argument.
double bernstein_value(const Eigen::VectorXd &a, double t) {
  const int M = int(a.size()) - 1;
  const double omt = 1.0 - t;
  double v = 0.0;
  for (int i = 0; i <= M; ++i)
    v += a[i] * binom(M, i) * std::pow(t, i) * std::pow(omt, M - i);
  return v;
}

} // namespace

Curve2 bezier_eval(const Eigen::VectorXd &alpha_row, double theta) {
  const int M = int(alpha_row.size()) - 1;
  if (M < 2)
    throw DegreeTooLow("Bezier degree must be >= 2 (relative degree two)");
  const double t = std::clamp(theta, 0.0, 1.0);

  Curve2 out;
  out.value = bernstein_value(alpha_row, t);
  Eigen::VectorXd d1(M);
  for (int i = 0; i < M; ++i) d1[i] = M * (alpha_row[i + 1] - alpha_row[i]);
  out.d1 = bernstein_value(d1, t);
  Eigen::VectorXd d2(M - 1);
  for (int i = 0; i < M - 1; ++i) d2[i] = (M - 1) * (d1[i + 1] - d1[i]);
  out.d2 = bernstein_value(d2, t);
  return out;
}

void GaitSpec::validate() const {
  if (degree < 2) throw DegreeTooLow("GaitSpec degree must be >= 2");
  if (alpha.rows() != 6 || alpha.cols() != degree + 1)
    throw ValidationError("alpha must be 6 x (degree+1)");
  if (!(theta_max > theta_min))
    throw ValidationError("theta_max must exceed theta_min");
  if (h_select.rows() != 6 || h_select.cols() != 7)
    throw ValidationError("h_select must be 6x7");
  if (Eigen::FullPivLU<Eigen::MatrixXd>(h_select).rank() < 6)
    throw ValidationError("h_select must have full row rank 6");
  if (h_select.col(0).cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError("h_select rows must not involve the phasing coordinate");
}

PhaseEval phase(const Vec7 &q, const GaitSpec &spec) {
  PhaseEval ev;
  const double range = spec.theta_range();
  const double raw = (q[0] - spec.theta_min) / range;
  ev.clamped = raw < 0.0 || raw > 1.0;
  ev.theta = std::clamp(raw, 0.0, 1.0);
  if (!ev.clamped) ev.dtheta_dq[0] = 1.0 / range;
  return ev;
}

DesiredOutputs desired_outputs(const GaitSpec &spec, double theta) {
  DesiredOutputs d;
  for (int r = 0; r < 6; ++r) {
    const Curve2 c = bezier_eval(spec.alpha.row(r).transpose(), theta);
    d.value[r] = c.value;
    d.d1[r] = c.d1;
    d.d2[r] = c.d2;
  }
  return d;
}

OutputEval holonomic_output(const Vec7 &q, const Vec7 &dq, const GaitSpec &spec) {
  OutputEval ev;
  ev.phase = phase(q, spec);
  const DesiredOutputs hd = desired_outputs(spec, ev.phase.theta);
  ev.y = spec.h_select * q - hd.value;
  ev.Jy = spec.h_select - hd.d1 * ev.phase.dtheta_dq;
  ev.ydot = ev.Jy * dq;
  return ev;
}

OutputAccel output_accel_decomposition(const StanceDynamics &dyn, const Vec2 &lambda,
                                       const GaitSpec &spec) {
  OutputAccel out;
  const OutputEval ev = holonomic_output(dyn.q, dyn.dq, spec);
  const DesiredOutputs hd = desired_outputs(spec, ev.phase.theta);

  out.Jy = ev.Jy;
  out.M_h = ev.Jy * dyn.Dinv_B;
  out.H_lambda = ev.Jy * dyn.Dinv_Jct;
  // Jydot*dq reduces to -h_d'' * thetadot^2 because h_select and
  // dtheta/dq are constant.
  const double thetadot = ev.phase.dtheta_dq * dyn.dq;
  out.H0 = ev.Jy * dyn.solve_D(-dyn.bias) - hd.d2 * (thetadot * thetadot);
  out.H = out.H0 + out.H_lambda * lambda;
  return out;
}

OutputAccel output_accel_decomposition(const ModelParams &params, const Vec7 &q,
                                       const Vec7 &dq, const Vec2 &lambda,
                                       const GaitSpec &spec) {
  return output_accel_decomposition(stance_dynamics(params, q, dq), lambda, spec);
}

std::string GaitSpec::to_json() const {
  json j;
  j["degree"] = degree;
  std::vector<std::vector<double>> a(6), h(6);
  for (int r = 0; r < 6; ++r) {
    a[r].assign(alpha.row(r).begin(), alpha.row(r).end());
    h[r].assign(h_select.row(r).begin(), h_select.row(r).end());
  }
  j["alpha"] = a;
  j["theta_min"] = theta_min;
  j["theta_max"] = theta_max;
  j["h_select"] = h;
  return j.dump(2);
}

GaitSpec GaitSpec::from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("GaitSpec: ") + e.what());
  }
  GaitSpec spec;
  try {
    spec.degree = j.at("degree").get<int>();
    const auto &a = j.at("alpha");
    if (!a.is_array() || a.size() != 6)
      throw ValidationError("alpha must have 6 rows");
    spec.alpha.resize(6, spec.degree + 1);
    for (int r = 0; r < 6; ++r) {
      if (int(a[r].size()) != spec.degree + 1)
        throw ValidationError("alpha rows must have degree+1 entries");
      for (int c = 0; c <= spec.degree; ++c) spec.alpha(r, c) = a[r][c].get<double>();
    }
    spec.theta_min = j.at("theta_min").get<double>();
    spec.theta_max = j.at("theta_max").get<double>();
    if (j.contains("h_select")) {
      const auto &h = j["h_select"];
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 7; ++c) spec.h_select(r, c) = h[r][c].get<double>();
    }
  } catch (const json::exception &e) {
    throw ValidationError(std::string("GaitSpec: ") + e.what());
  }
  spec.validate();
  return spec;
}

} // namespace slipgait
