#include "slipgait/slip.hpp"

#include <nlohmann/json.hpp>

#include "slipgait/errors.hpp"

namespace slipgait {

using json = nlohmann::json;

void SlipSchedule::validate() const {
  if (A_row.cwiseAbs().maxCoeff() == 0.0)
    throw ValidationError("A_row must be nonzero (constant rank 1)");
  if (s_levels.empty()) throw ValidationError("s_levels must not be empty");
  if (block_len < 1) throw ValidationError("block_len must be >= 1");
}

double slip_output(const Vec7 &dq, const RowVec7 &A_row, double b_k) {
  return A_row.dot(dq) - b_k;
}

double slip_output(const Vec7 &dq, const SlipSchedule &schedule, double b_k) {
  return slip_output(dq, schedule.A_row, b_k);
}

double slip_reference(const SlipSchedule &schedule, int step_index) {
  const int n = int(schedule.s_levels.size());
  const int level = ((step_index - 1) / schedule.block_len) % n;
  return schedule.v_nom + schedule.s_levels[level];
}

SlipEval slip_decomposition(const StanceDynamics &dyn, const Vec2 &lambda,
                            const RowVec7 &A_row, double b_k,
                            const RowVec7 &Adot_row, const RowVec7 &db_dq) {
  SlipEval ev;
  ev.eta_s = slip_output(dyn.dq, A_row, b_k);
  ev.M_s = A_row * dyn.Dinv_B;
  ev.G_lambda = A_row * dyn.Dinv_Jct;
  ev.Gamma0 = A_row.dot(dyn.solve_D(-dyn.bias)) + Adot_row.dot(dyn.dq) -
              db_dq.dot(dyn.dq);
  ev.Gamma_s = ev.Gamma0 + ev.G_lambda.dot(lambda);
  return ev;
}

SlipEval slip_decomposition(const ModelParams &params, const Vec7 &q, const Vec7 &dq,
                            const Vec2 &lambda, const SlipSchedule &schedule,
                            double b_k) {
  return slip_decomposition(stance_dynamics(params, q, dq), lambda, schedule.A_row,
                            b_k);
}

std::string SlipSchedule::to_json() const {
  json j;
  std::vector<double> a(A_row.begin(), A_row.end());
  j["A_row"] = a;
  j["v_nom"] = v_nom;
  j["s_levels"] = s_levels;
  j["block_len"] = block_len;
  return j.dump(2);
}

SlipSchedule SlipSchedule::from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("SlipSchedule: ") + e.what());
  }
  SlipSchedule s;
  try {
    if (j.contains("A_row")) {
      const auto &a = j["A_row"];
      if (!a.is_array() || a.size() != 7)
        throw ValidationError("A_row must have 7 entries");
      for (int i = 0; i < 7; ++i) s.A_row[i] = a[i].get<double>();
    }
    if (j.contains("v_nom")) s.v_nom = j["v_nom"].get<double>();
    if (j.contains("s_levels")) s.s_levels = j["s_levels"].get<std::vector<double>>();
    if (j.contains("block_len")) s.block_len = j["block_len"].get<int>();
  } catch (const json::exception &e) {
    throw ValidationError(std::string("SlipSchedule: ") + e.what());
  }
  s.validate();
  return s;
}

} // namespace slipgait
