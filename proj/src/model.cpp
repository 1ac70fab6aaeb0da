#include "slipgait/model.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "slipgait/errors.hpp"

namespace slipgait {
namespace {

using json = nlohmann::json;

// A point of the chain is base + sum of amp * dir(sum of q[idx]).
// dir is (sin, cos) for the torso (points up) and (sin, -cos) for the
// legs (point down); both satisfy dir'' = -dir.
struct Term {
  double amp;
  std::vector<int> idx;
  bool up;
};

void accumulate(PointKin &pk, const Term &term, const Vec7 &q) {
  double angle = 0.0;
  for (int i : term.idx) angle += q[i];
  const double s = std::sin(angle), c = std::cos(angle);
  const Vec2 dir = term.up ? Vec2(s, c) : Vec2(s, -c);
  const Vec2 ddir = term.up ? Vec2(c, -s) : Vec2(c, s);
  pk.p += term.amp * dir;
  for (int i : term.idx) {
    pk.J.col(i) += term.amp * ddir;
    for (int j : term.idx) {
      pk.Hx(i, j) -= term.amp * dir.x();
      pk.Hy(i, j) -= term.amp * dir.y();
    }
  }
}

PointKin make_point(const Vec7 &q, const std::vector<Term> &terms) {
  PointKin pk;
  pk.p = Vec2(q[0], q[1]);
  pk.J(0, 0) = 1.0;
  pk.J(1, 1) = 1.0;
  for (const Term &t : terms) accumulate(pk, t, q);
  return pk;
}

} // namespace

double ModelParams::total_mass() const {
  return std::accumulate(link_masses.begin(), link_masses.end(), 0.0);
}

void ModelParams::validate() const {
  for (int i = 0; i < kNumLinks; ++i) {
    if (!(link_masses[i] > 0.0)) throw ValidationError("link mass must be positive");
    if (!(link_lengths[i] > 0.0)) throw ValidationError("link length must be positive");
    if (!(link_inertias[i] > 0.0)) throw ValidationError("link inertia must be positive");
    if (!(link_com_offsets[i] > 0.0 && link_com_offsets[i] <= link_lengths[i]))
      throw ValidationError("link COM offset must lie within the link");
  }
  if (!(mu_kinetic >= 0.0)) throw ValidationError("mu_kinetic must be nonnegative");
  if (!(gravity >= 0.0)) throw ValidationError("gravity must be nonnegative");
  if (Eigen::FullPivLU<Mat7>(actuation).rank() < kNumCoords)
    throw ValidationError("actuation matrix must have full column rank 7");
  // Mirror symmetry between the legs keeps the leg-swap relabeling exact.
  for (int i : {1, 2}) {
    if (link_masses[i] != link_masses[i + 2] || link_lengths[i] != link_lengths[i + 2] ||
        link_com_offsets[i] != link_com_offsets[i + 2] ||
        link_inertias[i] != link_inertias[i + 2])
      throw ValidationError("thigh/shank parameters must match between legs");
  }
  if (!(baumgarte_omega >= 0.0)) throw ValidationError("baumgarte_omega must be nonnegative");
  if (!(v_eps > 0.0)) throw ValidationError("v_eps must be positive");
}

const std::array<RowVec7, kNumLinks> &ChainKin::angular_rows() {
  static const std::array<RowVec7, kNumLinks> rows = [] {
    std::array<RowVec7, kNumLinks> r{};
    auto row = [](std::initializer_list<int> idx) {
      RowVec7 v = RowVec7::Zero();
      for (int i : idx) v[i] = 1.0;
      return v;
    };
    r[0] = row({2});          // torso
    r[1] = row({2, 3});       // stance thigh
    r[2] = row({2, 3, 4});    // stance shank
    r[3] = row({2, 5});       // swing thigh
    r[4] = row({2, 5, 6});    // swing shank
    return r;
  }();
  return rows;
}

ChainKin chain_kinematics(const ModelParams &params, const Vec7 &q) {
  const double lt = params.link_lengths[1]; // thigh
  const double ct = params.link_com_offsets[1];
  const double cs = params.link_com_offsets[2];

  ChainKin kin;
  kin.com[0] = make_point(q, {{params.link_com_offsets[0], {2}, true}});
  kin.com[1] = make_point(q, {{ct, {2, 3}, false}});
  kin.com[2] = make_point(q, {{lt, {2, 3}, false}, {cs, {2, 3, 4}, false}});
  kin.com[3] = make_point(q, {{ct, {2, 5}, false}});
  kin.com[4] = make_point(q, {{lt, {2, 5}, false}, {cs, {2, 5, 6}, false}});
  kin.stance_foot = make_point(
      q, {{lt, {2, 3}, false}, {params.link_lengths[2], {2, 3, 4}, false}});
  kin.swing_foot = make_point(
      q, {{lt, {2, 5}, false}, {params.link_lengths[4], {2, 5, 6}, false}});
  return kin;
}

std::string ModelParams::to_json() const {
  json j;
  j["link_masses"] = link_masses;
  j["link_lengths"] = link_lengths;
  j["link_com_offsets"] = link_com_offsets;
  j["link_inertias"] = link_inertias;
  j["gravity"] = gravity;
  j["mu_kinetic"] = mu_kinetic;
  if (actuation.isIdentity(0.0)) {
    j["actuation"] = "identity";
  } else {
    std::vector<std::vector<double>> rows(kNumCoords, std::vector<double>(kNumCoords));
    for (int r = 0; r < kNumCoords; ++r)
      for (int c = 0; c < kNumCoords; ++c) rows[r][c] = actuation(r, c);
    j["actuation"] = rows;
  }
  switch (tangential_law) {
    case TangentialLaw::kFrictionless: j["tangential_law"] = "frictionless"; break;
    case TangentialLaw::kKineticCoulomb: j["tangential_law"] = "kinetic_coulomb"; break;
    case TangentialLaw::kPrescribed: j["tangential_law"] = "prescribed"; break;
  }
  j["prescribed_lambda_t"] = prescribed_lambda_t;
  j["baumgarte_omega"] = baumgarte_omega;
  j["v_eps"] = v_eps;
  return j.dump(2);
}

ModelParams ModelParams::from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("ModelParams: ") + e.what());
  }
  ModelParams p;
  auto load5 = [&j](const char *key, std::array<double, kNumLinks> &out) {
    if (!j.contains(key)) return;
    const auto &arr = j.at(key);
    if (!arr.is_array() || arr.size() != kNumLinks)
      throw ValidationError(std::string(key) + " must be an array of 5 numbers");
    for (int i = 0; i < kNumLinks; ++i) out[i] = arr[i].get<double>();
  };
  load5("link_masses", p.link_masses);
  load5("link_lengths", p.link_lengths);
  load5("link_com_offsets", p.link_com_offsets);
  load5("link_inertias", p.link_inertias);
  if (j.contains("gravity")) p.gravity = j["gravity"].get<double>();
  if (j.contains("mu_kinetic")) p.mu_kinetic = j["mu_kinetic"].get<double>();
  if (j.contains("actuation")) {
    const auto &a = j["actuation"];
    if (a.is_string()) {
      if (a.get<std::string>() != "identity")
        throw ValidationError("actuation string form must be \"identity\"");
      p.actuation = Mat7::Identity();
    } else {
      if (!a.is_array() || a.size() != kNumCoords)
        throw ValidationError("actuation must be a 7x7 matrix or \"identity\"");
      for (int r = 0; r < kNumCoords; ++r)
        for (int c = 0; c < kNumCoords; ++c) p.actuation(r, c) = a[r][c].get<double>();
    }
  }
  if (j.contains("tangential_law")) {
    const std::string law = j["tangential_law"].get<std::string>();
    if (law == "frictionless") p.tangential_law = TangentialLaw::kFrictionless;
    else if (law == "kinetic_coulomb") p.tangential_law = TangentialLaw::kKineticCoulomb;
    else if (law == "prescribed") p.tangential_law = TangentialLaw::kPrescribed;
    else throw ValidationError("unknown tangential_law: " + law);
  }
  if (j.contains("prescribed_lambda_t"))
    p.prescribed_lambda_t = j["prescribed_lambda_t"].get<double>();
  if (j.contains("baumgarte_omega")) p.baumgarte_omega = j["baumgarte_omega"].get<double>();
  if (j.contains("v_eps")) p.v_eps = j["v_eps"].get<double>();
  p.validate();
  return p;
}

} // namespace slipgait
