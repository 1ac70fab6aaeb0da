#include "slipgait/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "slipgait/errors.hpp"

namespace slipgait {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (error weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Shampine's dense-output weights (quartic in sigma).
constexpr double P[7][4] = {
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
     -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
     87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
     -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
     701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
     -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0,
     69997945.0 / 29380423.0}};

} // namespace

Eigen::VectorXd DenseSegment::eval(double t) const {
  const double s = (t - t0) / h;
  Eigen::Vector4d p(s, s * s, s * s * s, s * s * s * s);
  return y0 + h * (Q * p);
}

Eigen::VectorXd DenseSegment::eval_derivative(double t) const {
  const double s = (t - t0) / h;
  Eigen::Vector4d dp(1.0, 2.0 * s, 3.0 * s * s, 4.0 * s * s * s);
  return Q * dp;
}

Eigen::VectorXd Trajectory::eval(double t) const {
  if (segments.empty()) throw Error("empty trajectory");
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double v, const DenseSegment &s) { return v < s.t0; });
  if (it != segments.begin()) --it;
  return it->eval(std::clamp(t, t_begin(), t_end()));
}

Eigen::VectorXd Trajectory::eval_derivative(double t) const {
  if (segments.empty()) throw Error("empty trajectory");
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double v, const DenseSegment &s) { return v < s.t0; });
  if (it != segments.begin()) --it;
  return it->eval_derivative(std::clamp(t, t_begin(), t_end()));
}

namespace {

// Locates the downward crossing of g on one dense segment: bisection to a
// tight bracket, then secant polish. Returns the crossing time.
double refine_event(const DenseSegment &seg, const EventFn &event, double t_lo,
                    double t_hi) {
  double g_lo = event(t_lo, seg.eval(t_lo));
  double g_hi = event(t_hi, seg.eval(t_hi));
  for (int i = 0; i < 80 && (t_hi - t_lo) > 1e-15 * std::max(1.0, std::abs(t_hi));
       ++i) {
    const double tm = 0.5 * (t_lo + t_hi);
    const double gm = event(tm, seg.eval(tm));
    if (gm > 0.0) {
      t_lo = tm;
      g_lo = gm;
    } else {
      t_hi = tm;
      g_hi = gm;
    }
  }
  // Secant polish inside the bracket.
  double ta = t_lo, tb = t_hi, ga = g_lo, gb = g_hi;
  for (int i = 0; i < 4; ++i) {
    if (ga == gb) break;
    const double tc = tb - gb * (tb - ta) / (gb - ga);
    if (!(tc >= t_lo && tc <= t_hi)) break;
    const double gc = event(tc, seg.eval(tc));
    ta = tb;
    ga = gb;
    tb = tc;
    gb = gc;
    if (gc == 0.0) break;
  }
  return tb;
}

} // namespace

IntegrateResult integrate_dopri5(const RhsFn &rhs, double t0,
                                 const Eigen::VectorXd &y0, double t_end,
                                 const IntegratorSettings &settings,
                                 const EventFn &event, double event_dwell,
                                 const StepCallback &after_step) {
  const int n = int(y0.size());
  IntegrateResult res;
  res.y_end = y0;
  res.t_end = t0;

  Eigen::VectorXd y = y0;
  double t = t0;
  double h = std::min(settings.h_init, t_end - t0);

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXd ytmp(n), ynew(n), yerr(n);
  rhs(t, y, k1);
  ++res.n_rhs;

  double g_prev = event ? event(t, y) : 1.0;

  while (t < t_end && res.n_steps < settings.max_steps) {
    h = std::min(h, t_end - t);
    if (h < settings.h_min) {
      res.status = IntegrateStatus::kStepSizeUnderflow;
      return res;
    }

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7); // FSAL
    res.n_rhs += 6;

    yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc =
          settings.atol + settings.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = yerr[i] / sc;
      err += r * r;
    }
    err = std::sqrt(err / n);

    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    DenseSegment seg;
    seg.t0 = t;
    seg.h = h;
    seg.y0 = y;
    seg.Q.resize(n, 4);
    const Eigen::VectorXd *ks[7] = {&k1, &k2, &k3, &k4, &k5, &k6, &k7};
    for (int col = 0; col < 4; ++col) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < 7; ++i)
        if (P[i][col] != 0.0) acc += P[i][col] * (*ks[i]);
      seg.Q.col(col) = acc;
    }

    const double t_new = t + h;
    bool fired = false;
    if (event && t_new - t0 > event_dwell) {
      // Check the midpoint too so a within-step dip cannot slip through.
      const double t_from = std::max(t, t0 + event_dwell);
      double g_from = (t_from == t) ? g_prev : event(t_from, seg.eval(t_from));
      const double tm = 0.5 * (t_from + t_new);
      const double gm = event(tm, seg.eval(tm));
      const double g_new = event(t_new, ynew);
      double t_lo = t_from, t_hi = t_new, g_lo = g_from;
      if (g_from > 0.0 && gm <= 0.0) {
        t_hi = tm;
        fired = true;
      } else if (gm > 0.0 && g_new <= 0.0) {
        t_lo = tm;
        g_lo = gm;
        fired = true;
      }
      if (fired && g_lo > 0.0) {
        const double t_ev = refine_event(seg, event, t_lo, t_hi);
        // Truncate the segment at the event by rescaling the interpolation
        // variable: with r = h'/h, Q'_k = r^{k-1} Q_k reproduces the same
        // polynomial on [t, t_ev].
        DenseSegment ev_seg;
        ev_seg.t0 = t;
        ev_seg.h = t_ev - t;
        ev_seg.y0 = y;
        const double r = ev_seg.h / h;
        ev_seg.Q.resize(n, 4);
        double rk = 1.0;
        for (int col = 0; col < 4; ++col) {
          ev_seg.Q.col(col) = rk * seg.Q.col(col);
          rk *= r;
        }
        res.trajectory.segments.push_back(ev_seg);
        res.t_end = t_ev;
        res.y_end = ev_seg.eval(t_ev);
        res.status = IntegrateStatus::kEvent;
        ++res.n_steps;
        return res;
      }
      g_prev = g_new;
    } else if (event) {
      g_prev = event(t_new, ynew);
    }

    res.trajectory.segments.push_back(seg);
    ++res.n_steps;
    t = t_new;
    y = ynew;
    k1 = k7;

    if (after_step && !after_step(t, y)) {
      res.status = IntegrateStatus::kAborted;
      res.t_end = t;
      res.y_end = y;
      return res;
    }

    h = std::min(settings.h_max, h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-12), -0.2))));
  }

  res.status = IntegrateStatus::kReachedEnd;
  res.t_end = t;
  res.y_end = y;
  return res;
}

} // namespace slipgait
