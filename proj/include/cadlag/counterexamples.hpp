#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cadlag/compose.hpp"
#include "cadlag/metric.hpp"
#include "cadlag/path.hpp"
#include "cadlag/rng.hpp"
#include "cadlag/time_change.hpp"

namespace cadlag {

struct ExampleQuadruple {
  PiecewisePath g_n;
  TimeChange gamma_n;
  PiecewisePath g;
  TimeChange gamma;
};

/// Generic distance table: one row per index, named columns, free-form notes.
/// Every distance value carries the certified gap of the metric module
/// (tolerances are passed through the report builders).
struct ExampleReport {
  std::string which;
  std::vector<std::string> columns;  // first column is "n"
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "") << columns[c];
    }
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        os << (c ? "," : "");
        if (c == 0) {
          os << static_cast<long>(r[c]);
        } else {
          os << r[c];
        }
      }
      os << '\n';
    }
    return os.str();
  }
};

inline double example1_alpha(int n) {
  if (n <= 1) return 0.0;
  return 1.0 - 1.0 / (std::pow(2.0, n) - 1.0) - 1.0 / (static_cast<double>(n) * n);
}

/// Step outers g_n = 1_{[1/2 - 2^-n, inf)} with limit g = 1_{[1/2, inf)} and
/// the linear time changes whose endpoint values fail to share a constant:
/// gamma_n(t) = alpha_n (1/2 -+ 2^-(n+1)) t (minus for even n, plus for odd),
/// gamma(t) = t/2. Defined for n >= 2.
inline ExampleQuadruple example1(int n, double horizon = 48.0) {
  if (n < 2) throw domain_error("example1: n must be >= 2");
  const double jump_n = 0.5 - std::pow(2.0, -n);
  const double half_next = std::pow(2.0, -(n + 1));
  const double slope =
      example1_alpha(n) * (n % 2 == 0 ? 0.5 - half_next : 0.5 + half_next);
  ExampleQuadruple q{
      PiecewisePath::indicator_step(jump_n, horizon),
      TimeChange::make_pi(PiecewisePath::linear(0.0, slope, 1.0), slope),
      PiecewisePath::indicator_step(0.5, horizon),
      TimeChange::make_pi(PiecewisePath::linear(0.0, 0.5, 1.0), 0.5),
  };
  return q;
}

/// Step outers against constant time changes below the limit jump. The jump
/// of g_n sits at 1/2 + 2^-n (approaching the discontinuity of g from above,
/// which is what makes g_n(gamma_n) identically 0 while g(gamma) is 1);
/// gamma_n = 1/2 - 2^-(n+1), gamma = 1/2. Defined for n >= 1.
inline ExampleQuadruple example2(int n, double horizon = 48.0) {
  if (n < 1) throw domain_error("example2: n must be >= 1");
  const double jump_n = 0.5 + std::pow(2.0, -n);
  const double c_n = 0.5 - std::pow(2.0, -(n + 1));
  ExampleQuadruple q{
      PiecewisePath::indicator_step(jump_n, horizon),
      TimeChange::make_b(PiecewisePath::constant(c_n, 1.0)),
      PiecewisePath::indicator_step(0.5, horizon),
      TimeChange::make_b(PiecewisePath::constant(0.5, 1.0)),
  };
  return q;
}

/// Random convergent quadruple with gamma_n, gamma in Pi[0,1] sharing the
/// endpoint value C: a random step outer whose jump times/sizes are perturbed
/// by rate^n, and a strictly increasing piecewise-linear gamma whose interior
/// node values are perturbed by rate^n with both endpoints pinned. By
/// construction rho_inf(g_n, g) and rho_1(gamma_n, gamma) are O(rate^n).
inline ExampleQuadruple lemma1_family(std::uint64_t seed, double rate, int n,
                                      double horizon = 16.0) {
  if (!(rate >= 0.0) && !(rate < 1.0)) throw domain_error("lemma1_family: rate in [0,1)");
  if (n < 1) throw domain_error("lemma1_family: n must be >= 1");
  RandomStream rs(seed);
  const double eps = std::pow(rate, n);
  const double C = rs.next_uniform(0.6, 1.6);

  // gamma: nodes at 0 < tau1 < tau2 < 1 with strictly increasing values to C.
  const double tau1 = rs.next_uniform(0.25, 0.40);
  const double tau2 = rs.next_uniform(0.60, 0.75);
  double w1 = rs.next_uniform(0.2, 0.8);
  double w2 = rs.next_uniform(0.2, 0.8);
  const double v1 = C * w1 / (w1 + w2 + 1.0);
  const double v2 = C * (w1 + w2) / (w1 + w2 + 1.0);
  auto make_gamma = [&](double d1, double d2) {
    const std::vector<double> ts{0.0, tau1, tau2, 1.0};
    const std::vector<double> vs{0.0, v1 + d1, v2 + d2, C};
    PiecewisePath p = piecewise_linear_interpolant(ts, vs);
    PathBuilder b(1.0);
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
      b.segment(p.breakpoints()[i], p.values()[i], p.slopes()[i]);
    }
    return TimeChange::make_pi(b.finish_at(C), C);
  };
  const double slack = 0.2 * std::min({v1, v2 - v1, C - v2});
  const double d1 = eps * slack * rs.next_uniform(-1.0, 1.0);
  const double d2 = eps * slack * rs.next_uniform(-1.0, 1.0);

  // g: random step path with jumps spread over [0.1, C + 0.4].
  const int jumps = 2 + static_cast<int>(rs.next_below(3));
  std::vector<double> jt(static_cast<std::size_t>(jumps));
  std::vector<double> js(static_cast<std::size_t>(jumps));
  for (int i = 0; i < jumps; ++i) {
    jt[static_cast<std::size_t>(i)] =
        0.1 + (C + 0.3) * (static_cast<double>(i) + rs.next_uniform(0.2, 0.8)) /
                  static_cast<double>(jumps);
    js[static_cast<std::size_t>(i)] = rs.next_sign() * rs.next_uniform(0.5, 1.5);
  }
  auto make_g = [&](double scale) {
    PathBuilder b(horizon);
    b.segment(0.0, 0.0);
    double v = 0.0;
    for (int i = 0; i < jumps; ++i) {
      const double t = jt[static_cast<std::size_t>(i)] +
                       scale * 0.02 * (i % 2 == 0 ? 1.0 : -1.0);
      v += js[static_cast<std::size_t>(i)] * (1.0 + scale * 0.1);
      b.segment(t, v);
    }
    return b.finish();
  };
  ExampleQuadruple q{make_g(eps), make_gamma(d1, d2), make_g(0.0), make_gamma(0.0, 0.0)};
  return q;
}

/// Random convergent quadruple with a continuous piecewise-linear g and
/// gamma_n, gamma in B[0,1] (jumps allowed, endpoint free): gamma's jump
/// sizes, jump times and drift are perturbed by rate^n, g's node values too.
inline ExampleQuadruple lemma2_family(std::uint64_t seed, double rate, int n,
                                      double horizon = 16.0) {
  if (n < 1) throw domain_error("lemma2_family: n must be >= 1");
  RandomStream rs(seed);
  const double eps = std::pow(rate, n);

  // Continuous outer: nodes every horizon/8 with bounded increments.
  const std::size_t segs = 8;
  std::vector<double> gt(segs + 1), gv(segs + 1);
  std::vector<double> bump(segs + 1);
  for (std::size_t i = 0; i <= segs; ++i) {
    gt[i] = horizon * static_cast<double>(i) / static_cast<double>(segs);
    gv[i] = (i == 0) ? rs.next_uniform(-0.5, 0.5) : gv[i - 1] + rs.next_uniform(-0.6, 0.6);
    bump[i] = rs.next_uniform(-1.0, 1.0);
  }
  auto make_g = [&](double scale) {
    std::vector<double> vv(segs + 1);
    for (std::size_t i = 0; i <= segs; ++i) vv[i] = gv[i] + scale * bump[i];
    return piecewise_linear_interpolant(gt, vv);
  };

  // gamma: drift + two upward jumps, values kept well inside [0, horizon].
  const double drift = rs.next_uniform(0.3, 0.9);
  const double start = rs.next_uniform(0.0, 0.3);
  const double w1 = rs.next_uniform(0.2, 0.45);
  const double w2 = rs.next_uniform(0.55, 0.8);
  const double j1 = rs.next_uniform(0.2, 0.7);
  const double j2 = rs.next_uniform(0.2, 0.7);
  auto make_gamma = [&](double scale) {
    PathBuilder b(1.0);
    const double dr = drift * (1.0 + 0.1 * scale);
    double t1 = w1 + 0.05 * scale;
    double t2 = w2 - 0.05 * scale;
    b.segment(0.0, start + 0.2 * scale, dr);
    double v = start + 0.2 * scale + dr * t1;
    v += j1 * (1.0 + 0.2 * scale);
    b.segment(t1, v, dr);
    v = v + dr * (t2 - t1);
    v += j2 * (1.0 + 0.2 * scale);
    b.segment(t2, v, dr);
    return TimeChange::make_b(b.finish());
  };
  ExampleQuadruple q{make_g(eps), make_gamma(eps), make_g(0.0), make_gamma(0.0)};
  return q;
}

/// Example 1 distance table for n = 2..n_max. Columns: the rho_inf law, the
/// gamma distances, composed distance to the computed limit g o gamma and to
/// the constant-1 candidate, and the inter-subsequence composed distance
/// rho_1(g_{2n} o gamma_{2n}, g_{2n+1} o gamma_{2n+1}).
inline ExampleReport example1_report(int n_max, double tol = 1e-9) {
  if (n_max < 2) throw domain_error("example1_report: n_max must be >= 2");
  ExampleReport rep;
  rep.which = "example1";
  rep.columns = {"n",           "rho_inf_gn_g",  "rho1_gamma_n_gamma",
                 "comp_to_limit", "comp_to_one", "inter_subsequence"};
  const ExampleQuadruple base = example1(2);
  const PiecewisePath comp_limit = compose(base.g, base.gamma);  // 1_{{1}}
  const PiecewisePath one = PiecewisePath::constant(1.0, 1.0);
  auto composed = [&](int m) {
    const ExampleQuadruple q = example1(m);
    return compose(q.g_n, q.gamma_n);
  };
  for (int n = 2; n <= n_max; ++n) {
    const ExampleQuadruple q = example1(n);
    const PiecewisePath comp_n = compose(q.g_n, q.gamma_n);
    std::vector<double> row;
    row.push_back(n);
    row.push_back(rho_infinity(q.g_n, q.g, tol / 2.0));
    row.push_back(skorokhod_distance(q.gamma_n.path(), q.gamma.path(), 1.0, tol).value);
    row.push_back(skorokhod_distance(comp_n, comp_limit, 1.0, tol).value);
    row.push_back(skorokhod_distance(comp_n, one, 1.0, tol).value);
    row.push_back(skorokhod_distance(composed(2 * n), composed(2 * n + 1), 1.0, tol).value);
    rep.rows.push_back(std::move(row));
  }
  rep.notes.push_back(
      "time changes are strictly increasing and continuous but their endpoint values "
      "gamma_n(1) differ, so the shared-endpoint premise of the composition-continuity "
      "lemma fails");
  rep.notes.push_back(
      "the composed sequence stays at distance 1 from g o gamma for every n "
      "(and from the constant-1 candidate), so g_n o gamma_n does not converge to g o gamma");
  rep.notes.push_back(
      "inter-subsequence distance equals 1 only for n <= 2: for n >= 3, "
      "gamma_{2n+1}(1) < 1/2 - 2^{-(2n+1)}, so both compositions are identically 0");
  return rep;
}

/// Example 2 distance table for n = 1..n_max: discontinuous limit outer, so
/// composition continuity fails even though gamma_n -> gamma uniformly.
inline ExampleReport example2_report(int n_max, double tol = 1e-9) {
  if (n_max < 1) throw domain_error("example2_report: n_max must be >= 1");
  ExampleReport rep;
  rep.which = "example2";
  rep.columns = {"n", "rho_inf_gn_g", "rho1_gamma_n_gamma", "comp_to_limit"};
  for (int n = 1; n <= n_max; ++n) {
    const ExampleQuadruple q = example2(n);
    const PiecewisePath comp_n = compose(q.g_n, q.gamma_n);
    const PiecewisePath comp_limit = compose(q.g, q.gamma);
    std::vector<double> row;
    row.push_back(n);
    row.push_back(rho_infinity(q.g_n, q.g, tol / 2.0));
    row.push_back(skorokhod_distance(q.gamma_n.path(), q.gamma.path(), 1.0, tol).value);
    row.push_back(skorokhod_distance(comp_n, comp_limit, 1.0, tol).value);
    rep.rows.push_back(std::move(row));
  }
  rep.notes.push_back(
      "g_n o gamma_n is identically 0 while g o gamma is identically 1; the composed "
      "distance stays at 1 although rho_inf(g_n, g) -> 0 and rho_1(gamma_n, gamma) -> 0");
  rep.notes.push_back(
      "the limit outer g is discontinuous at the accumulation point of the gamma_n, "
      "which is exactly the premise the composition-continuity lemma needs");
  return rep;
}

inline ExampleReport lemma_report(const std::string& which, std::uint64_t seed, double rate,
                                  int n_max, double tol = 1e-9) {
  ExampleReport rep;
  rep.which = which;
  rep.columns = {"n", "rho1_gamma_n_gamma", "rho1_composed"};
  for (int n = 1; n <= n_max; ++n) {
    const ExampleQuadruple q = which == "lemma1" ? lemma1_family(seed, rate, n)
                                                 : lemma2_family(seed, rate, n);
    const PiecewisePath comp_n = compose(q.g_n, q.gamma_n);
    const PiecewisePath comp = compose(q.g, q.gamma);
    std::vector<double> row;
    row.push_back(n);
    row.push_back(skorokhod_distance(q.gamma_n.path(), q.gamma.path(), 1.0, tol).value);
    row.push_back(skorokhod_distance(comp_n, comp, 1.0, tol).value);
    rep.rows.push_back(std::move(row));
  }
  rep.notes.push_back(which == "lemma1"
                          ? "strictly increasing continuous time changes with a shared "
                            "endpoint value: composition distances decay with the inputs"
                          : "continuous limit outer with monotone step time changes: "
                            "composition distances decay with the inputs");
  return rep;
}

}  // namespace cadlag
