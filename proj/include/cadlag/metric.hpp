#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cadlag/compose.hpp"
#include "cadlag/path.hpp"
#include "cadlag/time_change.hpp"

namespace cadlag {

/// Certified Skorokhod distance: the true value lies in
/// [value - certified_gap, value]; the witness, when present, re-evaluates to
/// sups at most value + certified_gap.
struct DistanceResult {
  double value = 0.0;
  double certified_gap = 0.0;
  std::optional<Reparametrization> witness;
};

struct DecisionResult {
  bool feasible = false;
  std::optional<Reparametrization> witness;
};

/// Exact sup over [0, k] of |x - y|, computed segmentwise on the merged
/// breakpoint refinement (right values at piece starts, left limits at piece
/// ends, terminals at k).
inline double sup_distance(const PiecewisePath& x, const PiecewisePath& y, double k) {
  if (x.horizon() < k || y.horizon() < k) {
    throw domain_error("sup_distance: path horizon below k");
  }
  const PiecewisePath a = x.horizon() == k ? x : x.restrict_to(k);
  const PiecewisePath b = y.horizon() == k ? y : y.restrict_to(k);
  std::vector<double> events(a.breakpoints().begin(), a.breakpoints().end());
  events.insert(events.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  double d = std::abs(a.terminal() - b.terminal());
  for (std::size_t e = 0; e + 1 < events.size(); ++e) {
    const double t0 = events[e];
    const double t1 = events[e + 1];
    const double va0 = a.eval(t0), vb0 = b.eval(t0);
    const double va1 = va0 + a.slope_at(t0) * (t1 - t0);
    const double vb1 = vb0 + b.slope_at(t0) * (t1 - t0);
    d = std::max(d, std::abs(va0 - vb0));
    d = std::max(d, std::abs(va1 - vb1));
  }
  return d;
}

namespace detail {

// Closed linear extensions of a path's segments on [0, k].
struct SegView {
  std::vector<double> t;  // P+1 event times
  std::vector<double> v;  // P start values
  std::vector<double> s;  // P slopes
  double terminal = 0.0;

  std::size_t size() const { return v.size(); }
  double at(std::size_t i, double x) const { return v[i] + s[i] * (x - t[i]); }
};

inline SegView make_view(const PiecewisePath& p, double k) {
  const PiecewisePath r = p.horizon() == k ? p : p.restrict_to(k);
  SegView out;
  out.t.assign(r.breakpoints().begin(), r.breakpoints().end());
  out.v.assign(r.values().begin(), r.values().end());
  out.s.assign(r.slopes().begin(), r.slopes().end());
  out.terminal = r.terminal();
  return out;
}

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return !(lo <= hi); }
};

// {u in [ulo, uhi] : |A - (w + d*(u - u0))| <= eps}
inline Interval axis_band(double A, double w, double d, double u0, double ulo, double uhi,
                          double eps) {
  if (d == 0.0) {
    if (std::abs(A - w) <= eps) return {ulo, uhi};
    return {1.0, 0.0};
  }
  double lo = u0 + (A - eps - w) / d;
  double hi = u0 + (A + eps - w) / d;
  if (d < 0.0) std::swap(lo, hi);
  return {std::max(lo, ulo), std::min(hi, uhi)};
}

// Free-space reachability for the decision problem "exists a monotone
// continuous curve from (0,0) to (k,k) with |x(t)-y(s)| <= eps and
// |t-s| <= eps along it". Cells are products of closed segment intervals;
// each cell's free set is convex, so reachability propagates by interval
// domination over cell edges, with explicit passage through grid vertices
// (a monotone curve may cross a vertex diagonally between cells that share
// only that point).
class FreeSpace {
 public:
  FreeSpace(const SegView& x, const SegView& y, double eps) : x_(x), y_(y), eps_(eps) {}

  // s-interval of the vertical edge t = T within cell (i, j)'s free set.
  Interval vertical_edge(std::size_t i, std::size_t j, double T) const {
    Interval corridor{std::max(T - eps_, y_.t[j]), std::min(T + eps_, y_.t[j + 1])};
    if (corridor.empty()) return corridor;
    const double A = x_.at(i, T);
    Interval value = axis_band(A, y_.v[j], y_.s[j], y_.t[j], corridor.lo, corridor.hi, eps_);
    return value;
  }

  // t-interval of the horizontal edge s = S within cell (i, j)'s free set.
  Interval horizontal_edge(std::size_t i, std::size_t j, double S) const {
    Interval corridor{std::max(S - eps_, x_.t[i]), std::min(S + eps_, x_.t[i + 1])};
    if (corridor.empty()) return corridor;
    const double B = y_.at(j, S);
    Interval value = axis_band(B, x_.v[i], x_.s[i], x_.t[i], corridor.lo, corridor.hi, eps_);
    return value;
  }

  bool point_free(std::size_t i, std::size_t j, double t, double s) const {
    return std::abs(t - s) <= eps_ && std::abs(x_.at(i, t) - y_.at(j, s)) <= eps_;
  }

  bool origin_free() const { return point_free(0, 0, 0.0, 0.0); }

  const SegView& x_;
  const SegView& y_;
  double eps_;
};

constexpr double kNone = std::numeric_limits<double>::infinity();

// Decision without witness bookkeeping; O(Q) memory.
inline bool reach_decide(const SegView& X, const SegView& Y, double eps) {
  if (std::abs(X.terminal - Y.terminal) > eps) return false;
  const FreeSpace fs(X, Y, eps);
  if (!fs.origin_free()) return false;
  const std::size_t P = X.size();
  const std::size_t Q = Y.size();
  std::vector<double> curL(Q, kNone), nextL(Q, kNone), curB(Q, kNone);
  curL[0] = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    std::fill(curB.begin(), curB.end(), kNone);
    // Bottom entries of row j=0 can only come from left transfers, already in curL.
    for (std::size_t j = 0; j < Q; ++j) {
      const bool hasL = curL[j] != kNone;
      const bool hasB = curB[j] != kNone;
      if (!hasL && !hasB) continue;
      const double Tr = X.t[i + 1];
      const double Su = Y.t[j + 1];
      Interval RR = fs.vertical_edge(i, j, Tr);
      if (!RR.empty() && !hasB) RR.lo = std::max(RR.lo, curL[j]);
      Interval RT = fs.horizontal_edge(i, j, Su);
      if (!RT.empty() && !hasL) RT.lo = std::max(RT.lo, curB[j]);
      const bool vertex_reached = (!RR.empty() && RR.hi >= Su) || (!RT.empty() && RT.hi >= Tr);
      if (i + 1 == P && j + 1 == Q) {
        if (vertex_reached) return true;
        continue;
      }
      if (i + 1 < P && !RR.empty()) {
        Interval FL = fs.vertical_edge(i + 1, j, Tr);
        FL.lo = std::max(FL.lo, RR.lo);
        FL.hi = std::min(FL.hi, RR.hi);
        if (!FL.empty()) nextL[j] = std::min(nextL[j], FL.lo);
      }
      if (j + 1 < Q && !RT.empty()) {
        Interval FB = fs.horizontal_edge(i, j + 1, Su);
        FB.lo = std::max(FB.lo, RT.lo);
        FB.hi = std::min(FB.hi, RT.hi);
        if (!FB.empty()) curB[j + 1] = std::min(curB[j + 1], FB.lo);
      }
      if (vertex_reached && i + 1 < P && j + 1 < Q && fs.point_free(i + 1, j + 1, Tr, Su)) {
        nextL[j + 1] = std::min(nextL[j + 1], Su);
      }
    }
    std::swap(curL, nextL);
    std::fill(nextL.begin(), nextL.end(), kNone);
  }
  return false;
}

enum class Prov : std::uint8_t { None, Origin, FromLeft, FromBelow, FromDiag };

// Full-matrix variant that can reconstruct a witness polyline.
inline bool reach_witness(const SegView& X, const SegView& Y, double eps,
                          std::vector<std::pair<double, double>>& polyline) {
  if (std::abs(X.terminal - Y.terminal) > eps) return false;
  const FreeSpace fs(X, Y, eps);
  if (!fs.origin_free()) return false;
  const std::size_t P = X.size();
  const std::size_t Q = Y.size();
  std::vector<double> leftS(P * Q, kNone), botT(P * Q, kNone);
  std::vector<Prov> leftP(P * Q, Prov::None), botP(P * Q, Prov::None);
  auto id = [Q](std::size_t i, std::size_t j) { return i * Q + j; };
  leftS[id(0, 0)] = 0.0;
  leftP[id(0, 0)] = Prov::Origin;
  bool feasible = false;
  for (std::size_t i = 0; i < P && !feasible; ++i) {
    for (std::size_t j = 0; j < Q; ++j) {
      const std::size_t c = id(i, j);
      const bool hasL = leftS[c] != kNone;
      const bool hasB = botT[c] != kNone;
      if (!hasL && !hasB) continue;
      const double Tr = X.t[i + 1];
      const double Su = Y.t[j + 1];
      Interval RR = fs.vertical_edge(i, j, Tr);
      if (!RR.empty() && !hasB) RR.lo = std::max(RR.lo, leftS[c]);
      Interval RT = fs.horizontal_edge(i, j, Su);
      if (!RT.empty() && !hasL) RT.lo = std::max(RT.lo, botT[c]);
      const bool vertex_reached = (!RR.empty() && RR.hi >= Su) || (!RT.empty() && RT.hi >= Tr);
      if (i + 1 == P && j + 1 == Q) {
        if (vertex_reached) {
          feasible = true;
          break;
        }
        continue;
      }
      if (i + 1 < P && !RR.empty()) {
        Interval FL = fs.vertical_edge(i + 1, j, Tr);
        FL.lo = std::max(FL.lo, RR.lo);
        FL.hi = std::min(FL.hi, RR.hi);
        if (!FL.empty() && FL.lo < leftS[id(i + 1, j)]) {
          leftS[id(i + 1, j)] = FL.lo;
          leftP[id(i + 1, j)] = Prov::FromLeft;
        }
      }
      if (j + 1 < Q && !RT.empty()) {
        Interval FB = fs.horizontal_edge(i, j + 1, Su);
        FB.lo = std::max(FB.lo, RT.lo);
        FB.hi = std::min(FB.hi, RT.hi);
        if (!FB.empty() && FB.lo < botT[id(i, j + 1)]) {
          botT[id(i, j + 1)] = FB.lo;
          botP[id(i, j + 1)] = Prov::FromBelow;
        }
      }
      if (vertex_reached && i + 1 < P && j + 1 < Q && fs.point_free(i + 1, j + 1, Tr, Su) &&
          Su < leftS[id(i + 1, j + 1)]) {
        leftS[id(i + 1, j + 1)] = Su;
        leftP[id(i + 1, j + 1)] = Prov::FromDiag;
      }
    }
  }
  if (!feasible) return false;

  // Backtrack from the top-right vertex, preferring the dominating entry
  // closest to the diagonal (deterministic; biases the witness toward small
  // |lambda(t) - t|).
  polyline.clear();
  std::size_t i = P - 1, j = Q - 1;
  double qt = X.t[P], qs = Y.t[Q];
  polyline.emplace_back(qt, qs);
  while (true) {
    const std::size_t c = id(i, j);
    const bool okL = leftS[c] != kNone && leftS[c] <= qs;
    const bool okB = botT[c] != kNone && botT[c] <= qt;
    if (!okL && !okB) {
      throw std::logic_error("skorokhod witness: no dominating entry during backtrack");
    }
    bool useL;
    if (okL && okB) {
      useL = std::abs(X.t[i] - leftS[c]) <= std::abs(botT[c] - Y.t[j]);
    } else if (okL) {
      useL = true;
    } else {
      useL = false;  // okB must hold by construction
    }
    Prov prov;
    if (useL) {
      qt = X.t[i];
      qs = leftS[c];
      prov = leftP[c];
    } else {
      qt = botT[c];
      qs = Y.t[j];
      prov = botP[c];
    }
    polyline.emplace_back(qt, qs);
    if (prov == Prov::Origin) break;
    if (prov == Prov::FromLeft) {
      --i;
    } else if (prov == Prov::FromBelow) {
      --j;
    } else {  // FromDiag
      --i;
      --j;
    }
  }
  std::reverse(polyline.begin(), polyline.end());
  return true;
}

// Turn a weakly monotone polyline into a strictly increasing reparametrization.
inline Reparametrization strictify(std::vector<std::pair<double, double>> nodes, double k) {
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const double delta = std::min(k * 1e-12, k / (4.0 * static_cast<double>(nodes.size() + 1)));
  std::vector<double> ts, vs;
  ts.reserve(nodes.size());
  vs.reserve(nodes.size());
  ts.push_back(0.0);
  vs.push_back(0.0);
  for (std::size_t idx = 1; idx + 1 < nodes.size(); ++idx) {
    const double remaining = static_cast<double>(nodes.size() - 1 - idx);
    double t = std::min(std::max(nodes[idx].first, ts.back() + delta), k - remaining * delta);
    double v = std::min(std::max(nodes[idx].second, vs.back() + delta), k - remaining * delta);
    if (!(t > ts.back()) || !(v > vs.back())) continue;
    ts.push_back(t);
    vs.push_back(v);
  }
  ts.push_back(k);
  vs.push_back(k);
  return Reparametrization::from_nodes(ts, vs);
}

inline std::vector<double> candidate_epsilons(const SegView& X, const SegView& Y, double sup) {
  std::vector<double> out{0.0, sup};
  const std::size_t P = X.size();
  const std::size_t Q = Y.size();
  const bool full = P * Q <= 250000;
  std::vector<double> xt, yt;
  if (full) {
    xt.assign(X.t.begin() + 1, X.t.end());
    yt.assign(Y.t.begin() + 1, Y.t.end());
  } else {
    // Large inputs: restrict time candidates to jump times.
    for (std::size_t i = 1; i < P; ++i) {
      if (X.at(i - 1, X.t[i]) != X.v[i]) xt.push_back(X.t[i]);
    }
    for (std::size_t j = 1; j < Q; ++j) {
      if (Y.at(j - 1, Y.t[j]) != Y.v[j]) yt.push_back(Y.t[j]);
    }
  }
  for (double a : xt) {
    for (double b : yt) {
      const double d = std::abs(a - b);
      if (d <= sup) out.push_back(d);
    }
  }
  std::vector<double> xv, yv;
  auto collect = [](const SegView& V, std::vector<double>& dst) {
    for (std::size_t i = 0; i < V.size(); ++i) {
      dst.push_back(V.v[i]);
      dst.push_back(V.at(i, V.t[i + 1]));
    }
    dst.push_back(V.terminal);
  };
  collect(X, xv);
  collect(Y, yv);
  if (xv.size() * yv.size() <= 1000000) {
    for (double a : xv) {
      for (double b : yv) {
        const double d = std::abs(a - b);
        if (d <= sup) out.push_back(d);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Closed decision "rho_k(x, y) <= eps?", with an optional witness in
/// Delta[0,k] achieving sups within representation noise of eps.
inline DecisionResult skorokhod_decision(const PiecewisePath& x, const PiecewisePath& y, double k,
                                         double eps, bool want_witness = true) {
  if (!(eps > 0.0)) throw domain_error("skorokhod_decision: eps must be positive");
  if (x.horizon() < k || y.horizon() < k) {
    throw domain_error("skorokhod_decision: path horizon below k");
  }
  const detail::SegView X = detail::make_view(x, k);
  const detail::SegView Y = detail::make_view(y, k);
  DecisionResult out;
  if (want_witness && X.size() * Y.size() <= (std::size_t{1} << 24)) {
    std::vector<std::pair<double, double>> poly;
    out.feasible = detail::reach_witness(X, Y, eps, poly);
    if (out.feasible) out.witness = detail::strictify(std::move(poly), k);
  } else {
    out.feasible = detail::reach_decide(X, Y, eps);
  }
  return out;
}

/// Certified computation of rho_k(x, y): candidate critical epsilons
/// (breakpoint-time differences, pairwise value differences, 0, the sup
/// distance) bracket the infimum; monotone bisection refines the bracket to
/// within tol. The reported value is the feasible upper end of the bracket.
inline DistanceResult skorokhod_distance(const PiecewisePath& x, const PiecewisePath& y, double k,
                                         double tol = 1e-9) {
  if (!(tol > 0.0)) throw domain_error("skorokhod_distance: tol must be positive");
  if (x.horizon() < k || y.horizon() < k) {
    throw domain_error("skorokhod_distance: path horizon below k");
  }
  const PiecewisePath cx = canonicalize(x.horizon() == k ? x : x.restrict_to(k));
  const PiecewisePath cy = canonicalize(y.horizon() == k ? y : y.restrict_to(k));
  if (cx == cy) {
    return {0.0, 0.0, Reparametrization::identity(k)};
  }
  const double sup = sup_distance(cx, cy, k);
  const detail::SegView X = detail::make_view(cx, k);
  const detail::SegView Y = detail::make_view(cy, k);
  auto feasible = [&](double e) { return e > 0.0 && detail::reach_decide(X, Y, e); };
  std::vector<double> cands = detail::candidate_epsilons(X, Y, sup);
  // The identity curve is feasible at eps = sup, so the top candidate decides
  // true; a few ulps of slack cover boundary rounding in the edge solves.
  for (int guard = 0; !feasible(cands.back()); ++guard) {
    if (guard > 128) {
      throw std::logic_error("skorokhod_distance: sup-distance level unexpectedly infeasible");
    }
    cands.back() = std::nextafter(cands.back(), std::numeric_limits<double>::infinity());
  }
  // cands[0] == 0 is infeasible here (equal canonical forms returned above),
  // so binary search for the first candidate at which the decision flips.
  std::size_t lo_i = 0, hi_i = cands.size() - 1;
  while (hi_i - lo_i > 1) {
    const std::size_t mid = (lo_i + hi_i) / 2;
    if (feasible(cands[mid])) {
      hi_i = mid;
    } else {
      lo_i = mid;
    }
  }
  double lo = cands[lo_i];
  double hi = cands[hi_i];
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  DistanceResult res;
  res.value = hi;
  res.certified_gap = hi - lo;
  std::vector<std::pair<double, double>> poly;
  if (X.size() * Y.size() <= (std::size_t{1} << 24) && detail::reach_witness(X, Y, hi, poly)) {
    Reparametrization w = detail::strictify(std::move(poly), k);
    const double vsup = sup_distance(cx, apply_reparam(cy, w), k);
    const double csup = w.distortion();
    res.certified_gap = std::max(res.certified_gap, std::max(vsup, csup) - res.value);
    res.witness = std::move(w);
  }
  return res;
}

/// rho_infty(x, y) = sum_k 2^-k rho_k/(1+rho_k), truncated at
/// K(tol) = ceil(log2(1/tol)) + 1 with each rho_k computed to tol/K; the
/// result is within 2*tol of the full series.
inline double rho_infinity(const PiecewisePath& x, const PiecewisePath& y, double tol = 1e-9) {
  if (!(tol > 0.0)) throw domain_error("rho_infinity: tol must be positive");
  const int K = tol >= 1.0 ? 1 : static_cast<int>(std::ceil(std::log2(1.0 / tol))) + 1;
  const double needed = static_cast<double>(K);
  if (x.horizon() < needed || y.horizon() < needed) {
    throw domain_error("rho_infinity: horizons must be at least " + std::to_string(K) +
                       " for this tolerance");
  }
  const double tol_k = tol / static_cast<double>(K);
  double acc = 0.0;
  double w = 1.0;
  for (int k = 1; k <= K; ++k) {
    w *= 0.5;
    const double q = skorokhod_distance(x, y, static_cast<double>(k), tol_k).value;
    acc += w * q / (1.0 + q);
  }
  return acc;
}

/// rho_E((x1, y1), (x2, y2)) = rho_infty(x1, x2) + rho_1(y1, y2).
inline double rho_E(const PiecewisePath& x1, const TimeChange& y1, const PiecewisePath& x2,
                    const TimeChange& y2, double tol = 1e-9) {
  if (y1.path().horizon() != 1.0 || y2.path().horizon() != 1.0) {
    throw domain_error("rho_E: time-change components must live on [0, 1]");
  }
  return rho_infinity(x1, x2, tol) + skorokhod_distance(y1.path(), y2.path(), 1.0, tol).value;
}

}  // namespace cadlag
