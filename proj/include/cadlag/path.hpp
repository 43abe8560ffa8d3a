#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cadlag {

class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Breakpoints closer than this are collapsed when a path is normalized.
inline constexpr double kMinBreakpointGap = 1e-12;

// Representation noise allowed when validating continuity of derived paths
// (node interpolants, compositions, inverses). Exact zero-size jumps are
// still the only ones removed by canonicalization.
inline constexpr double kContinuitySlack = 1e-10;

struct Jump {
  double time = 0.0;
  double size = 0.0;  // eval(time) - left_limit(time)
};

/// A cadlag function on [0, horizon]: piecewise-linear segments on
/// [t_i, t_{i+1}) given by a start value and a slope, plus an explicit
/// value at the right endpoint. Jumps live at segment starts; the value
/// stored at t_i is the right-continuous value of the path at t_i.
class PiecewisePath {
 public:
  PiecewisePath() = default;

  double horizon() const { return horizon_; }
  double terminal() const { return terminal_; }
  std::size_t segment_count() const { return value_.size(); }

  // m+1 entries; first is 0, last equals horizon().
  std::span<const double> breakpoints() const { return time_; }
  std::span<const double> values() const { return value_; }
  std::span<const double> slopes() const { return slope_; }

  /// Right-continuous value at t; at t = horizon returns terminal().
  double eval(double t) const {
    if (!(t >= 0.0) || t > horizon_) {
      throw domain_error("eval: t outside [0, horizon]");
    }
    if (t == horizon_) return terminal_;
    const std::size_t i = segment_index(t);
    return value_[i] + slope_[i] * (t - time_[i]);
  }
  double operator()(double t) const { return eval(t); }

  /// lim_{s -> t-} x(s), defined for t in (0, horizon].
  double left_limit(double t) const {
    if (!(t > 0.0) || t > horizon_) {
      throw domain_error("left_limit: t outside (0, horizon]");
    }
    // Segment with t_i < t <= t_{i+1}.
    const auto it = std::lower_bound(time_.begin(), time_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - time_.begin()) - 1;
    return value_[i] + slope_[i] * (t - time_[i]);
  }

  /// Slope of the segment governing the value at t (right segment).
  double slope_at(double t) const {
    if (!(t >= 0.0) || t > horizon_) {
      throw domain_error("slope_at: t outside [0, horizon]");
    }
    if (t == horizon_) return 0.0;
    return slope_[segment_index(t)];
  }

  /// All t with eval(t) != left_limit(t), with signed sizes. Sizes with
  /// |size| <= tol are dropped (tol = 0 keeps every exact discontinuity).
  std::vector<Jump> jumps(double tol = 0.0) const {
    std::vector<Jump> out;
    for (std::size_t i = 1; i < value_.size(); ++i) {
      const double limit = value_[i - 1] + slope_[i - 1] * (time_[i] - time_[i - 1]);
      const double size = value_[i] - limit;
      if (std::abs(size) > tol || (tol == 0.0 && size != 0.0)) {
        out.push_back({time_[i], size});
      }
    }
    const std::size_t m = value_.size();
    const double limit = value_[m - 1] + slope_[m - 1] * (horizon_ - time_[m - 1]);
    const double size = terminal_ - limit;
    if (std::abs(size) > tol || (tol == 0.0 && size != 0.0)) {
      out.push_back({horizon_, size});
    }
    return out;
  }

  bool has_jumps(double tol = 0.0) const { return !jumps(tol).empty(); }

  /// Pointwise-equal truncation to [0, k]; terminal becomes eval(k).
  PiecewisePath restrict_to(double k) const {
    if (!(k > 0.0) || k > horizon_) {
      throw domain_error("restrict_to: k outside (0, horizon]");
    }
    if (k == horizon_) return *this;
    PiecewisePath out;
    out.horizon_ = k;
    out.terminal_ = eval(k);
    const std::size_t n = segment_index(k) + 1;  // segments with t_i < k... includes the one containing k
    for (std::size_t i = 0; i < n; ++i) {
      if (time_[i] < k) {
        out.time_.push_back(time_[i]);
        out.value_.push_back(value_[i]);
        out.slope_.push_back(slope_[i]);
      }
    }
    out.time_.push_back(k);
    return out;
  }

  double max_value() const {
    double m = terminal_;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      const double end = value_[i] + slope_[i] * (time_[i + 1] - time_[i]);
      m = std::max({m, value_[i], end});
    }
    return m;
  }

  double min_value() const {
    double m = terminal_;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      const double end = value_[i] + slope_[i] * (time_[i + 1] - time_[i]);
      m = std::min({m, value_[i], end});
    }
    return m;
  }

  /// Integral over [0, horizon] (jumps carry no mass).
  double integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      const double dt = time_[i + 1] - time_[i];
      acc += value_[i] * dt + 0.5 * slope_[i] * dt * dt;
    }
    return acc;
  }

  bool operator==(const PiecewisePath& o) const {
    return horizon_ == o.horizon_ && terminal_ == o.terminal_ && time_ == o.time_ &&
           value_ == o.value_ && slope_ == o.slope_;
  }
  bool operator!=(const PiecewisePath& o) const { return !(*this == o); }

  static PiecewisePath constant(double value, double horizon);
  static PiecewisePath linear(double value0, double slope, double horizon);
  /// 1_{[jump_time, horizon]} truncated to [0, horizon]; jump_time = 0 gives
  /// the constant 1 and jump_time = horizon gives 0 with terminal 1.
  static PiecewisePath indicator_step(double jump_time, double horizon);

  friend class PathBuilder;
  friend PiecewisePath canonicalize(const PiecewisePath&);

 private:
  std::size_t segment_index(double t) const {
    // Largest i with time_[i] <= t < time_[i+1]; caller guarantees t < horizon.
    const auto it = std::upper_bound(time_.begin(), time_.end(), t);
    return static_cast<std::size_t>(it - time_.begin()) - 1;
  }

  double horizon_ = 1.0;
  double terminal_ = 0.0;
  std::vector<double> time_{0.0, 1.0};
  std::vector<double> value_{0.0};
  std::vector<double> slope_{0.0};
};

/// Accumulates segments left to right, then normalizes. The first segment
/// must start at 0; segments starting within kMinBreakpointGap of the
/// previous start replace it (right-continuity: the later write wins).
class PathBuilder {
 public:
  explicit PathBuilder(double horizon) : horizon_(horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      throw validation_error("PathBuilder: horizon must be positive and finite");
    }
  }

  PathBuilder& segment(double start, double value, double slope = 0.0) {
    if (!std::isfinite(start) || !std::isfinite(value) || !std::isfinite(slope)) {
      throw validation_error("PathBuilder: non-finite segment");
    }
    if (time_.empty()) {
      if (start != 0.0) throw validation_error("PathBuilder: first segment must start at 0");
      time_.push_back(0.0);
      value_.push_back(value);
      slope_.push_back(slope);
      return *this;
    }
    if (start < time_.back()) {
      throw validation_error("PathBuilder: breakpoints must be non-decreasing");
    }
    if (start - time_.back() < kMinBreakpointGap) {
      value_.back() = value;  // collapse onto the existing breakpoint
      slope_.back() = slope;
      return *this;
    }
    if (start >= horizon_) return *this;  // outside the domain, nothing to record
    time_.push_back(start);
    value_.push_back(value);
    slope_.push_back(slope);
    return *this;
  }

  /// Terminal value defaults to the left limit of the last segment.
  PiecewisePath finish() {
    require_segments();
    const double t0 = time_.back();
    return finish_at(value_.back() + slope_.back() * (horizon_ - t0));
  }

  PiecewisePath finish_at(double terminal) {
    require_segments();
    if (!std::isfinite(terminal)) throw validation_error("PathBuilder: non-finite terminal");
    if (horizon_ - time_.back() < kMinBreakpointGap && time_.size() > 1) {
      time_.pop_back();
      value_.pop_back();
      slope_.pop_back();
    }
    PiecewisePath p;
    p.horizon_ = horizon_;
    p.terminal_ = terminal;
    p.time_ = std::move(time_);
    p.time_.push_back(horizon_);
    p.value_ = std::move(value_);
    p.slope_ = std::move(slope_);
    return canonicalize(p);
  }

 private:
  void require_segments() const {
    if (time_.empty()) throw validation_error("PathBuilder: no segments");
  }

  double horizon_;
  std::vector<double> time_, value_, slope_;
};

/// Merges collinear adjacent segments and removes zero-size jumps.
/// Idempotent; pointwise values are unchanged. Two paths with identical
/// pointwise values have the same canonical form.
inline PiecewisePath canonicalize(const PiecewisePath& p) {
  PiecewisePath out;
  out.horizon_ = p.horizon_;
  out.terminal_ = p.terminal_;
  out.time_.clear();
  out.value_.clear();
  out.slope_.clear();
  const std::size_t m = p.value_.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!out.time_.empty()) {
      const double limit =
          out.value_.back() + out.slope_.back() * (p.time_[i] - out.time_.back());
      if (limit == p.value_[i] && out.slope_.back() == p.slope_[i]) {
        continue;  // collinear continuation (also removes zero-size jumps)
      }
    }
    out.time_.push_back(p.time_[i]);
    out.value_.push_back(p.value_[i]);
    out.slope_.push_back(p.slope_[i]);
  }
  out.time_.push_back(p.horizon_);
  return out;
}

/// Continuous piecewise-linear interpolant through the given nodes. Interior
/// start values are stored as the accumulated segment limits, so the result
/// has exactly zero jumps; node values may drift from the requested ones by
/// a few ulps.
inline PiecewisePath piecewise_linear_interpolant(std::span<const double> times,
                                                  std::span<const double> values) {
  if (times.size() != values.size() || times.size() < 2 || times.front() != 0.0) {
    throw validation_error("interpolant: need node lists starting at t = 0");
  }
  PathBuilder b(times.back());
  double v = values.front();
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double dt = times[i + 1] - times[i];
    if (!(dt > 0.0)) throw validation_error("interpolant: times must be strictly increasing");
    const double slope = (values[i + 1] - v) / dt;
    b.segment(times[i], v, slope);
    v = v + slope * dt;  // same arithmetic as left_limit
  }
  return b.finish_at(v);
}

inline PiecewisePath PiecewisePath::constant(double value, double horizon) {
  return PathBuilder(horizon).segment(0.0, value).finish();
}

inline PiecewisePath PiecewisePath::linear(double value0, double slope, double horizon) {
  return PathBuilder(horizon).segment(0.0, value0, slope).finish();
}

inline PiecewisePath PiecewisePath::indicator_step(double jump_time, double horizon) {
  if (!(jump_time >= 0.0) || jump_time > horizon) {
    throw validation_error("indicator_step: jump_time outside [0, horizon]");
  }
  PathBuilder b(horizon);
  if (jump_time == 0.0) {
    b.segment(0.0, 1.0);
    return b.finish();
  }
  b.segment(0.0, 0.0);
  if (jump_time < horizon) {
    b.segment(jump_time, 1.0);
    return b.finish();
  }
  return b.finish_at(1.0);
}

}  // namespace cadlag
