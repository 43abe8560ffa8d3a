#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "cadlag/path.hpp"

namespace cadlag {

enum class TimeChangeClass { B, Pi };

inline bool is_nondecreasing(const PiecewisePath& p) {
  for (double s : p.slopes()) {
    if (s < 0.0) return false;
  }
  for (const Jump& j : p.jumps()) {
    if (j.size < 0.0) return false;
  }
  return true;
}

/// Non-decreasing, non-negative cadlag time change on [0, 1] (class B), or a
/// strictly increasing continuous one with a pinned endpoint value (class Pi).
class TimeChange {
 public:
  static TimeChange make_b(PiecewisePath path) {
    validate_common(path);
    return TimeChange(std::move(path), TimeChangeClass::B, 0.0);
  }

  static TimeChange make_pi(PiecewisePath path, double endpoint) {
    validate_common(path);
    if (!(endpoint >= 0.0)) throw validation_error("TimeChange: Pi endpoint must be >= 0");
    const double scale = std::max(1.0, std::abs(path.max_value()));
    if (path.has_jumps(kContinuitySlack * scale)) {
      throw validation_error("TimeChange: Pi requires a continuous path");
    }
    for (double s : path.slopes()) {
      if (!(s > 0.0)) throw validation_error("TimeChange: Pi requires strictly positive slopes");
    }
    if (std::abs(path.terminal() - endpoint) > kContinuitySlack * scale) {
      throw validation_error("TimeChange: Pi endpoint value not attained at horizon");
    }
    return TimeChange(std::move(path), TimeChangeClass::Pi, endpoint);
  }

  const PiecewisePath& path() const { return path_; }
  TimeChangeClass class_flag() const { return class_flag_; }
  double endpoint_value() const { return endpoint_; }
  double operator()(double t) const { return path_.eval(t); }
  double max_value() const { return path_.max_value(); }

  static TimeChange identity(double horizon = 1.0) {
    return make_pi(PiecewisePath::linear(0.0, 1.0, horizon), horizon);
  }

  /// t -> a * t on [0, 1]; class Pi when a > 0, class B when a = 0.
  static TimeChange linear(double a) {
    if (!(a >= 0.0)) throw validation_error("TimeChange::linear: a must be >= 0");
    PiecewisePath p = PiecewisePath::linear(0.0, a, 1.0);
    if (a > 0.0) return make_pi(std::move(p), a);
    return make_b(std::move(p));
  }

 private:
  TimeChange(PiecewisePath p, TimeChangeClass c, double endpoint)
      : path_(std::move(p)), class_flag_(c), endpoint_(endpoint) {}

  static void validate_common(const PiecewisePath& p) {
    if (!is_nondecreasing(p)) {
      throw validation_error("TimeChange: path must be non-decreasing");
    }
    if (p.eval(0.0) < 0.0) {
      throw validation_error("TimeChange: path must be non-negative");
    }
  }

  PiecewisePath path_;
  TimeChangeClass class_flag_;
  double endpoint_;
};

/// Element of Delta[0,k]: strictly increasing continuous piecewise-linear map
/// of [0,k] onto itself fixing both endpoints.
class Reparametrization {
 public:
  static Reparametrization identity(double k) {
    return Reparametrization(PiecewisePath::linear(0.0, 1.0, k));
  }

  /// Piecewise-linear interpolant through strictly increasing nodes. The first
  /// node must be (0,0) and the last (k,k). Interior start values are stored as
  /// the computed segment limits so the path is exactly continuous.
  static Reparametrization from_nodes(std::span<const double> times,
                                      std::span<const double> values) {
    if (times.size() != values.size() || times.size() < 2) {
      throw validation_error("Reparametrization: need matching node lists, >= 2 nodes");
    }
    const double k = times.back();
    if (times.front() != 0.0 || values.front() != 0.0 || values.back() != k) {
      throw validation_error("Reparametrization: nodes must run from (0,0) to (k,k)");
    }
    PathBuilder b(k);
    double v = 0.0;
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      if (!(times[i + 1] > t) || !(values[i + 1] > v)) {
        throw validation_error("Reparametrization: nodes must be strictly increasing");
      }
      const double slope = (values[i + 1] - v) / (times[i + 1] - t);
      b.segment(t, v, slope);
      v = v + slope * (times[i + 1] - t);  // same arithmetic as left_limit
      t = times[i + 1];
    }
    return Reparametrization(b.finish_at(k));
  }

  static Reparametrization from_path(PiecewisePath p) {
    validate(p);
    return Reparametrization(std::move(p));
  }

  const PiecewisePath& path() const { return path_; }
  double horizon() const { return path_.horizon(); }
  double operator()(double t) const { return path_.eval(t); }

  /// sup_{0<=t<=k} |lambda(t) - t|; attained at a node.
  double distortion() const {
    double d = 0.0;
    const auto bp = path_.breakpoints();
    for (std::size_t i = 0; i < path_.segment_count(); ++i) {
      d = std::max(d, std::abs(path_.values()[i] - bp[i]));
      const double end =
          path_.values()[i] + path_.slopes()[i] * (bp[i + 1] - bp[i]);
      d = std::max(d, std::abs(end - bp[i + 1]));
    }
    d = std::max(d, std::abs(path_.terminal() - path_.horizon()));
    return d;
  }

  /// Exact piecewise-linear inverse (swap coordinates of the node list).
  Reparametrization inverse() const {
    const auto bp = path_.breakpoints();
    std::vector<double> ts, vs;
    ts.reserve(bp.size());
    vs.reserve(bp.size());
    for (std::size_t i = 0; i < path_.segment_count(); ++i) {
      ts.push_back(path_.values()[i]);
      vs.push_back(bp[i]);
    }
    ts.push_back(path_.horizon());
    vs.push_back(path_.horizon());
    return from_nodes(ts, vs);
  }

 private:
  explicit Reparametrization(PiecewisePath p) : path_(std::move(p)) { validate(path_); }

  static void validate(const PiecewisePath& p) {
    const double k = p.horizon();
    if (p.has_jumps(kContinuitySlack * std::max(1.0, k))) {
      throw validation_error("Reparametrization: path must be continuous");
    }
    for (double s : p.slopes()) {
      if (!(s > 0.0)) throw validation_error("Reparametrization: slopes must be positive");
    }
    if (p.eval(0.0) != 0.0 || std::abs(p.terminal() - k) > kContinuitySlack * std::max(1.0, k)) {
      throw validation_error("Reparametrization: endpoints must be fixed");
    }
  }

  PiecewisePath path_;
};

}  // namespace cadlag
