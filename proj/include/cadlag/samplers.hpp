#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cadlag/compose.hpp"
#include "cadlag/path.hpp"
#include "cadlag/rng.hpp"
#include "cadlag/time_change.hpp"

namespace cadlag {

/// Claim-size law for a portfolio of n contracts: mean 0, variance 1/n per
/// summand, so the n-fold sums satisfy the CLT normalization.
struct JumpDistribution {
  enum class Family { Rademacher, Uniform, Normal };
  Family family = Family::Rademacher;
  long n = 1;

  double draw(RandomStream& rs) const {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    switch (family) {
      case Family::Rademacher:
        return rs.next_sign() * scale;
      case Family::Uniform:
        return rs.next_uniform(-1.7320508075688772935, 1.7320508075688772935) * scale;
      case Family::Normal:
        return rs.next_normal() * scale;
    }
    return 0.0;
  }

  static JumpDistribution rademacher(long n) { return {Family::Rademacher, n}; }
  static JumpDistribution uniform(long n) { return {Family::Uniform, n}; }
  static JumpDistribution normal(long n) { return {Family::Normal, n}; }
};

namespace detail {

struct PoissonDesc {
  double rate = 1.0;
};
struct CompoundPoissonDesc {
  long n = 1;
  JumpDistribution jd;
};
struct DonskerDesc {
  long steps_per_unit = 1 << 14;
};
struct IdentityDesc {};
struct LinearTcDesc {
  double a = 1.0;
};
struct IntegratedStepDesc {
  int pieces = 4;
  double endpoint = 1.0;
};
struct JumpStepDesc {
  double rate = 4.0;
  double mean_jump = 0.25;
};
struct ScaledPoissonDesc {
  double drift = 1.0;
  long n = 1;
  bool normalized = true;
};
struct SubstituteDesc;

using SamplerDesc = std::variant<PoissonDesc, CompoundPoissonDesc, DonskerDesc, IdentityDesc,
                                 LinearTcDesc, IntegratedStepDesc, JumpStepDesc, ScaledPoissonDesc,
                                 std::shared_ptr<SubstituteDesc>>;

}  // namespace detail

/// An immutable process descriptor with a pure, seeded sample() map.
/// Identical seeds give bitwise-identical paths; composed samplers split the
/// seed stream into independent inner/outer roles.
class ProcessSampler {
 public:
  static ProcessSampler poisson(double rate, double horizon = 1.0) {
    if (!(rate > 0.0)) throw validation_error("poisson: rate must be positive");
    return ProcessSampler(detail::PoissonDesc{rate}, horizon, "poisson");
  }

  static ProcessSampler compound_poisson(long n, JumpDistribution jd, double horizon = 1.0) {
    if (n < 1) throw validation_error("compound_poisson: n must be >= 1");
    jd.n = n;
    return ProcessSampler(detail::CompoundPoissonDesc{n, jd}, horizon, "compound_poisson");
  }

  static ProcessSampler donsker_wiener(long steps_per_unit = 1 << 14, double horizon = 1.0) {
    if (steps_per_unit < 1) throw validation_error("donsker_wiener: steps must be >= 1");
    return ProcessSampler(detail::DonskerDesc{steps_per_unit}, horizon, "donsker_wiener");
  }

  /// Deterministic path t -> t (an identity outer process).
  static ProcessSampler identity_process(double horizon = 1.0) {
    return ProcessSampler(detail::IdentityDesc{}, horizon, "identity");
  }

  /// Deterministic time change t -> a t on [0, 1].
  static ProcessSampler time_change_linear(double a) {
    if (!(a >= 0.0)) throw validation_error("time_change_linear: a must be >= 0");
    return ProcessSampler(detail::LinearTcDesc{a}, 1.0, "time_change_linear");
  }

  /// Integral of a random positive step intensity, normalized so that
  /// Lambda(1) = endpoint; strictly increasing and continuous (class Pi).
  static ProcessSampler time_change_integrated_step(int pieces, double endpoint) {
    if (pieces < 1 || !(endpoint > 0.0)) {
      throw validation_error("time_change_integrated_step: bad parameters");
    }
    return ProcessSampler(detail::IntegratedStepDesc{pieces, endpoint}, 1.0,
                          "time_change_integrated_step");
  }

  /// Pure-jump non-decreasing step process started at 0 (class B).
  static ProcessSampler time_change_jump_step(double rate, double mean_jump) {
    if (!(rate > 0.0) || !(mean_jump > 0.0)) {
      throw validation_error("time_change_jump_step: bad parameters");
    }
    return ProcessSampler(detail::JumpStepDesc{rate, mean_jump}, 1.0, "time_change_jump_step");
  }

  /// Lambda_n(t) = pi(n a t) (divided by n when normalized); class B, converges
  /// to the deterministic a t as n grows.
  static ProcessSampler time_change_scaled_poisson(double drift, long n, bool normalized = true) {
    if (!(drift > 0.0) || n < 1) {
      throw validation_error("time_change_scaled_poisson: bad parameters");
    }
    return ProcessSampler(detail::ScaledPoissonDesc{drift, n, normalized}, 1.0,
                          "time_change_scaled_poisson");
  }

  /// X(t) = X'(Lambda(t)) with X' drawn from `outer` on an adaptive horizon
  /// covering Lambda's range, and Lambda drawn from `inner`; the two roles use
  /// split seed streams, so they are independent by construction.
  static ProcessSampler substitute(ProcessSampler outer, ProcessSampler inner);

  double horizon() const { return horizon_; }
  const std::string& kind() const { return kind_; }

  bool yields_time_change() const {
    return std::holds_alternative<detail::LinearTcDesc>(desc_) ||
           std::holds_alternative<detail::IntegratedStepDesc>(desc_) ||
           std::holds_alternative<detail::JumpStepDesc>(desc_) ||
           std::holds_alternative<detail::ScaledPoissonDesc>(desc_) ||
           std::holds_alternative<detail::IdentityDesc>(desc_);
  }

  PiecewisePath sample(std::uint64_t seed) const { return sample_stream(RandomStream(seed)); }

  PiecewisePath sample_stream(RandomStream rs) const { return sample_on(rs, horizon_); }

  PiecewisePath sample_on(RandomStream rs, double horizon) const;

  TimeChange sample_time_change(RandomStream rs) const;

 private:
  ProcessSampler(detail::SamplerDesc desc, double horizon, std::string kind)
      : desc_(std::move(desc)), horizon_(horizon), kind_(std::move(kind)) {
    if (!(horizon > 0.0)) throw validation_error("ProcessSampler: horizon must be positive");
  }

  detail::SamplerDesc desc_;
  double horizon_ = 1.0;
  std::string kind_;
};

namespace detail {
struct SubstituteDesc {
  ProcessSampler outer;
  ProcessSampler inner;
};
}  // namespace detail

inline ProcessSampler ProcessSampler::substitute(ProcessSampler outer, ProcessSampler inner) {
  if (!inner.yields_time_change()) {
    throw validation_error("substitute: inner sampler must produce time changes");
  }
  auto desc = std::make_shared<detail::SubstituteDesc>(
      detail::SubstituteDesc{std::move(outer), std::move(inner)});
  return ProcessSampler(desc, 1.0, "substitute");
}

inline PiecewisePath ProcessSampler::sample_on(RandomStream rs, double horizon) const {
  using namespace detail;
  if (std::holds_alternative<PoissonDesc>(desc_)) {
    const auto& d = std::get<PoissonDesc>(desc_);
    PathBuilder b(horizon);
    b.segment(0.0, 0.0);
    double t = rs.next_exponential(d.rate);
    double count = 0.0;
    while (t < horizon) {
      count += 1.0;
      b.segment(t, count);
      t += rs.next_exponential(d.rate);
    }
    return b.finish();
  }
  if (std::holds_alternative<CompoundPoissonDesc>(desc_)) {
    const auto& d = std::get<CompoundPoissonDesc>(desc_);
    const double rate = static_cast<double>(d.n);
    PathBuilder b(horizon);
    b.segment(0.0, 0.0);
    double t = rs.next_exponential(rate);
    double acc = 0.0;
    while (t < horizon) {
      acc += d.jd.draw(rs);
      b.segment(t, acc);
      t += rs.next_exponential(rate);
    }
    return b.finish();
  }
  if (std::holds_alternative<DonskerDesc>(desc_)) {
    const auto& d = std::get<DonskerDesc>(desc_);
    const long steps = std::max<long>(
        1, static_cast<long>(std::ceil(static_cast<double>(d.steps_per_unit) * horizon)));
    const double h = horizon / static_cast<double>(steps);
    const double root_h = std::sqrt(h);
    std::vector<double> times(static_cast<std::size_t>(steps) + 1);
    std::vector<double> values(static_cast<std::size_t>(steps) + 1);
    double v = 0.0;
    times[0] = 0.0;
    values[0] = 0.0;
    for (long i = 1; i <= steps; ++i) {
      v += rs.next_sign() * root_h;
      times[static_cast<std::size_t>(i)] = (i == steps) ? horizon : h * static_cast<double>(i);
      values[static_cast<std::size_t>(i)] = v;
    }
    return piecewise_linear_interpolant(times, values);
  }
  if (std::holds_alternative<IdentityDesc>(desc_)) {
    return PiecewisePath::linear(0.0, 1.0, horizon);
  }
  if (std::holds_alternative<std::shared_ptr<SubstituteDesc>>(desc_)) {
    const auto& d = *std::get<std::shared_ptr<SubstituteDesc>>(desc_);
    RandomStream inner_rs = rs.split(kRoleInner);
    RandomStream outer_rs = rs.split(kRoleOuter);
    const TimeChange tc = d.inner.sample_time_change(inner_rs);
    const double m = tc.max_value();
    const PiecewisePath outer_path = d.outer.sample_on(outer_rs, m > 0.0 ? m : 1.0);
    return compose(outer_path, tc);
  }
  // Time-change families sample on [0, 1].
  return sample_time_change(rs).path();
}

inline TimeChange ProcessSampler::sample_time_change(RandomStream rs) const {
  using namespace detail;
  if (std::holds_alternative<LinearTcDesc>(desc_)) {
    return TimeChange::linear(std::get<LinearTcDesc>(desc_).a);
  }
  if (std::holds_alternative<IdentityDesc>(desc_)) {
    return TimeChange::identity(1.0);
  }
  if (std::holds_alternative<IntegratedStepDesc>(desc_)) {
    const auto& d = std::get<IntegratedStepDesc>(desc_);
    const std::size_t pieces = static_cast<std::size_t>(d.pieces);
    std::vector<double> level(pieces);
    double raw_end = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
      level[i] = rs.next_uniform(0.2, 1.8);
      raw_end += level[i] / static_cast<double>(pieces);
    }
    const double scale = d.endpoint / raw_end;
    std::vector<double> times(pieces + 1), values(pieces + 1);
    double v = 0.0;
    times[0] = 0.0;
    values[0] = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
      times[i + 1] = (i + 1 == pieces) ? 1.0
                                       : static_cast<double>(i + 1) / static_cast<double>(pieces);
      v += scale * level[i] / static_cast<double>(pieces);
      values[i + 1] = (i + 1 == pieces) ? d.endpoint : v;
    }
    PiecewisePath p = piecewise_linear_interpolant(times, values);
    // Pin the endpoint exactly.
    PathBuilder b(1.0);
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
      b.segment(p.breakpoints()[i], p.values()[i], p.slopes()[i]);
    }
    return TimeChange::make_pi(b.finish_at(d.endpoint), d.endpoint);
  }
  if (std::holds_alternative<JumpStepDesc>(desc_)) {
    const auto& d = std::get<JumpStepDesc>(desc_);
    PathBuilder b(1.0);
    b.segment(0.0, 0.0);
    double t = rs.next_exponential(d.rate);
    double acc = 0.0;
    while (t < 1.0) {
      acc += rs.next_exponential(1.0 / d.mean_jump);
      b.segment(t, acc);
      t += rs.next_exponential(d.rate);
    }
    return TimeChange::make_b(b.finish());
  }
  if (std::holds_alternative<ScaledPoissonDesc>(desc_)) {
    const auto& d = std::get<ScaledPoissonDesc>(desc_);
    const double rate = d.drift * static_cast<double>(d.n);
    const double step = d.normalized ? 1.0 / static_cast<double>(d.n) : 1.0;
    PathBuilder b(1.0);
    b.segment(0.0, 0.0);
    double t = rs.next_exponential(rate);
    double acc = 0.0;
    while (t < 1.0) {
      acc += step;
      b.segment(t, acc);
      t += rs.next_exponential(rate);
    }
    return TimeChange::make_b(b.finish());
  }
  throw domain_error("sample_time_change: sampler does not produce time changes");
}

}  // namespace cadlag
