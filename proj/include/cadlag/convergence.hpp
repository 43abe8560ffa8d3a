#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cadlag/functionals.hpp"
#include "cadlag/samplers.hpp"
#include "cadlag/stats.hpp"

namespace cadlag {

/// One statistical probe: the law of f(X_n) against the reference law of
/// f(X), via a KS statistic (closed-form normal reference when available,
/// two-sample otherwise) plus a Wasserstein-1 diagnostic column.
struct ExperimentRow {
  long n = 0;
  std::string functional;
  double statistic = 0.0;
  double critical_99 = 0.0;
  bool pass = false;
  double wasserstein = 0.0;
  std::string reference;
};

struct ConvergenceReport {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<ExperimentRow> rows;

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,functional,statistic,critical_99,pass\n";
    for (const auto& r : rows) {
      os << r.n << ',' << r.functional << ',' << r.statistic << ',' << r.critical_99 << ','
         << (r.pass ? 1 : 0) << '\n';
    }
    return os.str();
  }

  /// statistic vs n, one series per functional; ready for log-log plotting.
  std::string plot_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,functional,statistic,wasserstein\n";
    for (const auto& r : rows) {
      os << r.n << ',' << r.functional << ',' << r.statistic << ',' << r.wasserstein << '\n';
    }
    return os.str();
  }
};

struct ExperimentConfig {
  std::vector<long> n_values;
  std::string outer_kind = "compound_poisson";  // compound_poisson | donsker | identity
  JumpDistribution::Family jump_family = JumpDistribution::Family::Rademacher;
  std::string inner_kind = "linear";  // linear | scaled_poisson | integrated_step | jump_step | identity
  double a = 1.0;
  int pieces = 4;
  double jump_rate = 4.0;
  double mean_jump = 0.25;
  std::vector<PathFunctional> functionals;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

namespace detail {

inline ProcessSampler build_outer(const ExperimentConfig& cfg, long n) {
  if (cfg.outer_kind == "compound_poisson") {
    return ProcessSampler::compound_poisson(n, JumpDistribution{cfg.jump_family, n});
  }
  if (cfg.outer_kind == "donsker") {
    return ProcessSampler::donsker_wiener(std::max<long>(n, 2));
  }
  if (cfg.outer_kind == "identity") {
    return ProcessSampler::identity_process();
  }
  throw validation_error("unknown outer process kind: " + cfg.outer_kind);
}

inline ProcessSampler build_inner(const ExperimentConfig& cfg, long n) {
  if (cfg.inner_kind == "linear") return ProcessSampler::time_change_linear(cfg.a);
  if (cfg.inner_kind == "identity") return ProcessSampler::time_change_linear(1.0);
  if (cfg.inner_kind == "scaled_poisson") {
    return ProcessSampler::time_change_scaled_poisson(cfg.a, n);
  }
  if (cfg.inner_kind == "integrated_step") {
    return ProcessSampler::time_change_integrated_step(cfg.pieces, cfg.a);
  }
  if (cfg.inner_kind == "jump_step") {
    return ProcessSampler::time_change_jump_step(cfg.jump_rate, cfg.mean_jump);
  }
  throw validation_error("unknown inner process kind: " + cfg.inner_kind);
}

// Closed-form N(0, a t) reference exists for value-type functionals when the
// inner limit is the deterministic a t and the outer limit is the Wiener
// process (compound-Poisson or Donsker outer).
inline std::optional<double> normal_reference_variance(const ExperimentConfig& cfg,
                                                       const PathFunctional& f) {
  const bool wiener_outer = cfg.outer_kind == "compound_poisson" || cfg.outer_kind == "donsker";
  const bool linear_inner = cfg.inner_kind == "linear" || cfg.inner_kind == "scaled_poisson";
  if (!wiener_outer || !linear_inner) return std::nullopt;
  switch (f.kind) {
    case PathFunctional::Kind::Terminal:
      return cfg.a;
    case PathFunctional::Kind::ValueAt:
      return f.t0 > 0.0 ? std::optional<double>(cfg.a * f.t0) : std::nullopt;
    case PathFunctional::Kind::Increment:
      return f.t1 > f.t0 ? std::optional<double>(cfg.a * (f.t1 - f.t0)) : std::nullopt;
    default:
      return std::nullopt;
  }
}

inline ProcessSampler build_limit(const ExperimentConfig& cfg) {
  // X = W'(Lambda(t)) realized by a fine Donsker interpolation.
  if (cfg.outer_kind == "identity") {
    return ProcessSampler::substitute(ProcessSampler::identity_process(),
                                      build_inner(cfg, 1));
  }
  return ProcessSampler::substitute(ProcessSampler::donsker_wiener(1 << 12),
                                    ProcessSampler::time_change_linear(cfg.a));
}

}  // namespace detail

/// Runs the weak-convergence probe: for every n and functional, the KS
/// statistic between m draws of f(X_n) and the reference law of f(X). This is
/// a necessary-condition test for convergence in distribution, not a proof.
inline ConvergenceReport convergence_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw validation_error("experiment: n_values must be non-empty");
  if (cfg.functionals.empty()) throw validation_error("experiment: functionals must be non-empty");
  if (cfg.samples < 2) throw validation_error("experiment: samples must be >= 2");
  ConvergenceReport report;
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  const std::size_t m = cfg.samples;
  const std::size_t nf = cfg.functionals.size();

  // Reference draws are shared across n (they do not depend on it).
  std::vector<std::vector<double>> ref(nf, std::vector<double>(m));
  const ProcessSampler limit = detail::build_limit(cfg);
  sample_batch(limit, m, mix64(cfg.seed ^ 0x5245464Cull), [&](std::size_t i, const PiecewisePath& p) {
    for (std::size_t f = 0; f < nf; ++f) ref[f][i] = cfg.functionals[f](p);
  });

  for (long n : cfg.n_values) {
    const ProcessSampler sampler =
        ProcessSampler::substitute(detail::build_outer(cfg, n), detail::build_inner(cfg, n));
    std::vector<std::vector<double>> draws(nf, std::vector<double>(m));
    sample_batch(sampler, m, mix64(cfg.seed + static_cast<std::uint64_t>(n)),
                 [&](std::size_t i, const PiecewisePath& p) {
                   for (std::size_t f = 0; f < nf; ++f) draws[f][i] = cfg.functionals[f](p);
                 });
    for (std::size_t f = 0; f < nf; ++f) {
      ExperimentRow row;
      row.n = n;
      row.functional = cfg.functionals[f].name();
      const auto closed_var = detail::normal_reference_variance(cfg, cfg.functionals[f]);
      if (closed_var) {
        row.statistic = ks_against_normal(draws[f], 0.0, *closed_var);
        row.critical_99 = ks_critical_99_one_sample(m);
        row.reference = "normal(0," + std::to_string(*closed_var) + ")";
      } else {
        row.statistic = ks_two_sample(draws[f], ref[f]);
        row.critical_99 = ks_critical_99(m, m);
        row.reference = "two-sample";
      }
      row.wasserstein = wasserstein1(draws[f], ref[f]);
      row.pass = row.statistic < row.critical_99;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace cadlag
