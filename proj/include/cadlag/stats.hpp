#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cadlag/path.hpp"

namespace cadlag {

/// Two-sided two-sample Kolmogorov-Smirnov statistic, sup_x |F_u(x) - F_v(x)|,
/// by a merge scan of the sorted samples (ties advance both pointers).
inline double ks_two_sample(std::span<const double> u, std::span<const double> v) {
  if (u.empty() || v.empty()) throw domain_error("ks_two_sample: empty sample");
  std::vector<double> a(u.begin(), u.end());
  std::vector<double> b(v.begin(), v.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double w;
    if (i < a.size() && j < b.size()) {
      w = std::min(a[i], b[j]);
    } else if (i < a.size()) {
      w = a[i];
    } else {
      w = b[j];
    }
    while (i < a.size() && a[i] == w) ++i;
    while (j < b.size() && b[j] == w) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic 99% critical value for the two-sample statistic.
inline double ks_critical_99(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 1.628 * std::sqrt((dn + dm) / (dn * dm));
}

/// 99% critical value against a fully specified reference law.
inline double ks_critical_99_one_sample(std::size_t m) {
  return 1.628 / std::sqrt(static_cast<double>(m));
}

inline double normal_cdf(double x, double mean = 0.0, double variance = 1.0) {
  if (!(variance > 0.0)) throw domain_error("normal_cdf: variance must be positive");
  const double z = (x - mean) / std::sqrt(2.0 * variance);
  return 0.5 * std::erfc(-z);
}

/// sup_x |F_u(x) - Phi_{mean,var}(x)| via a sorted scan.
inline double ks_against_normal(std::span<const double> u, double mean, double variance) {
  if (u.empty()) throw domain_error("ks_against_normal: empty sample");
  if (!(variance > 0.0)) throw domain_error("ks_against_normal: variance must be positive");
  std::vector<double> a(u.begin(), u.end());
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = normal_cdf(a[i], mean, variance);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

/// Sorted-sample L1 distance (Wasserstein-1 for equal-size samples).
inline double wasserstein1(std::span<const double> u, std::span<const double> v) {
  if (u.empty() || u.size() != v.size()) {
    throw domain_error("wasserstein1: needs equal-size non-empty samples");
  }
  std::vector<double> a(u.begin(), u.end());
  std::vector<double> b(v.begin(), v.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

inline double sample_mean(std::span<const double> u) {
  double acc = 0.0;
  for (double x : u) acc += x;
  return acc / static_cast<double>(u.size());
}

inline double sample_variance(std::span<const double> u) {
  const double mu = sample_mean(u);
  double acc = 0.0;
  for (double x : u) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(u.size() - 1);
}

}  // namespace cadlag
