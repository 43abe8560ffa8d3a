#pragma once

#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "cadlag/path.hpp"
#include "cadlag/rng.hpp"
#include "cadlag/samplers.hpp"

namespace cadlag {

/// A real functional of a path, measurable and a.s. continuous at the limit
/// processes used by the experiments.
struct PathFunctional {
  enum class Kind { ValueAt, RunningMax, Terminal, Increment, Integral };
  Kind kind = Kind::Terminal;
  double t0 = 0.0;
  double t1 = 0.0;

  static PathFunctional value_at(double t) { return {Kind::ValueAt, t, 0.0}; }
  static PathFunctional running_max() { return {Kind::RunningMax, 0.0, 0.0}; }
  static PathFunctional terminal() { return {Kind::Terminal, 0.0, 0.0}; }
  static PathFunctional increment(double s, double t) { return {Kind::Increment, s, t}; }
  static PathFunctional integral() { return {Kind::Integral, 0.0, 0.0}; }

  double operator()(const PiecewisePath& p) const {
    switch (kind) {
      case Kind::ValueAt:
        return p.eval(t0);
      case Kind::RunningMax:
        return p.max_value();
      case Kind::Terminal:
        return p.terminal();
      case Kind::Increment:
        return p.eval(t1) - p.eval(t0);
      case Kind::Integral:
        return p.integral();
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::ValueAt:
        return "value_at_" + format(t0);
      case Kind::RunningMax:
        return "running_max";
      case Kind::Terminal:
        return "terminal";
      case Kind::Increment:
        return "increment_" + format(t0) + "_" + format(t1);
      case Kind::Integral:
        return "integral";
    }
    return "unknown";
  }

 private:
  static std::string format(double t) {
    std::string s = std::to_string(t);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

/// Applies `per_path(index, path)` to m independent draws. Index i uses the
/// stream split(seed-stream, i), so the result is deterministic and identical
/// no matter how many workers run the batch; per_path must write only to its
/// own slot.
template <class Fn>
void sample_batch(const ProcessSampler& sampler, std::size_t m, std::uint64_t seed, Fn&& per_path) {
  const RandomStream root(seed);
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      per_path(i, sampler.sample_stream(root.split(i)));
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (workers <= 1 || m < 64) {
    run(0, m);
    return;
  }
  std::vector<std::future<void>> futs;
  const std::size_t chunk = (m + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(m, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, run, lo, hi));
  }
  for (auto& f : futs) f.get();
}

/// m independent draws of f(path); deterministic given the seed.
inline std::vector<double> sample_functional(const ProcessSampler& sampler,
                                             const PathFunctional& f, std::size_t m,
                                             std::uint64_t seed) {
  if (m < 1) throw domain_error("sample_functional: m must be >= 1");
  std::vector<double> out(m);
  sample_batch(sampler, m, seed, [&](std::size_t i, const PiecewisePath& p) { out[i] = f(p); });
  return out;
}

}  // namespace cadlag
