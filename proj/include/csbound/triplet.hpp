#pragma once

// Types shared by the general and binary feasible-triplet engines.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csbound/errors.hpp"

namespace csbound {

// gamma >= d * (r - epsilon) for any feasible triplet (u, r, epsilon).
inline double lower_bound_from(double r, double epsilon, unsigned d) {
  if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be non-negative");
  return static_cast<double>(d) * (r - epsilon);
}

struct TripletResult {
  std::optional<std::vector<double>> u;  // only when IterationControl::keep_u
  double r = 0.0;
  double epsilon = 0.0;
  double lower_bound = 0.0;
  std::uint64_t iterations_run = 0;
  std::uint64_t best_iteration = 0;  // 0 means the initial (0, 0) triplet
  bool converged = false;
};

struct IterationReport {
  std::uint64_t iteration = 0;  // 1-based count of completed iterations
  double R = 0.0;
  double E = 0.0;
  double best_r = 0.0;
  double best_epsilon = 0.0;
  double best_bound = 0.0;
  bool improved = false;
};

struct IterationControl {
  // Fixed run: the loop index goes d..n, i.e. n - d + 1 iterations. When
  // unset the run stops once the best r - epsilon has gained less than
  // `tolerance` for `patience` consecutive iterations, or at max_iterations.
  // Improvements arrive in bursts roughly 1.5d iterations apart, so the
  // effective patience is never below 4d.
  std::optional<std::uint64_t> n;
  double tolerance = 1e-9;
  unsigned patience = 10;
  std::uint64_t max_iterations = 200000;
  unsigned threads = 1;
  bool keep_u = false;
  // RAM the general engine may use for its d+1 generations.
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
  std::function<void(const IterationReport&)> on_iteration;
};

// Keeps the triplet with the largest R - E and decides when to stop.
class BestTracker {
 public:
  BestTracker(unsigned d, const IterationControl& control)
      : d_(d), control_(control), patience_(std::max(control.patience, 4 * d)) {
    if (control.n) {
      if (*control.n < d) {
        throw InvalidInput("iteration count n=" + std::to_string(*control.n) +
                           " must be at least d=" + std::to_string(d));
      }
      planned_ = *control.n - d + 1;
    }
  }

  // Records one iteration; returns true if (R, E) became the best triplet.
  bool record(double R, double E) {
    ++iteration_;
    const double before = best_r_ - best_eps_;
    const bool improved = R - E >= before;
    if (improved) {
      best_r_ = R;
      best_eps_ = E;
      best_iteration_ = iteration_;
    }
    const double gain = (best_r_ - best_eps_) - before;
    // A zero best means the iteration has not produced a feasible triplet
    // yet; stagnation only counts once it has.
    if (best_r_ - best_eps_ > 0.0 && gain < control_.tolerance) {
      ++stalled_;
    } else {
      stalled_ = 0;
    }
    last_R_ = R;
    last_E_ = E;
    last_improved_ = improved;
    return improved;
  }

  bool done() const {
    if (planned_) return iteration_ >= planned_;
    return converged() || iteration_ >= control_.max_iterations;
  }

  bool converged() const { return !planned_ && stalled_ >= patience_; }

  IterationReport report() const {
    return IterationReport{iteration_, last_R_, last_E_, best_r_, best_eps_,
                           lower_bound_from(best_r_, best_eps_, d_), last_improved_};
  }

  TripletResult result() const {
    TripletResult r;
    r.r = best_r_;
    r.epsilon = best_eps_;
    r.lower_bound = lower_bound_from(best_r_, best_eps_, d_);
    r.iterations_run = iteration_;
    r.best_iteration = best_iteration_;
    r.converged = converged();
    return r;
  }

  // Resume support for checkpointed runs.
  struct State {
    std::uint64_t iteration = 0;
    double best_r = 0.0;
    double best_epsilon = 0.0;
    std::uint64_t best_iteration = 0;
    unsigned stalled = 0;
  };
  State state() const { return {iteration_, best_r_, best_eps_, best_iteration_, stalled_}; }
  void restore(const State& s) {
    iteration_ = s.iteration;
    best_r_ = s.best_r;
    best_eps_ = s.best_epsilon;
    best_iteration_ = s.best_iteration;
    stalled_ = s.stalled;
  }

 private:
  unsigned d_;
  const IterationControl& control_;
  unsigned patience_;
  std::uint64_t planned_ = 0;  // 0: run until converged
  std::uint64_t iteration_ = 0;
  double best_r_ = 0.0;
  double best_eps_ = 0.0;
  std::uint64_t best_iteration_ = 0;
  unsigned stalled_ = 0;
  double last_R_ = 0.0;
  double last_E_ = 0.0;
  bool last_improved_ = false;
};

}  // namespace csbound
