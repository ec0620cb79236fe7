#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fwiforge::fwi {

/// Smooth objective over a flat parameter vector.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(std::span<const double> x) = 0;
  /// Writes the gradient at x into grad and returns the value at x.
  virtual double value_and_gradient(std::span<const double> x, std::span<double> grad) = 0;
  /// Maps the gradient to a search direction scale (diagonal preconditioner).
  /// The default leaves it unchanged.
  virtual void precondition(std::span<const double> x, std::span<double> grad) {
    (void)x;
    (void)grad;
  }
};

struct CgOptions {
  std::size_t max_iters = 20;
  /// Stop once |L_prev - L| / L_prev drops below this.
  double stop_rel_loss_change = 1e-3;
  /// Stop once max |grad| falls to this value or below (0 disables).
  double gradient_tolerance = 0.0;
  /// First trial moves the largest parameter by this much.
  double initial_step = 50.0;
  std::size_t max_step_halvings = 8;
  double armijo = 1e-4;
  /// One extra quadratic-model trial after an accepted first step.
  bool refine_step = true;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

enum class StopReason { Converged, MaxIterations, Stalled };

std::string to_string(StopReason r);

struct CgIteration {
  std::size_t iteration = 0;  ///< 0 is the starting point
  double loss = 0.0;
  double rel_change = 0.0;   ///< relative to the previous accepted loss
  double max_update = 0.0;   ///< max |x_k - x_{k-1}|
  double grad_max = 0.0;     ///< max |grad| at the previous point
  std::size_t evaluations = 0;
  bool restarted = false;    ///< steepest descent was used
};

struct CgResult {
  std::vector<double> x;
  std::vector<CgIteration> history;  ///< history[0] is the starting point
  StopReason reason = StopReason::MaxIterations;
  double final_rel_change = 0.0;
  std::size_t iterations() const noexcept { return history.empty() ? 0 : history.size() - 1; }
  double final_loss() const noexcept { return history.empty() ? 0.0 : history.back().loss; }
};

/// Projected nonlinear conjugate gradient (Polak-Ribiere+, restarted on
/// non-descent) with a backtracking Armijo line search. A line-search failure
/// along a conjugate direction is retried along steepest descent; a second
/// failure ends the run as Stalled, counted as zero loss change.
CgResult minimize_cg(Objective& f, std::vector<double> x0, const CgOptions& options);

}  // namespace fwiforge::fwi
