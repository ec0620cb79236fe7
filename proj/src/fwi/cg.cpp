#include "fwiforge/fwi/cg.hpp"

#include <algorithm>
#include <cmath>

namespace fwiforge::fwi {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIterations: return "max_iters";
    case StopReason::Stalled: return "stalled";
  }
  return "unknown";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Trial {
  bool ok = false;
  std::vector<double> x;
  double f = 0.0;
  std::size_t evaluations = 0;
};

class LineSearch {
 public:
  LineSearch(Objective& f, const CgOptions& o) : f_(f), o_(o) {}

  Trial run(const std::vector<double>& x, double fx, const std::vector<double>& g,
            const std::vector<double>& d) {
    Trial best;
    const double dmax = max_abs(d);
    const double slope = dot(g, d);
    if (dmax == 0.0 || !(slope < 0.0)) return best;
    double alpha = o_.initial_step / dmax;
    std::vector<double> xt(x.size());
    for (std::size_t attempt = 0; attempt <= o_.max_step_halvings; ++attempt) {
      const double ft = evaluate(x, d, alpha, xt, best);
      double decrease = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) decrease += g[i] * (xt[i] - x[i]);
      if (std::isfinite(ft) && ft < fx && ft <= fx + o_.armijo * decrease) {
        best.ok = true;
        best.x = xt;
        best.f = ft;
        if (attempt == 0 && o_.refine_step) refine(x, fx, slope, alpha, ft, d, best);
        return best;
      }
      alpha = next_alpha(fx, slope, alpha, ft);
    }
    return best;
  }

 private:
  double evaluate(const std::vector<double>& x, const std::vector<double>& d, double alpha,
                  std::vector<double>& xt, Trial& t) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      xt[i] = std::clamp(x[i] + alpha * d[i], o_.lower, o_.upper);
    }
    ++t.evaluations;
    return f_.value(xt);
  }

  // Minimiser of the quadratic through (0, fx), slope, (alpha, ft), kept in
  // [0.1, 0.5] alpha.
  static double next_alpha(double fx, double slope, double alpha, double ft) {
    if (!std::isfinite(ft)) return 0.5 * alpha;
    const double denom = 2.0 * (ft - fx - slope * alpha);
    const double q = denom > 0.0 ? -slope * alpha * alpha / denom : 0.5 * alpha;
    return std::clamp(q, 0.1 * alpha, 0.5 * alpha);
  }

  void refine(const std::vector<double>& x, double fx, double slope, double alpha, double ft,
              const std::vector<double>& d, Trial& best) {
    const double denom = 2.0 * (ft - fx - slope * alpha);
    if (!(denom > 0.0)) return;
    const double q = -slope * alpha * alpha / denom;
    const bool worth = (q >= 0.1 * alpha && q <= 0.8 * alpha) || (q >= 1.25 * alpha && q <= 4.0 * alpha);
    if (!worth) return;
    std::vector<double> xt(x.size());
    const double fq = evaluate(x, d, q, xt, best);
    if (std::isfinite(fq) && fq < best.f) {
      best.x = std::move(xt);
      best.f = fq;
    }
  }

  Objective& f_;
  const CgOptions& o_;
};

}  // namespace

CgResult minimize_cg(Objective& f, std::vector<double> x0, const CgOptions& options) {
  CgResult res;
  std::vector<double> x = std::move(x0);
  for (double& v : x) v = std::clamp(v, options.lower, options.upper);
  std::vector<double> g(x.size());
  double fx = f.value_and_gradient(x, g);

  CgIteration start;
  start.loss = fx;
  start.grad_max = max_abs(g);
  start.evaluations = 1;
  res.history.push_back(start);

  auto finish = [&](StopReason r, double rel) {
    res.reason = r;
    res.final_rel_change = rel;
    res.x = x;
    return res;
  };

  if (fx == 0.0 || start.grad_max == 0.0 ||
      (options.gradient_tolerance > 0.0 && start.grad_max <= options.gradient_tolerance)) {
    return finish(StopReason::Converged, 0.0);
  }
  if (options.max_iters == 0) return finish(StopReason::MaxIterations, 0.0);

  std::vector<double> z = g;
  f.precondition(x, z);
  std::vector<double> d(z.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z[i];
  bool steepest = true;

  LineSearch search(f, options);
  for (std::size_t k = 1; k <= options.max_iters; ++k) {
    Trial t = search.run(x, fx, g, d);
    std::size_t evals = t.evaluations;
    if (!t.ok && !steepest) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z[i];
      steepest = true;
      t = search.run(x, fx, g, d);
      evals += t.evaluations;
    }
    if (!t.ok) return finish(StopReason::Stalled, 0.0);

    CgIteration it;
    it.iteration = k;
    it.loss = t.f;
    it.rel_change = fx > 0.0 ? (fx - t.f) / fx : 0.0;
    it.grad_max = max_abs(g);
    it.restarted = steepest;
    for (std::size_t i = 0; i < x.size(); ++i) {
      it.max_update = std::max(it.max_update, std::abs(t.x[i] - x[i]));
    }
    x = std::move(t.x);
    fx = t.f;

    if (fx == 0.0 || std::abs(it.rel_change) < options.stop_rel_loss_change) {
      it.evaluations = evals;
      res.history.push_back(it);
      return finish(StopReason::Converged, it.rel_change);
    }
    if (k == options.max_iters) {
      it.evaluations = evals;
      res.history.push_back(it);
      return finish(StopReason::MaxIterations, it.rel_change);
    }

    std::vector<double> g_new(x.size());
    fx = f.value_and_gradient(x, g_new);
    ++evals;
    it.evaluations = evals;
    res.history.push_back(it);
    if (options.gradient_tolerance > 0.0 && max_abs(g_new) <= options.gradient_tolerance) {
      g = std::move(g_new);
      return finish(StopReason::Converged, it.rel_change);
    }

    std::vector<double> z_new = g_new;
    f.precondition(x, z_new);
    const double denom = dot(g, z);
    double beta = 0.0;
    if (denom > 0.0) {
      double num = 0.0;
      for (std::size_t i = 0; i < g_new.size(); ++i) num += g_new[i] * (z_new[i] - z[i]);
      beta = std::max(0.0, num / denom);
    }
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z_new[i] + beta * d[i];
    steepest = beta == 0.0;
    if (!(dot(g_new, d) < 0.0)) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z_new[i];
      steepest = true;
    }
    g = std::move(g_new);
    z = std::move(z_new);
  }
  return finish(StopReason::MaxIterations, res.history.back().rel_change);
}

}  // namespace fwiforge::fwi
