#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ellipticity/cases.hpp"
#include "ellipticity/errors.hpp"
#include "ellipticity/parallel.hpp"
#include "ellipticity/sphere.hpp"

namespace ellipticity {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double angle_to_nearest(const Vec3& y, std::span<const Vec3> lines) {
  double best = std::numbers::pi;
  for (const auto& d : lines) best = std::min(best, line_angle(y, d));
  return best;
}

struct AscentResult {
  Vec3 y;
  double value;
  bool converged;
  bool at_singular;
};

// Projected gradient ascent on the unit sphere with central differences in
// the tangent plane and a doubling/halving step.
AscentResult ascend(const EtaFunction& eta, Vec3 y, double value, std::span<const Vec3> lines,
                    const SupEtaOptions& opts) {
  constexpr double h = 1e-6;
  const double guard = std::max(opts.ascent_guard, opts.singular_tol);
  auto admissible = [&](const Vec3& p) -> std::optional<double> {
    if (!lines.empty() && angle_to_nearest(p, lines) < guard) return std::nullopt;
    return eta(p);
  };

  double step = 1e-2;
  for (int it = 0; it < opts.max_ascent_iter; ++it) {
    const auto [t1, t2] = tangent_basis(y);
    Vec3 grad = Vec3::Zero();
    for (const Vec3& t : {t1, t2}) {
      const auto fp = admissible((y + h * t).normalized());
      const auto fm = admissible((y - h * t).normalized());
      if (!fp || !fm) return {y, value, true, true};
      grad += (*fp - *fm) / (2 * h) * t;
    }
    const double gnorm = grad.norm();
    if (gnorm == 0.0) return {y, value, true, false};

    bool improved = false;
    while (step * gnorm > 1e-15) {
      const Vec3 cand = (y + step * grad).normalized();
      const auto fc = admissible(cand);
      if (!fc) {
        // Pushing into the excluded zone around a singular line.
        step *= 0.5;
        if (step * gnorm < 1e-12) return {y, value, true, true};
        continue;
      }
      if (*fc > value) {
        const double gain = *fc - value;
        y = cand;
        value = *fc;
        step *= 2.0;
        improved = true;
        if (gain <= opts.converge_tol * std::max(1.0, std::abs(value))) return {y, value, true, false};
        break;
      }
      step *= 0.5;
    }
    if (!improved) return {y, value, true, false};
  }
  return {y, value, false, false};
}

}  // namespace

SupEtaResult sup_eta(const EtaFunction& eta, std::span<const Vec3> singular_lines,
                     const SupEtaOptions& opts) {
  if (opts.grid_n < 1 || opts.starts < 1) throw InvalidOptions("sup_eta: grid_n and starts must be >= 1");
  std::vector<Vec3> lines;
  for (const auto& d : singular_lines)
    if (d.norm() > 0) lines.push_back(d.normalized());

  const std::vector<Vec3> grid = fibonacci_hemisphere(opts.grid_n);
  std::vector<double> values(grid.size(), kNaN);
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      if (!lines.empty() && angle_to_nearest(grid[n], lines) < opts.singular_tol) continue;
      if (auto v = eta(grid[n])) values[n] = *v;
    }
  });

  SupEtaResult res;
  std::vector<std::size_t> order;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (std::isnan(values[n])) ++res.excluded;
    else order.push_back(n);
  }
  res.evaluated = static_cast<int>(order.size());
  if (order.empty()) throw EmptyDomain("sup_eta: every grid point lies in the excluded set");

  // Descending value, ties by index.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  // Best candidates, kept apart so that separate local maxima get a start.
  std::vector<std::size_t> starts;
  const double separation = 3.0 * std::sqrt(4.0 * std::numbers::pi / (2.0 * opts.grid_n));
  for (std::size_t n : order) {
    if (static_cast<int>(starts.size()) >= opts.starts) break;
    bool far = std::all_of(starts.begin(), starts.end(),
                           [&](std::size_t s) { return line_angle(grid[s], grid[n]) > separation; });
    if (far) starts.push_back(n);
  }

  // Every evaluated point is a lower bound on the supremum; keep them all and
  // pick the argmax at the end.
  std::vector<std::pair<Vec3, double>> candidates{{grid[order.front()], values[order.front()]}};
  res.converged = true;
  for (std::size_t s : starts) {
    const AscentResult a = ascend(eta, grid[s], values[s], lines, opts);
    ++res.ascents;
    if (a.at_singular) ++res.ascents_at_singular;
    res.converged = res.converged && a.converged;
    candidates.emplace_back(a.y, a.value);
  }

  for (const auto& d : lines) {
    SingularProbe probe;
    probe.line = d;
    const auto [t1, t2] = tangent_basis(d);
    for (double theta = 1e-1; theta >= opts.singular_tol * 0.999; theta *= 0.1) {
      double best = -std::numeric_limits<double>::infinity();
      Vec3 best_y = d;
      for (int k = 0; k < 32; ++k) {
        const double phi = std::numbers::pi * k / 32.0;
        const Vec3 y = std::cos(theta) * d + std::sin(theta) * (std::cos(phi) * t1 + std::sin(phi) * t2);
        if (auto v = eta(y); v && *v > best) {
          best = *v;
          best_y = y;
        }
      }
      if (!std::isfinite(best)) continue;
      probe.angles.push_back(theta);
      probe.values.push_back(best);
      candidates.emplace_back(best_y, best);
    }
    probe.limit = probe.values.empty() ? kNaN : probe.values.back();
    res.probes.push_back(std::move(probe));
  }

  // Values within the ascent tolerance of the best count as ties; among them
  // the point farthest from the singular lines is reported, so a supremum
  // attained in the interior is not displaced by a limit along a singular line.
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) top = std::max(top, c.second);
  const double tie = opts.converge_tol * std::max(1.0, std::abs(top));
  double far = -1.0;
  for (const auto& [y, v] : candidates) {
    if (v < top - tie) continue;
    const double dist = lines.empty() ? 0.0 : angle_to_nearest(y, lines);
    if (dist > far) {
      far = dist;
      res.argmax = y;
      res.value = v;
    }
  }

  // Report a canonical representative of the line through the maximizer.
  int big = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(res.argmax(k)) > std::abs(res.argmax(big))) big = k;
  if (res.argmax(big) < 0) res.argmax = -res.argmax;
  return res;
}

}  // namespace ellipticity
