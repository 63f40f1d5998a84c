#include "ellipticity/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ellipticity/errors.hpp"
#include "ellipticity/parallel.hpp"
#include "ellipticity/spectral.hpp"
#include "ellipticity/sphere.hpp"

namespace ellipticity {

const char* to_string(OracleVerdictKind k) {
  switch (k) {
    case OracleVerdictKind::MPDLikely: return "MPD_likely";
    case OracleVerdictKind::MPSDBoundary: return "MPSD_boundary";
    case OracleVerdictKind::NotMPSD: return "NotMPSD";
  }
  return "?";
}

Mat3 contract_xx(const Elast4& a, const Vec3& x) {
  Mat3 m;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a(i, j, k, l) * x(i) * x(j);
      m(k, l) = s;
    }
  return m;
}

namespace {

struct RowBest {
  double value;
  std::size_t x_index;
};

// Per-y best x over the lattice; one row per y lattice point.
std::vector<RowBest> grid_rows(const Elast4& a, const std::vector<Vec3>& pts) {
  std::vector<RowBest> rows(pts.size());
  parallel_for(pts.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t iy = begin; iy < end; ++iy) {
      const Mat3 m = contract_yy(a, pts[iy]);
      const double m00 = m(0, 0), m11 = m(1, 1), m22 = m(2, 2);
      const double m01 = 2 * m(0, 1), m02 = 2 * m(0, 2), m12 = 2 * m(1, 2);
      RowBest best{std::numeric_limits<double>::infinity(), 0};
      for (std::size_t ix = 0; ix < pts.size(); ++ix) {
        const Vec3& x = pts[ix];
        const double v = m00 * x(0) * x(0) + m11 * x(1) * x(1) + m22 * x(2) * x(2) + m01 * x(0) * x(1) +
                         m02 * x(0) * x(2) + m12 * x(1) * x(2);
        if (v < best.value) best = {v, ix};
      }
      rows[iy] = best;
    }
  });
  return rows;
}

double pair_angle(const Minimizer& a, const Minimizer& b) {
  return std::max(line_angle(a.x, b.x), line_angle(a.y, b.y));
}

void canonical_sign(Vec3& v) {
  int big = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(v(k)) > std::abs(v(big))) big = k;
  if (v(big) < 0) v = -v;
}

}  // namespace

OracleReport grid_min_biquadratic(const Elast4& a, int n) {
  if (n < 100) throw BadParams("grid_min_biquadratic: n must be >= 100");
  const std::vector<Vec3> pts = fibonacci_sphere(n);
  const std::vector<RowBest> rows = grid_rows(a, pts);
  std::size_t best = 0;
  for (std::size_t iy = 1; iy < rows.size(); ++iy)
    if (rows[iy].value < rows[best].value) best = iy;

  OracleReport rep;
  rep.grid_n = n;
  rep.argmin_x = pts[rows[best].x_index];
  rep.argmin_y = pts[best];
  rep.min_value = biquadratic(a, rep.argmin_x, rep.argmin_y);
  rep.minimizers.push_back({rep.argmin_x, rep.argmin_y, rep.min_value});
  return rep;
}

OracleReport refine_min(const Elast4& a, const Vec3& start_x, const Vec3& start_y, double tol,
                        int max_sweeps) {
  Vec3 x = start_x.normalized(), y = start_y.normalized();
  double value = biquadratic(a, x, y);
  OracleReport rep;
  rep.refined = true;
  rep.trace.push_back(value);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = value;
    const Vec3 nx = sym_eig<3>(contract_yy(a, y)).vectors.col(0);
    if (const double v = biquadratic(a, nx, y); v <= value) {
      x = nx;
      value = v;
    }
    const Vec3 ny = sym_eig<3>(contract_xx(a, x)).vectors.col(0);
    if (const double v = biquadratic(a, x, ny); v <= value) {
      y = ny;
      value = v;
    }
    rep.trace.push_back(value);
    if (before - value < tol * std::max(1.0, std::abs(value))) break;
  }
  canonical_sign(x);
  canonical_sign(y);
  rep.argmin_x = x;
  rep.argmin_y = y;
  rep.min_value = biquadratic(a, x, y);
  rep.minimizers.push_back({x, y, rep.min_value});
  return rep;
}

bool is_spsd(const Elast4& a, double tol) {
  return min_eigenvalue<9>(unfold(a)) >= -tol * a.norm();
}

bool is_spd(const Elast4& a, double tol) {
  const double n = a.norm();
  return n > 0 && min_eigenvalue<9>(unfold(a)) >= tol * n;
}

OracleVerdict oracle_verdict(const Elast4& a, int n, double tol, int starts) {
  if (n < 100) throw BadParams("oracle_verdict: n must be >= 100");
  const std::vector<Vec3> pts = fibonacci_sphere(n);
  const std::vector<RowBest> rows = grid_rows(a, pts);

  std::vector<std::size_t> order(rows.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t p, std::size_t q) { return rows[p].value < rows[q].value; });

  // Distinct starting pairs: each differs from the previous picks by more
  // than a few lattice spacings in x or y.
  const double separation = 3.0 * std::sqrt(4.0 * std::numbers::pi / n);
  std::vector<Minimizer> seeds;
  for (std::size_t iy : order) {
    if (static_cast<int>(seeds.size()) >= starts) break;
    Minimizer cand{pts[rows[iy].x_index], pts[iy], rows[iy].value};
    const bool far = std::all_of(seeds.begin(), seeds.end(),
                                 [&](const Minimizer& s) { return pair_angle(s, cand) > separation; });
    if (far) seeds.push_back(cand);
  }

  OracleVerdict out;
  out.scale = a.max_abs();
  out.report.grid_n = n;
  out.report.refined = true;
  std::vector<Minimizer> found;
  for (const auto& s : seeds) {
    const OracleReport r = refine_min(a, s.x, s.y);
    const Minimizer m{r.argmin_x, r.argmin_y, r.min_value};
    const bool dup = std::any_of(found.begin(), found.end(),
                                 [&](const Minimizer& f) { return pair_angle(f, m) < 1e-6; });
    if (!dup) found.push_back(m);
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Minimizer& p, const Minimizer& q) { return p.value < q.value; });
  out.report.minimizers = found;
  out.report.argmin_x = found.front().x;
  out.report.argmin_y = found.front().y;
  out.report.min_value = found.front().value;
  out.min_value = out.report.min_value;

  const double band = tol * out.scale;
  if (out.min_value < -band) {
    // Re-evaluate the witness with the plain contraction, independent of the search path.
    const Minimizer w{out.report.argmin_x, out.report.argmin_y,
                      out.report.argmin_x.dot(contract_yy(a, out.report.argmin_y) * out.report.argmin_x)};
    if (w.value < -band) {
      out.kind = OracleVerdictKind::NotMPSD;
      out.witness = w;
    } else {
      out.kind = OracleVerdictKind::MPSDBoundary;
    }
  } else if (out.min_value > band) {
    out.kind = OracleVerdictKind::MPDLikely;
  } else {
    out.kind = OracleVerdictKind::MPSDBoundary;
  }
  return out;
}

}  // namespace ellipticity
