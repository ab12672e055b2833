#pragma once

#include <optional>

#include "ringcap/capacity.hpp"
#include "ringcap/mappings.hpp"

namespace ringcap {

// ---------------------------------------------------------------------------
// Curves and tube condensers.
// ---------------------------------------------------------------------------

template <int N>
struct Polyline {
  std::vector<Vec<N>> pts;  // endpoints fixed, interior control points free

  double length() const {
    double L = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) L += dist(pts[i], pts[i + 1]);
    return L;
  }
};

template <int N>
double point_segment_distance(const Vec<N>& p, const Vec<N>& a, const Vec<N>& b) {
  Vec<N> ab = b - a;
  double denom = dot(ab, ab);
  double t = denom > 0 ? std::clamp(dot(p - a, ab) / denom, 0.0, 1.0) : 0.0;
  return dist(p, a + ab * t);
}

template <int N>
double distance_to_polyline(const Vec<N>& p, const Polyline<N>& poly) {
  if (poly.pts.empty()) return std::numeric_limits<double>::infinity();
  if (poly.pts.size() == 1) return dist(p, poly.pts[0]);
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < poly.pts.size(); ++i)
    d = std::min(d, point_segment_distance(p, poly.pts[i], poly.pts[i + 1]));
  return d;
}

// closed tube of given radius around the curve
template <int N>
ImplicitSet<N> tube_set(const Polyline<N>& poly, double radius) {
  if (poly.pts.empty()) throw std::invalid_argument("empty polyline");
  if (!(radius > 0)) throw std::invalid_argument("tube radius must be positive");
  ImplicitSet<N> s;
  s.kind = SetKind::Tube;
  BoxN<N> b;
  for (int i = 0; i < N; ++i) {
    b.lo[i] = poly.pts[0][i];
    b.hi[i] = poly.pts[0][i];
  }
  for (const auto& p : poly.pts)
    for (int i = 0; i < N; ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  for (int i = 0; i < N; ++i) {
    b.lo[i] -= radius;
    b.hi[i] += radius;
  }
  s.bbox = b;
  if (poly.pts.size() == 1) {
    // point curve: the tube is a ball
    return make_ball_set(poly.pts[0], radius, true);
  }
  Polyline<N> copy = poly;
  s.member = [copy, radius](const Vec<N>& x) {
    return distance_to_polyline(x, copy) <= radius;
  };
  return s;
}

// clearance of the curve inside the domain: every sampled curve point must
// carry a ball of the given radius inside Omega
template <int N>
bool curve_has_clearance(const Polyline<N>& poly, const ImplicitSet<N>& domega,
                         double radius) {
  auto point_ok = [&](const Vec<N>& x) {
    if (!domega.member(x)) return false;
    if (auto bd = analytic_boundary_distance(domega, x)) return *bd > radius;
    // membership probe on a sphere around x
    const int dirs = N == 2 ? 16 : 26;
    for (int k = 0; k < dirs; ++k) {
      Vec<N> u{};
      if constexpr (N == 2) {
        double a = 2 * M_PI * k / dirs;
        u = {std::cos(a), std::sin(a)};
      } else {
        int kk = k;
        for (int i = 0; i < 3; ++i) {
          u[i] = static_cast<double>(kk % 3 - 1);
          kk /= 3;
        }
        double nn = norm(u);
        if (nn == 0) continue;
        u = u * (1.0 / nn);
      }
      if (!domega.member(x + u * (radius * 1.02))) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < poly.pts.size(); ++i) {
    if (!point_ok(poly.pts[i])) return false;
    if (i + 1 < poly.pts.size()) {
      int steps = std::max(2, static_cast<int>(std::ceil(dist(poly.pts[i], poly.pts[i + 1]) / (radius * 0.5))));
      for (int s = 1; s < steps; ++s) {
        double t = static_cast<double>(s) / steps;
        if (!point_ok(poly.pts[i] + (poly.pts[i + 1] - poly.pts[i]) * t)) return false;
      }
    }
  }
  return true;
}

inline void check_metric_exponent(double p, int n) {
  // capacity of a curve degenerates outside (n-1, n]; in the plane the
  // admissible range is (1, 2]
  if (!(p > n - 1) || !(p <= n)) throw std::invalid_argument("p out of admissible range");
}

struct CurveCapacityResult {
  double cp = 0;            // capacity of (tube, Omega)
  double cp_root = 0;       // cp^{1/p}
  double cp_half_root = 0;  // same at tube_radius/2 (bias probe), 0 if skipped
  double tube_radius = 0;
  bool converged = true;
  long iterations = 0;
};

struct CurveCapacityOptions {
  int res = 96;
  SolverOptions solver;
  bool half_radius_probe = true;
};

template <int N>
CurveCapacityResult curve_capacity(const Polyline<N>& curve, const ImplicitSet<N>& omega,
                                   double p, double tube_radius,
                                   const CurveCapacityOptions& opts) {
  check_metric_exponent(p, N);
  if (curve.pts.empty()) throw std::invalid_argument("empty polyline");
  if (!curve_has_clearance(curve, omega, tube_radius))
    throw std::invalid_argument("clearance violation: curve too close to the boundary");

  auto solve_at = [&](double radius) {
    RingCondenser<N> R;
    R.F = tube_set(curve, radius);
    R.G = omega;
    R.ambient = make_box_set(omega.bbox.padded(0.1), true);
    R.id = "curve";
    SolverOptions sopt = opts.solver;
    sopt.p = p;
    Grid<N> grid = Grid<N>::covering(omega.bbox, opts.res);
    return cap_numeric(R, sopt, grid);
  };

  CurveCapacityResult out;
  out.tube_radius = tube_radius;
  auto full = solve_at(tube_radius);
  out.cp = full.value;
  out.cp_root = std::pow(full.value, 1.0 / p);
  out.converged = full.converged;
  out.iterations = full.iterations;
  if (opts.half_radius_probe) {
    auto half = solve_at(tube_radius / 2);
    out.cp_half_root = std::pow(half.value, 1.0 / p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Capacitary distance: derivative-free local search over polylines starting
// from the straight segment. Deterministic; returns an upper estimate of the
// infimum.
// ---------------------------------------------------------------------------

struct MetricOptions {
  int control_points = 5;
  int search_res = 64;
  int final_res = 128;
  int max_sweeps = 5;
  double tube_radius = 0;  // 0: use 2h of the search grid
  uint64_t seed = 0;
  SolverOptions solver;
};

template <int N>
struct MetricQueryResult {
  Vec<N> x{}, y{};
  double p = 0;
  double d_value = 0;
  Polyline<N> best_curve;
  long optimizer_iterations = 0;
  double tube_radius = 0;
  bool feasible = true;
};

template <int N>
MetricQueryResult<N> capacitary_distance(const Vec<N>& x, const Vec<N>& y,
                                         const ImplicitSet<N>& omega, double p,
                                         const MetricOptions& opts) {
  check_metric_exponent(p, N);
  MetricQueryResult<N> out;
  out.x = x;
  out.y = y;
  out.p = p;

  double scale = omega.bbox.max_extent();
  if (dist(x, y) < 1e-15 * scale) {
    // one-point curve has zero capacity; no solve performed
    out.d_value = 0;
    out.best_curve.pts = {x};
    return out;
  }

  double h_search = scale / opts.search_res;
  double tube_r = opts.tube_radius > 0 ? opts.tube_radius : 2 * h_search;
  out.tube_radius = tube_r;

  auto make_curve = [&](const std::vector<Vec<N>>& interior) {
    Polyline<N> c;
    c.pts.push_back(x);
    for (const auto& q : interior) c.pts.push_back(q);
    c.pts.push_back(y);
    return c;
  };

  const int m = std::max(opts.control_points, 1);
  std::vector<Vec<N>> ctrl(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    double t = static_cast<double>(i + 1) / (m + 1);
    ctrl[static_cast<size_t>(i)] = x + (y - x) * t;
  }

  CurveCapacityOptions ccopt;
  ccopt.res = opts.search_res;
  ccopt.solver = opts.solver;
  ccopt.half_radius_probe = false;

  long evals = 0;
  auto objective = [&](const std::vector<Vec<N>>& interior) -> double {
    ++evals;
    Polyline<N> c = make_curve(interior);
    try {
      return curve_capacity(c, omega, p, tube_r, ccopt).cp_root;
    } catch (const std::invalid_argument&) {
      return std::numeric_limits<double>::infinity();  // curve left the domain
    }
  };

  double best = objective(ctrl);
  if (!std::isfinite(best))
    throw std::invalid_argument("no feasible initial curve between the query points");

  double step = dist(x, y) / 4;
  for (int sweep = 0; sweep < opts.max_sweeps && step > h_search / 2; ++sweep) {
    bool improved = false;
    for (int i = 0; i < m; ++i)
      for (int axis = 0; axis < N; ++axis)
        for (int dir = -1; dir <= 1; dir += 2) {
          auto trial = ctrl;
          trial[static_cast<size_t>(i)][axis] += dir * step;
          double v = objective(trial);
          if (v < best - 1e-12) {
            best = v;
            ctrl = trial;
            improved = true;
          }
        }
    if (!improved) step /= 2;
  }

  // re-evaluate the winner and the straight segment at the reporting
  // resolution; the straight segment is the optimizer's starting point, so
  // the reported value never exceeds its estimate
  CurveCapacityOptions fopt = ccopt;
  fopt.res = opts.final_res;
  std::vector<Vec<N>> straight(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    double t = static_cast<double>(i + 1) / (m + 1);
    straight[static_cast<size_t>(i)] = x + (y - x) * t;
  }
  Polyline<N> best_curve = make_curve(ctrl);
  Polyline<N> straight_curve = make_curve(straight);
  double v_best = curve_capacity(best_curve, omega, p, tube_r, fopt).cp_root;
  double v_straight = curve_capacity(straight_curve, omega, p, tube_r, fopt).cp_root;
  if (v_straight <= v_best) {
    out.d_value = v_straight;
    out.best_curve = straight_curve;
  } else {
    out.d_value = v_best;
    out.best_curve = best_curve;
  }
  out.optimizer_iterations = evals;
  return out;
}

// ---------------------------------------------------------------------------
// Metric axioms.
// ---------------------------------------------------------------------------

struct AxiomPairEntry {
  int i = 0, j = 0;
  double d_ij = 0, d_ji = 0;
  double asymmetry = 0;  // |d_ij - d_ji| / mean
  bool ok = true;
};

struct AxiomTripleEntry {
  int i = 0, j = 0, k = 0;
  double lhs = 0, rhs = 0;
  std::string status;  // "ok" | "tight" | "violated"
};

struct AxiomReport {
  std::vector<AxiomPairEntry> pairs;
  std::vector<AxiomTripleEntry> triples;
  bool symmetry_ok = true;
  bool triangle_ok = true;
  bool positivity_ok = true;
  double tol_symmetry = 0.02;
  double tol_triangle = 0.05;
};

template <int N>
AxiomReport check_metric_axioms(const ImplicitSet<N>& omega, double p,
                                const std::vector<Vec<N>>& points, const MetricOptions& opts,
                                double tol_symmetry = 0.02, double tol_triangle = 0.05) {
  if (points.size() < 3) throw std::invalid_argument("need at least 3 sample points");
  const int n = static_cast<int>(points.size());
  AxiomReport rep;
  rep.tol_symmetry = tol_symmetry;
  rep.tol_triangle = tol_triangle;

  std::vector<double> d(static_cast<size_t>(n * n), 0.0);
  struct Task {
    int i, j;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) tasks.push_back({i, j});
  parallel_for(tasks.size(), [&](std::size_t t) {
    auto [i, j] = tasks[t];
    d[static_cast<size_t>(i * n + j)] =
        capacitary_distance(points[static_cast<size_t>(i)], points[static_cast<size_t>(j)], omega, p, opts).d_value;
  });

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      AxiomPairEntry e;
      e.i = i;
      e.j = j;
      e.d_ij = d[static_cast<size_t>(i * n + j)];
      e.d_ji = d[static_cast<size_t>(j * n + i)];
      double mean = 0.5 * (e.d_ij + e.d_ji);
      e.asymmetry = mean > 0 ? std::abs(e.d_ij - e.d_ji) / mean : 0.0;
      e.ok = e.asymmetry <= tol_symmetry;
      if (!e.ok) rep.symmetry_ok = false;
      if (!(mean > 0)) rep.positivity_ok = false;
      rep.pairs.push_back(e);
    }

  auto dsym = [&](int i, int j) {
    return 0.5 * (d[static_cast<size_t>(i * n + j)] + d[static_cast<size_t>(j * n + i)]);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        AxiomTripleEntry e;
        e.i = i;
        e.j = j;
        e.k = k;
        e.lhs = dsym(i, k);
        e.rhs = dsym(i, j) + dsym(j, k);
        if (e.lhs <= e.rhs) {
          e.status = "ok";
        } else if (e.lhs <= e.rhs * (1 + tol_triangle)) {
          e.status = "tight";
        } else {
          e.status = "violated";
          rep.triangle_ok = false;
        }
        rep.triples.push_back(e);
      }
  return rep;
}

// ---------------------------------------------------------------------------
// Lipschitz comparison for weak (p,q)-quasiconformal mappings:
//   d_q(inv(x), inv(y)) <= K_{p,q}(phi; Omega) * d_p(x, y)
// Both sides are upper estimates of infima, so the check flags rather than
// fails inside the declared slack band.
// ---------------------------------------------------------------------------

struct LipschitzEntry {
  double lhs = 0;   // d_q of preimages
  double rhs = 0;   // d_p of the original pair
  double K = 0;
  double slack_rel = 0;  // (K*rhs - lhs) / (K*rhs)
  bool ok = true;
};

struct LipschitzReport {
  std::vector<LipschitzEntry> entries;
  double K = 0;
  double tol = 0.05;
  bool ok = true;
};

template <int N>
LipschitzReport check_lipschitz(const MappingSpec<N>& phi,
                                const std::vector<std::pair<Vec<N>, Vec<N>>>& pairs,
                                double p, double q, const MetricOptions& opts,
                                double tol = 0.05, int distortion_res = 128) {
  if (!(q > N - 1) || !(q <= p) || !(p <= N))
    throw std::invalid_argument("exponent range: require n-1 < q <= p <= n");
  LipschitzReport rep;
  rep.tol = tol;
  Grid<N> qgrid = Grid<N>::covering(phi.domain.bbox, distortion_res);
  rep.K = distortion_norm(phi, p, q, qgrid).K_pq;

  rep.entries.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t t) {
    const auto& [x, y] = pairs[t];
    LipschitzEntry e;
    e.K = rep.K;
    e.rhs = capacitary_distance(x, y, phi.codomain, p, opts).d_value;
    Vec<N> xi = phi.inverse(x), yi = phi.inverse(y);
    e.lhs = capacitary_distance(xi, yi, phi.domain, q, opts).d_value;
    double bound = e.K * e.rhs;
    e.slack_rel = bound > 0 ? (bound - e.lhs) / bound : -1.0;
    e.ok = e.slack_rel >= -tol;
    rep.entries[t] = e;
  });
  for (const auto& e : rep.entries) rep.ok = rep.ok && e.ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Composition duality exponents p' = p/(p-n+1), q' = q/(q-n+1).
// ---------------------------------------------------------------------------

struct DualityExponents {
  double p = 0, q = 0;
  double p_dual = 0, q_dual = 0;
};

inline DualityExponents duality_exponents(double p, double q, int n) {
  if (!(p > n - 1) || !(q > n - 1))
    throw std::invalid_argument("duality requires exponents above n-1");
  DualityExponents d;
  d.p = p;
  d.q = q;
  d.p_dual = p / (p - n + 1);
  d.q_dual = q / (q - n + 1);
  return d;
}

}  // namespace ringcap
