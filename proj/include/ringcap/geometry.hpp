#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ringcap/core.hpp"

namespace ringcap {

enum class SetKind { Ball, Box, Tube, Preimage, Intersection, Plate };

inline const char* to_string(SetKind k) {
  switch (k) {
    case SetKind::Ball: return "ball";
    case SetKind::Box: return "box";
    case SetKind::Tube: return "tube";
    case SetKind::Preimage: return "preimage";
    case SetKind::Intersection: return "intersection";
    case SetKind::Plate: return "plate";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ImplicitSet: a membership predicate plus a bounding box. Shapes with
// closed-form volume / surface area / boundary distance carry the analytic
// payload so capacity bounds can use exact values; preimage sets carry only
// the predicate. Immutable after construction; predicates must be pure.
// ---------------------------------------------------------------------------

template <int N>
struct ImplicitSet {
  SetKind kind = SetKind::Intersection;
  std::function<bool(const Vec<N>&)> member;
  BoxN<N> bbox{};
  bool convex = false;

  // analytic payload (present for ball/box/plate kinds)
  struct BallData {
    Vec<N> center{};
    double radius = 0;
    bool closed = true;
  };
  std::optional<BallData> ball;
  std::optional<BoxN<N>> box;  // solid boxes and plates (plates: zero thickness axis)

  bool contains(const Vec<N>& x) const { return member(x); }
};

inline double unit_ball_volume(int n) {
  return n == 2 ? M_PI : 4.0 * M_PI / 3.0;
}
inline double unit_sphere_area(int n) {
  return n == 2 ? 2.0 * M_PI : 4.0 * M_PI;
}

template <int N>
ImplicitSet<N> make_ball_set(const Vec<N>& center, double radius, bool closed) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  ImplicitSet<N> s;
  s.kind = SetKind::Ball;
  s.bbox = make_cube(center, radius);
  s.convex = true;
  s.ball = typename ImplicitSet<N>::BallData{center, radius, closed};
  s.member = [center, radius, closed](const Vec<N>& x) {
    double d = dist(x, center);
    return closed ? d <= radius : d < radius;
  };
  return s;
}

template <int N>
ImplicitSet<N> make_box_set(const BoxN<N>& box, bool closed) {
  ImplicitSet<N> s;
  s.kind = SetKind::Box;
  s.bbox = box;
  s.convex = true;
  s.box = box;
  s.member = [box, closed](const Vec<N>& x) {
    for (int i = 0; i < N; ++i) {
      if (closed) {
        if (x[i] < box.lo[i] || x[i] > box.hi[i]) return false;
      } else {
        if (x[i] <= box.lo[i] || x[i] >= box.hi[i]) return false;
      }
    }
    return true;
  };
  return s;
}

template <int N>
ImplicitSet<N> make_intersection(const ImplicitSet<N>& a, const ImplicitSet<N>& b) {
  ImplicitSet<N> s;
  s.kind = SetKind::Intersection;
  for (int i = 0; i < N; ++i) {
    s.bbox.lo[i] = std::max(a.bbox.lo[i], b.bbox.lo[i]);
    s.bbox.hi[i] = std::min(a.bbox.hi[i], b.bbox.hi[i]);
    if (s.bbox.hi[i] < s.bbox.lo[i]) s.bbox.hi[i] = s.bbox.lo[i];
  }
  auto ma = a.member, mb = b.member;
  s.member = [ma, mb](const Vec<N>& x) { return ma(x) && mb(x); };
  return s;
}

// Volume where a closed form exists.
template <int N>
std::optional<double> analytic_volume(const ImplicitSet<N>& s) {
  if (s.ball) return unit_ball_volume(N) * std::pow(s.ball->radius, N);
  if (s.box) return s.box->volume();
  return std::nullopt;
}

// (n-1)-measure of the boundary; plates count both faces.
template <int N>
std::optional<double> analytic_surface_area(const ImplicitSet<N>& s) {
  if (s.ball) return unit_sphere_area(N) * std::pow(s.ball->radius, N - 1);
  if (s.box && s.kind == SetKind::Box) {
    double area = 0;
    for (int i = 0; i < N; ++i) {
      double face = 1;
      for (int j = 0; j < N; ++j)
        if (j != i) face *= s.box->extent(j);
      area += 2 * face;
    }
    return area;
  }
  if (s.box && s.kind == SetKind::Plate) {
    // thin plate: dominant faces are the two broad sides
    int axis = 0;
    double min_ext = s.box->extent(0);
    for (int i = 1; i < N; ++i)
      if (s.box->extent(i) < min_ext) {
        min_ext = s.box->extent(i);
        axis = i;
      }
    double face = 1;
    for (int j = 0; j < N; ++j)
      if (j != axis) face *= s.box->extent(j);
    return 2 * face;
  }
  return std::nullopt;
}

template <int N>
std::optional<double> analytic_diameter(const ImplicitSet<N>& s) {
  if (s.ball) return 2 * s.ball->radius;
  if (s.box) return s.box->diagonal();
  return std::nullopt;
}

// Signed-free distance from an interior point to the boundary (available for
// analytic kinds only).
template <int N>
std::optional<double> analytic_boundary_distance(const ImplicitSet<N>& s, const Vec<N>& x) {
  if (s.ball) return s.ball->radius - dist(x, s.ball->center);
  if (s.box) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
      d = std::min(d, x[i] - s.box->lo[i]);
      d = std::min(d, s.box->hi[i] - x[i]);
    }
    return d;
  }
  return std::nullopt;
}

// Sampled diameter fallback: max pairwise distance over accepted samples.
template <int N>
double sampled_diameter(const ImplicitSet<N>& s, int target_samples, uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec<N>> pts;
  pts.reserve(static_cast<size_t>(target_samples));
  int attempts = target_samples * 40;
  for (int a = 0; a < attempts && static_cast<int>(pts.size()) < target_samples; ++a) {
    Vec<N> p = rng.point_in(s.bbox);
    if (s.member(p)) pts.push_back(p);
  }
  double d2 = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      d2 = std::max(d2, dot(pts[i] - pts[j], pts[i] - pts[j]));
  return std::sqrt(d2);
}

// ---------------------------------------------------------------------------
// RingCondenser: (F, G) with F compact connected inside open connected G,
// both inside the ambient set. Inclusions are checked by sampling here and
// re-checked exactly on grid nodes at solve time.
// ---------------------------------------------------------------------------

template <int N>
struct RingCondenser {
  ImplicitSet<N> F;
  ImplicitSet<N> G;
  ImplicitSet<N> ambient;
  std::string id;

  // exact separation for analytic shapes, unset otherwise
  std::optional<double> dist_F_boundary_G;
};

template <int N>
void check_inclusions(const RingCondenser<N>& R, int samples = 2000, uint64_t seed = 7) {
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    Vec<N> p = rng.point_in(R.F.bbox);
    if (R.F.member(p) && !R.G.member(p))
      throw std::invalid_argument("condenser invalid: sampled point of F outside G");
  }
  for (int k = 0; k < samples; ++k) {
    Vec<N> p = rng.point_in(R.G.bbox);
    if (R.G.member(p) && !R.ambient.member(p))
      throw std::invalid_argument("condenser invalid: sampled point of G outside ambient");
  }
}

template <int N>
RingCondenser<N> make_ball_ring(const Vec<N>& center, double r_F, double r_G,
                                const ImplicitSet<N>& ambient) {
  if (!(r_F > 0) || !(r_G > r_F))
    throw std::invalid_argument("radius ordering: require 0 < r_F < r_G");
  RingCondenser<N> R;
  R.F = make_ball_set(center, r_F, /*closed=*/true);
  R.G = make_ball_set(center, r_G, /*closed=*/false);
  R.ambient = ambient;
  R.dist_F_boundary_G = r_G - r_F;
  // the outer ball must stay inside the ambient set
  if (!ambient.bbox.contains_box(R.G.bbox))
    throw std::invalid_argument("escapes ambient: outer ball leaves ambient set");
  Rng rng(11);
  for (int k = 0; k < 512; ++k) {
    Vec<N> u;
    double s = 0;
    for (int i = 0; i < N; ++i) {
      u[i] = rng.uniform(-1, 1);
      s += u[i] * u[i];
    }
    if (s < 1e-12) continue;
    double inv = 1.0 / std::sqrt(s);
    Vec<N> p = center + u * (inv * r_G * (1 - 1e-9));
    if (!ambient.member(p))
      throw std::invalid_argument("escapes ambient: outer ball leaves ambient set");
  }
  return R;
}

// ---------------------------------------------------------------------------
// The parallelepiped condenser: F is the plate {y_n = 0, |y_i| <= r}
// thickened to half-thickness tau, G the open slab-box around it. |G| has
// the closed form 2^n * lambda_n * r^n * t * prod_{i<n}(1 + t*lambda_i).
// ---------------------------------------------------------------------------

struct BoxCondenserParams {
  std::vector<double> lambda;  // semiaxes, non-increasing, positive
  double r = 1.0;
  double t = 1.0;

  int dim() const { return static_cast<int>(lambda.size()); }

  void validate() const {
    int n = dim();
    if (n != 2 && n != 3) throw std::invalid_argument("lambda must have 2 or 3 entries");
    for (int i = 0; i < n; ++i)
      if (!(lambda[static_cast<size_t>(i)] > 0))
        throw std::invalid_argument("lambda entries must be positive");
    for (int i = 0; i + 1 < n; ++i)
      if (lambda[static_cast<size_t>(i)] < lambda[static_cast<size_t>(i + 1)])
        throw std::invalid_argument("lambda must be sorted non-increasing");
    if (!(r > 0)) throw std::invalid_argument("r must be positive");
    if (!(t > 0)) throw std::invalid_argument("t must be positive");
  }

  double volume_G() const {
    int n = dim();
    double v = std::pow(2.0, n) * lambda[static_cast<size_t>(n - 1)] * std::pow(r, n) * t;
    for (int i = 0; i + 1 < n; ++i) v *= 1.0 + t * lambda[static_cast<size_t>(i)];
    return v;
  }
};

// tau: half-thickness of the plate F (tie it to the solve grid spacing).
template <int N>
RingCondenser<N> make_box_condenser(const BoxCondenserParams& params, double tau) {
  params.validate();
  if (params.dim() != N) throw std::invalid_argument("parameter dimension mismatch");
  if (!(tau >= 0)) throw std::invalid_argument("plate thickness must be non-negative");
  const double r = params.r, t = params.t;
  const double ln = params.lambda[static_cast<size_t>(N - 1)];

  BoxN<N> fbox, gbox;
  for (int i = 0; i + 1 < N; ++i) {
    fbox.lo[i] = -r;
    fbox.hi[i] = r;
    gbox.lo[i] = -(r + r * t * params.lambda[static_cast<size_t>(i)]);
    gbox.hi[i] = r + r * t * params.lambda[static_cast<size_t>(i)];
  }
  fbox.lo[N - 1] = -tau;
  fbox.hi[N - 1] = tau;
  gbox.lo[N - 1] = -r * t * ln;
  gbox.hi[N - 1] = r * t * ln;
  if (tau >= r * t * ln)
    throw std::invalid_argument("plate thickness exceeds slab height");

  RingCondenser<N> R;
  R.F = make_box_set(fbox, /*closed=*/true);
  R.F.kind = SetKind::Plate;
  R.G = make_box_set(gbox, /*closed=*/false);
  R.ambient = make_box_set(gbox.padded(0.25), true);
  R.dist_F_boundary_G = r * t * ln - tau;
  return R;
}

// ---------------------------------------------------------------------------
// Uniform node grid covering a box with a one-cell margin. `res` is the cell
// count across the largest extent.
// ---------------------------------------------------------------------------

template <int N>
struct Grid {
  Vec<N> origin{};       // coordinate of node (0,...,0)
  double h = 0;          // spacing
  std::array<int, N> cells{};  // cell counts per axis (nodes = cells+1)

  static Grid covering(const BoxN<N>& box, int res) {
    if (res < 4) throw std::invalid_argument("grid resolution too small");
    Grid g;
    g.h = box.max_extent() / res;
    if (!(g.h > 0)) throw std::invalid_argument("degenerate box for grid");
    for (int i = 0; i < N; ++i) {
      int inner = static_cast<int>(std::ceil(box.extent(i) / g.h - 1e-9));
      g.cells[static_cast<size_t>(i)] = inner + 2;  // one-cell margin each side
      double slack = (inner * g.h - box.extent(i)) / 2;
      g.origin[i] = box.lo[i] - g.h - slack;
    }
    return g;
  }

  int nodes(int i) const { return cells[static_cast<size_t>(i)] + 1; }
  std::size_t total_nodes() const {
    std::size_t t = 1;
    for (int i = 0; i < N; ++i) t *= static_cast<size_t>(nodes(i));
    return t;
  }
  std::size_t total_cells() const {
    std::size_t t = 1;
    for (int i = 0; i < N; ++i) t *= static_cast<size_t>(cells[static_cast<size_t>(i)]);
    return t;
  }

  Vec<N> node(const std::array<int, N>& idx) const {
    Vec<N> p;
    for (int i = 0; i < N; ++i) p[i] = origin[i] + h * idx[static_cast<size_t>(i)];
    return p;
  }

  std::size_t flat(const std::array<int, N>& idx) const {
    std::size_t f = static_cast<size_t>(idx[0]);
    for (int i = 1; i < N; ++i)
      f = f * static_cast<size_t>(nodes(i)) + static_cast<size_t>(idx[static_cast<size_t>(i)]);
    return f;
  }

  BoxN<N> extent_box() const {
    BoxN<N> b;
    for (int i = 0; i < N; ++i) {
      b.lo[i] = origin[i];
      b.hi[i] = origin[i] + h * cells[static_cast<size_t>(i)];
    }
    return b;
  }
};

// ---------------------------------------------------------------------------
// Volume estimation.
// ---------------------------------------------------------------------------

enum class MeasureMethod { Grid, MonteCarlo };

struct MeasureResult {
  double value = 0;
  double error = 0;  // MC: one standard error; grid: mixed-cell bias bound
};

template <int N>
MeasureResult measure(const ImplicitSet<N>& s, MeasureMethod method, long samples,
                      uint64_t seed = 0) {
  MeasureResult out;
  if (method == MeasureMethod::MonteCarlo) {
    if (samples < 100) throw std::invalid_argument("sample count must be at least 100");
    Rng rng(seed ^ 0x5eedULL);
    long hits = 0;
    for (long k = 0; k < samples; ++k)
      if (s.member(rng.point_in(s.bbox))) ++hits;
    double vol_box = s.bbox.volume();
    double phat = static_cast<double>(hits) / static_cast<double>(samples);
    out.value = vol_box * phat;
    out.error = vol_box * std::sqrt(std::max(phat * (1 - phat), 0.0) / static_cast<double>(samples));
    return out;
  }
  // grid method: `samples` is the cell count across the largest bbox extent
  int res = static_cast<int>(std::max<long>(samples, 4));
  double h = s.bbox.max_extent() / res;
  std::array<int, N> cells{};
  for (int i = 0; i < N; ++i)
    cells[static_cast<size_t>(i)] =
        std::max(1, static_cast<int>(std::round(s.bbox.extent(i) / h)));
  double cell_vol = 1;
  std::array<double, N> step{};
  for (int i = 0; i < N; ++i) {
    step[static_cast<size_t>(i)] = s.bbox.extent(i) / cells[static_cast<size_t>(i)];
    cell_vol *= step[static_cast<size_t>(i)];
  }
  long inside = 0, mixed = 0;
  std::array<int, N> idx{};
  const long total = [&] {
    long t = 1;
    for (int i = 0; i < N; ++i) t *= cells[static_cast<size_t>(i)];
    return t;
  }();
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int i = N - 1; i >= 0; --i) {
      idx[static_cast<size_t>(i)] = static_cast<int>(rem % cells[static_cast<size_t>(i)]);
      rem /= cells[static_cast<size_t>(i)];
    }
    Vec<N> c, half;
    for (int i = 0; i < N; ++i) {
      c[i] = s.bbox.lo[i] + (idx[static_cast<size_t>(i)] + 0.5) * step[static_cast<size_t>(i)];
      half[i] = 0.5 * step[static_cast<size_t>(i)];
    }
    bool center_in = s.member(c);
    if (center_in) ++inside;
    // corner disagreement marks a boundary cell
    bool any_diff = false;
    for (int corner = 0; corner < (1 << N) && !any_diff; ++corner) {
      Vec<N> q = c;
      for (int i = 0; i < N; ++i) q[i] += ((corner >> i) & 1) ? half[i] : -half[i];
      if (s.member(q) != center_in) any_diff = true;
    }
    if (any_diff) ++mixed;
  }
  out.value = cell_vol * static_cast<double>(inside);
  out.error = cell_vol * static_cast<double>(mixed);
  return out;
}

// Volume for bound evaluators: exact when the shape is analytic, Monte Carlo
// otherwise.
template <int N>
MeasureResult best_volume(const ImplicitSet<N>& s, long mc_samples = 400000,
                          uint64_t seed = 0) {
  if (auto v = analytic_volume(s)) return {*v, 0.0};
  return measure(s, MeasureMethod::MonteCarlo, mc_samples, seed);
}

}  // namespace ringcap
