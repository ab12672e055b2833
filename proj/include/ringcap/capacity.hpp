#pragma once

#include <cstring>
#include <deque>
#include <optional>

#include "ringcap/geometry.hpp"

namespace ringcap {

// node roles in a capacity solve
enum NodeMask : uint8_t { Interior = 0, ClampOne = 1, ClampZero = 2 };

// Grid-sampled candidate function. Clamped-one nodes carry exactly 1,
// clamped-zero exactly 0; interior values stay in [0,1] under projection.
template <int N>
struct ScalarField {
  Grid<N> grid;
  std::vector<double> values;
  std::vector<uint8_t> mask;
};

struct SolverOptions {
  double p = 2.0;
  double epsilon_reg = 1e-2;  // continuation start, scaled by 1/h at solve time
  double epsilon_min = 1e-6;  // continuation end, same scaling
  double tol = 1e-8;          // relative energy-decrease stopping threshold
  long max_iter = 200000;
  int continuation_steps = 5;
  bool hierarchical = true;

  void validate() const {
    if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
    if (!(epsilon_reg >= 0)) throw std::invalid_argument("epsilon_reg must be non-negative");
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1 || continuation_steps < 1)
      throw std::invalid_argument("iteration budgets must be positive");
  }
};

struct CapacityResult {
  double value = 0;
  double p = 0;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  long iterations = 0;
  double final_energy_delta = 0;
  double grid_h = 0;
  bool converged = true;
};

namespace detail {

// 1D squared distance transform (Felzenszwalb–Huttenlocher lower envelope).
inline void edt_1d(const double* f, double* d, int n, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Squared distance (in index units) from every node to the nearest seed node.
template <int N>
std::vector<double> edt_squared(const Grid<N>& grid, const std::vector<uint8_t>& seed) {
  const double INF = 1e18;
  std::vector<double> dist(grid.total_nodes());
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = seed[i] ? 0.0 : INF;

  int max_n = 0;
  for (int i = 0; i < N; ++i) max_n = std::max(max_n, grid.nodes(i));
  std::vector<double> f(static_cast<size_t>(max_n)), d(static_cast<size_t>(max_n)),
      z(static_cast<size_t>(max_n) + 1);
  std::vector<int> v(static_cast<size_t>(max_n));

  // pass along each axis
  std::array<int, N> dims{};
  for (int i = 0; i < N; ++i) dims[static_cast<size_t>(i)] = grid.nodes(i);
  for (int axis = 0; axis < N; ++axis) {
    int n = dims[static_cast<size_t>(axis)];
    // iterate over all lines along `axis`
    std::array<int, N> idx{};
    std::size_t lines = 1;
    for (int i = 0; i < N; ++i)
      if (i != axis) lines *= static_cast<size_t>(dims[static_cast<size_t>(i)]);
    for (std::size_t line = 0; line < lines; ++line) {
      std::size_t rem = line;
      for (int i = N - 1; i >= 0; --i) {
        if (i == axis) continue;
        idx[static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(dims[static_cast<size_t>(i)]));
        rem /= static_cast<size_t>(dims[static_cast<size_t>(i)]);
      }
      for (int q = 0; q < n; ++q) {
        idx[static_cast<size_t>(axis)] = q;
        f[static_cast<size_t>(q)] = dist[grid.flat(idx)];
      }
      edt_1d(f.data(), d.data(), n, v.data(), z.data());
      for (int q = 0; q < n; ++q) {
        idx[static_cast<size_t>(axis)] = q;
        dist[grid.flat(idx)] = d[static_cast<size_t>(q)];
      }
    }
  }
  return dist;
}

// face-adjacency component count over the nodes where `in` is true
template <int N>
int component_count(const Grid<N>& grid, const std::vector<uint8_t>& in) {
  std::vector<uint8_t> seen(grid.total_nodes(), 0);
  std::array<int, N> dims{};
  for (int i = 0; i < N; ++i) dims[static_cast<size_t>(i)] = grid.nodes(i);
  std::array<std::ptrdiff_t, N> stride{};
  stride[N - 1] = 1;
  for (int i = N - 2; i >= 0; --i)
    stride[static_cast<size_t>(i)] =
        stride[static_cast<size_t>(i + 1)] * dims[static_cast<size_t>(i + 1)];

  int components = 0;
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < in.size(); ++start) {
    if (!in[start] || seen[start]) continue;
    ++components;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      // decode index to test face neighbours
      std::size_t rem = cur;
      std::array<int, N> idx{};
      for (int i = N - 1; i >= 0; --i) {
        idx[static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(dims[static_cast<size_t>(i)]));
        rem /= static_cast<size_t>(dims[static_cast<size_t>(i)]);
      }
      for (int axis = 0; axis < N; ++axis) {
        for (int dir = -1; dir <= 1; dir += 2) {
          int ni = idx[static_cast<size_t>(axis)] + dir;
          if (ni < 0 || ni >= dims[static_cast<size_t>(axis)]) continue;
          std::size_t nb = cur + static_cast<size_t>(dir * stride[static_cast<size_t>(axis)]);
          if (in[nb] && !seen[nb]) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace detail

// Build the solve field: clamp 1 on F-nodes, 0 outside G, free in between.
// Verifies node-level inclusion, visibility of F, and connectivity of F and
// G by flood fill.
template <int N>
ScalarField<N> make_field(const RingCondenser<N>& R, const Grid<N>& grid,
                          bool check_connectivity = true) {
  ScalarField<N> f;
  f.grid = grid;
  std::size_t total = grid.total_nodes();
  f.values.assign(total, 0.0);
  f.mask.assign(total, ClampZero);

  std::array<int, N> dims{};
  for (int i = 0; i < N; ++i) dims[static_cast<size_t>(i)] = grid.nodes(i);
  std::array<int, N> idx{};
  std::size_t ones = 0, interior = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = N - 1; i >= 0; --i) {
      idx[static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(dims[static_cast<size_t>(i)]));
      rem /= static_cast<size_t>(dims[static_cast<size_t>(i)]);
    }
    Vec<N> x = grid.node(idx);
    bool inF = R.F.member(x);
    bool inG = R.G.member(x);
    if (inF && !inG)
      throw std::invalid_argument("condenser invalid: F node outside G on solve grid");
    if (inF) {
      f.mask[flat] = ClampOne;
      f.values[flat] = 1.0;
      ++ones;
    } else if (inG) {
      f.mask[flat] = Interior;
      ++interior;
    }
  }
  if (ones == 0 || interior == 0)
    throw std::invalid_argument("condenser too thin for grid");

  if (check_connectivity) {
    std::vector<uint8_t> inF(total), inG(total);
    for (std::size_t i = 0; i < total; ++i) {
      inF[i] = f.mask[i] == ClampOne;
      inG[i] = f.mask[i] != ClampZero;
    }
    if (detail::component_count(grid, inF) != 1)
      throw std::invalid_argument("F disconnected on solve grid");
    if (detail::component_count(grid, inG) != 1)
      throw std::invalid_argument("G disconnected on solve grid");
  }
  return f;
}

// Estimated distance from F to the boundary of G on a grid (lower estimate:
// the node-to-node distance minus one spacing).
template <int N>
double separation_on_grid(const ScalarField<N>& f) {
  std::vector<uint8_t> zero_seed(f.mask.size());
  for (std::size_t i = 0; i < f.mask.size(); ++i) zero_seed[i] = f.mask[i] == ClampZero;
  auto d2 = detail::edt_squared(f.grid, zero_seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.mask.size(); ++i)
    if (f.mask[i] == ClampOne) best = std::min(best, d2[i]);
  if (!std::isfinite(best)) return 0;
  return std::max(std::sqrt(best) - 1.0, 0.0) * f.grid.h;
}

// ---------------------------------------------------------------------------
// Discrete p-Dirichlet energy on the simplicial split of the grid (two
// triangles per 2D cell, six Kuhn tetrahedra per 3D cell). Each simplex has
// a constant gradient, so the energy and its derivative are exact for the
// piecewise-linear interpolant.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr int kuhn_perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

template <int N, bool WithGrad>
double p_energy_impl(const ScalarField<N>& f, double p, double eps, std::vector<double>* grad) {
  const Grid<N>& g = f.grid;
  const double h = g.h;
  const double eps2 = eps * eps;
  const bool quadratic = p == 2.0;
  const double* val = f.values.data();
  double energy = 0;
  if (WithGrad) {
    grad->assign(f.values.size(), 0.0);
  }
  double* gr = WithGrad ? grad->data() : nullptr;
  auto pow_half_p = [&](double q) { return quadratic ? q : std::pow(q, p / 2); };
  auto pow_half_p_m1 = [&](double q) { return quadratic ? 1.0 : std::pow(q, p / 2 - 1); };

  if constexpr (N == 2) {
    const int nx = g.cells[0], ny = g.cells[1];
    const int ny1 = ny + 1;
    const double area = h * h / 2;
    const double wfac = p * area / (h * h);  // chain factor for node derivatives
    for (int i = 0; i < nx; ++i) {
      const double* row = val + static_cast<size_t>(i) * ny1;
      const double* row1 = row + ny1;
      for (int j = 0; j < ny; ++j) {
        const double a = row[j], b = row1[j], c = row[j + 1], d = row1[j + 1];
        // lower triangle (a,b,c)
        const double gx1 = b - a, gy1 = c - a;  // times 1/h
        const double q1 = (gx1 * gx1 + gy1 * gy1) / (h * h) + eps2;
        // upper triangle (d,c,b)
        const double gx2 = d - c, gy2 = d - b;
        const double q2 = (gx2 * gx2 + gy2 * gy2) / (h * h) + eps2;
        energy += area * (pow_half_p(q1) + pow_half_p(q2));
        if (WithGrad) {
          std::size_t base = static_cast<size_t>(i) * ny1 + static_cast<size_t>(j);
          if (q1 > 0) {
            const double w = wfac * pow_half_p_m1(q1);
            gr[base] += -w * (gx1 + gy1);
            gr[base + ny1] += w * gx1;
            gr[base + 1] += w * gy1;
          }
          if (q2 > 0) {
            const double w = wfac * pow_half_p_m1(q2);
            gr[base + ny1 + 1] += w * (gx2 + gy2);
            gr[base + 1] += -w * gx2;
            gr[base + ny1] += -w * gy2;
          }
        }
      }
    }
  } else {
    const int nx = g.cells[0], ny = g.cells[1], nz = g.cells[2];
    const std::size_t sy = static_cast<size_t>(nz + 1);
    const std::size_t sx = static_cast<size_t>(ny + 1) * sy;
    const std::size_t stride[3] = {sx, sy, 1};
    const double vol = h * h * h / 6;
    const double wfac = p * vol / (h * h);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (int k = 0; k < nz; ++k) {
          const std::size_t base = static_cast<size_t>(i) * sx + static_cast<size_t>(j) * sy +
                                   static_cast<size_t>(k);
          for (const auto& perm : kuhn_perms) {
            std::size_t n0 = base;
            std::size_t n1 = n0 + stride[perm[0]];
            std::size_t n2 = n1 + stride[perm[1]];
            std::size_t n3 = n2 + stride[perm[2]];
            const double d1 = val[n1] - val[n0];
            const double d2 = val[n2] - val[n1];
            const double d3 = val[n3] - val[n2];
            const double q = (d1 * d1 + d2 * d2 + d3 * d3) / (h * h) + eps2;
            energy += vol * pow_half_p(q);
            if (WithGrad && q > 0) {
              const double w = wfac * pow_half_p_m1(q);
              gr[n0] -= w * d1;
              gr[n1] += w * (d1 - d2);
              gr[n2] += w * (d2 - d3);
              gr[n3] += w * d3;
            }
          }
        }
  }
  return energy;
}

}  // namespace detail

// Discrete p-Dirichlet energy of the field (eps = 0 gives the plain energy).
template <int N>
double p_energy(const ScalarField<N>& f, double p, double eps = 0.0) {
  if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
  return detail::p_energy_impl<N, false>(f, p, eps, nullptr);
}

template <int N>
double p_energy_grad(const ScalarField<N>& f, double p, double eps, std::vector<double>& grad) {
  double e = detail::p_energy_impl<N, true>(f, p, eps, &grad);
  // clamped nodes do not move
  for (std::size_t i = 0; i < f.mask.size(); ++i)
    if (f.mask[i] != Interior) grad[i] = 0.0;
  return e;
}

// Multilinear sample of the field at an arbitrary point (clamped to the grid).
template <int N>
double sample_field(const ScalarField<N>& f, const Vec<N>& x) {
  const Grid<N>& g = f.grid;
  std::array<int, N> i0{};
  std::array<double, N> t{};
  for (int i = 0; i < N; ++i) {
    double s = (x[i] - g.origin[i]) / g.h;
    s = std::clamp(s, 0.0, static_cast<double>(g.cells[static_cast<size_t>(i)]) - 1e-12);
    i0[static_cast<size_t>(i)] = static_cast<int>(s);
    t[static_cast<size_t>(i)] = s - i0[static_cast<size_t>(i)];
  }
  double acc = 0;
  for (int corner = 0; corner < (1 << N); ++corner) {
    double w = 1;
    std::array<int, N> idx = i0;
    for (int i = 0; i < N; ++i) {
      if ((corner >> i) & 1) {
        idx[static_cast<size_t>(i)] += 1;
        w *= t[static_cast<size_t>(i)];
      } else {
        w *= 1 - t[static_cast<size_t>(i)];
      }
    }
    acc += w * f.values[g.flat(idx)];
  }
  return acc;
}

namespace detail {

struct DescentOutcome {
  long iterations = 0;
  double final_delta = 0;
  bool converged = false;
};

// Projected gradient descent with the two-point secant (Barzilai–Borwein)
// step and monotone backtracking. Interior values are projected onto [0,1]
// every step; stops after 10 consecutive iterations with relative energy
// decrease below tol.
template <int N>
DescentOutcome run_descent(ScalarField<N>& f, double p, double eps, double tol,
                           long max_iter) {
  DescentOutcome out;
  const std::size_t n = f.values.size();
  std::vector<double> grad(n), trial(n), grad_trial(n);
  double E = p_energy_grad(f, p, eps, grad);
  double alpha = f.grid.h * f.grid.h;
  int consecutive = 0;

  auto make_trial = [&](double step) {
    for (std::size_t i = 0; i < n; ++i) {
      if (f.mask[i] == Interior) {
        trial[i] = std::clamp(f.values[i] - step * grad[i], 0.0, 1.0);
      } else {
        trial[i] = f.values[i];
      }
    }
  };

  ScalarField<N> tmp;  // shares grid/mask, borrows trial values for evaluation
  tmp.grid = f.grid;
  tmp.mask = f.mask;

  while (out.iterations < max_iter) {
    ++out.iterations;
    double Et = 0;
    int backtracks = 0;
    for (;;) {
      make_trial(alpha);
      tmp.values.swap(trial);
      Et = p_energy(tmp, p, eps);
      tmp.values.swap(trial);
      if (Et <= E || backtracks >= 60) break;
      alpha *= 0.5;
      ++backtracks;
    }
    if (Et > E) {
      out.converged = true;  // no descent direction left at this scale
      break;
    }
    tmp.values.swap(trial);
    double En = p_energy_grad(tmp, p, eps, grad_trial);
    tmp.values.swap(trial);
    (void)En;

    double ss = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = trial[i] - f.values[i];
      ss += s * s;
      sy += s * (grad_trial[i] - grad[i]);
    }
    double delta_rel = (E - Et) / std::max(std::abs(Et), 1e-300);
    f.values.swap(trial);
    grad.swap(grad_trial);
    E = Et;
    out.final_delta = delta_rel;
    alpha = (sy > 1e-300) ? std::clamp(ss / sy, 1e-14, 1e10) : alpha * 2;
    if (delta_rel < tol) {
      if (++consecutive >= 10) {
        out.converged = true;
        break;
      }
    } else {
      consecutive = 0;
    }
  }
  return out;
}

// epsilon-continuation ladder, scaled by 1/h. For p = 2 the regulariser is
// an additive constant, so a single stage at the final epsilon suffices; a
// warm-started level only needs the final stage as well.
inline std::vector<double> continuation_ladder(const SolverOptions& opts, double h,
                                               bool warm_started) {
  std::vector<double> eps;
  int steps = std::max(opts.continuation_steps, 1);
  double e0 = std::max(opts.epsilon_reg, 1e-300);
  double e1 = std::max(std::min(opts.epsilon_min, e0), 1e-300);
  for (int s = 0; s < steps; ++s) {
    double t = steps == 1 ? 1.0 : static_cast<double>(s) / (steps - 1);
    eps.push_back(std::exp(std::log(e0) + t * (std::log(e1) - std::log(e0))) / h);
  }
  if (opts.epsilon_reg == 0) eps.assign(1, 0.0);
  if (opts.p == 2.0 || warm_started) eps.erase(eps.begin(), eps.end() - 1);
  return eps;
}

// EDT-based ramp: distance to the zero set over total distance, a cheap
// starting guess for the coarsest level.
template <int N>
void init_ramp(ScalarField<N>& f) {
  std::vector<uint8_t> zeros(f.mask.size()), ones(f.mask.size());
  for (std::size_t i = 0; i < f.mask.size(); ++i) {
    zeros[i] = f.mask[i] == ClampZero;
    ones[i] = f.mask[i] == ClampOne;
  }
  auto d0 = edt_squared(f.grid, zeros);
  auto d1 = edt_squared(f.grid, ones);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.mask[i] != Interior) continue;
    double a = std::sqrt(d0[i]), b = std::sqrt(d1[i]);
    f.values[i] = (a + b > 0) ? a / (a + b) : 0.5;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// cap_numeric: projected-descent minimisation of the discrete p-energy over
// admissible fields, with epsilon-continuation and coarse-to-fine warm
// starts. Deterministic given options. The returned value is the final
// energy at eps = 0, an upper bound on the discrete minimum within tol.
// ---------------------------------------------------------------------------

template <int N>
CapacityResult cap_numeric(const RingCondenser<N>& R, const SolverOptions& opts,
                           const Grid<N>& grid) {
  opts.validate();
  CapacityResult res;
  res.p = opts.p;
  res.grid_h = grid.h;

  // thin-condenser guard at the solve resolution
  {
    double sep;
    if (R.dist_F_boundary_G) {
      sep = *R.dist_F_boundary_G;
    } else {
      ScalarField<N> probe = make_field(R, grid, /*check_connectivity=*/false);
      sep = separation_on_grid(probe);
    }
    if (!(sep >= 2 * grid.h)) throw std::invalid_argument("condenser too thin for grid");
  }

  // resolution ladder (coarse-to-fine warm starts)
  std::vector<int> ladder;
  int res_axis = *std::max_element(grid.cells.begin(), grid.cells.end()) - 2;
  if (opts.hierarchical) {
    for (int r = res_axis / 4; ladder.size() < 2 && r >= 24; r *= 2) ladder.push_back(r);
    std::sort(ladder.begin(), ladder.end());
  }

  BoxN<N> box = R.G.bbox;
  ScalarField<N> field;
  bool have_coarse = false;
  ScalarField<N> coarse;
  for (std::size_t lev = 0; lev <= ladder.size(); ++lev) {
    const bool finest = lev == ladder.size();
    Grid<N> g = finest ? grid : Grid<N>::covering(box, ladder[lev]);
    ScalarField<N> lf;
    try {
      lf = make_field(R, g);
    } catch (const std::invalid_argument&) {
      if (!finest) continue;  // condenser invisible at this coarse level
      throw;
    }
    if (have_coarse) {
      std::array<int, N> dims{}, idx{};
      for (int i = 0; i < N; ++i) dims[static_cast<size_t>(i)] = g.nodes(i);
      for (std::size_t flat = 0; flat < lf.values.size(); ++flat) {
        if (lf.mask[flat] != Interior) continue;
        std::size_t rem = flat;
        for (int i = N - 1; i >= 0; --i) {
          idx[static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(dims[static_cast<size_t>(i)]));
          rem /= static_cast<size_t>(dims[static_cast<size_t>(i)]);
        }
        lf.values[flat] = std::clamp(sample_field(coarse, g.node(idx)), 0.0, 1.0);
      }
    } else {
      detail::init_ramp(lf);
    }

    auto eps_ladder = detail::continuation_ladder(opts, g.h, have_coarse);
    bool all_ok = true;
    for (double eps : eps_ladder) {
      auto oc = detail::run_descent(lf, opts.p, eps, opts.tol,
                                    std::max<long>(opts.max_iter / static_cast<long>(eps_ladder.size()), 200));
      res.iterations += oc.iterations;
      res.final_energy_delta = oc.final_delta;
      all_ok = all_ok && oc.converged;
    }
    if (finest) {
      res.converged = all_ok;
      field = std::move(lf);
    } else {
      coarse = std::move(lf);
      have_coarse = true;
    }
  }

  res.value = p_energy(field, opts.p, 0.0);
  return res;
}

// ---------------------------------------------------------------------------
// Radial oracle: energy of the explicit extremal profile for concentric
// balls, integrated by composite Simpson quadrature.
//   p != n: u(rho) proportional to rho^beta - r_G^beta, beta = (p-n)/(p-1)
//   p == n: logarithmic profile
// ---------------------------------------------------------------------------

inline double cap_radial_oracle(double r_F, double r_G, int n, double p) {
  if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
  if (!(r_F > 0) || !(r_F < r_G))
    throw std::invalid_argument("radius ordering: require 0 < r_F < r_G");
  if (n != 2 && n != 3) throw std::invalid_argument("dimension must be 2 or 3");

  const double omega = unit_sphere_area(n);
  const bool conformal = std::abs(p - n) < 1e-13;
  const double beta = conformal ? 0.0 : (p - n) / (p - 1);
  // normalisation so the profile drops from 1 at r_F to 0 at r_G
  const double I = conformal ? std::log(r_G / r_F)
                             : (std::pow(r_G, beta) - std::pow(r_F, beta)) / beta;

  auto integrand = [&](double rho) {
    double du = conformal ? 1.0 / (rho * I) : std::pow(rho, beta - 1) / std::abs(I);
    return omega * std::pow(std::abs(du), p) * std::pow(rho, n - 1);
  };
  const int panels = 8192;
  const double hh = (r_G - r_F) / panels;
  double acc = integrand(r_F) + integrand(r_G);
  for (int i = 1; i < panels; ++i)
    acc += integrand(r_F + i * hh) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * hh / 3.0;
}

// ---------------------------------------------------------------------------
// Capacity bounds.
// ---------------------------------------------------------------------------

namespace detail {

template <int N>
double volume_difference(const RingCondenser<N>& R, uint64_t seed = 97) {
  auto vg = analytic_volume(R.G);
  auto vf = analytic_volume(R.F);
  if (vg && vf) return *vg - *vf;
  // Monte Carlo over G's bounding box on the predicate G \ F
  Rng rng(seed);
  const long samples = 400000;
  long hits = 0;
  for (long k = 0; k < samples; ++k) {
    Vec<N> x = rng.point_in(R.G.bbox);
    if (R.G.member(x) && !R.F.member(x)) ++hits;
  }
  return R.G.bbox.volume() * static_cast<double>(hits) / static_cast<double>(samples);
}

template <int N>
double separation_estimate(const RingCondenser<N>& R, int res = 160) {
  if (R.dist_F_boundary_G) return *R.dist_F_boundary_G;
  Grid<N> g = Grid<N>::covering(R.G.bbox, res);
  ScalarField<N> f = make_field(R, g, /*check_connectivity=*/false);
  return separation_on_grid(f);
}

}  // namespace detail

// (|G \ F|^{1/p} / dist(F, boundary G))^p
template <int N>
double cap_upper_bound(const RingCondenser<N>& R, double p) {
  if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
  double vol = detail::volume_difference(R);
  double sep = detail::separation_estimate(R);
  if (!(sep > 0)) throw std::invalid_argument("distance estimate non-positive");
  return vol / std::pow(sep, p);
}

// (m_{n-1}(boundary F) / |G|^{1 - 1/p})^p; certified for convex F, where the
// boundary of F minimises the enclosing-manifold area by projection.
template <int N>
double cap_lower_bound_measure(const RingCondenser<N>& R, double p) {
  if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
  if (!R.F.convex) throw std::invalid_argument("requires convex F");
  auto area = analytic_surface_area(R.F);
  if (!area) throw std::invalid_argument("requires convex F with closed-form boundary area");
  double volG = best_volume(R.G).value;
  return std::pow(*area / std::pow(volG, 1.0 - 1.0 / p), p);
}

// diam(F)^{p/(n-1)} / |G|^{p/(n-1)-1} with unit constant. Scaling diagnostic
// only: the matching constant is not specified, so no bound is asserted.
template <int N>
double cap_lower_bound_diam(const RingCondenser<N>& R, double p) {
  if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
  double diam;
  if (auto d = analytic_diameter(R.F)) {
    diam = *d;
  } else {
    diam = sampled_diameter(R.F, 600, 41);
  }
  if (diam <= 0) return 0.0;
  double volG = best_volume(R.G).value;
  double e = p / (N - 1);
  return std::pow(diam, e) / std::pow(volG, e - 1.0);
}

// ---------------------------------------------------------------------------
// Routing helper: concentric ball rings go through the radial oracle unless
// a grid solve is forced; everything else is solved on a grid.
// ---------------------------------------------------------------------------

struct RingSolveOptions {
  int res = 128;
  SolverOptions solver;
  bool force_grid = false;
};

template <int N>
bool is_concentric_ball_ring(const RingCondenser<N>& R) {
  if (!R.F.ball || !R.G.ball) return false;
  double scale = std::max(R.G.ball->radius, 1e-12);
  return dist(R.F.ball->center, R.G.ball->center) < 1e-12 * scale;
}

template <int N>
CapacityResult ring_capacity(const RingCondenser<N>& R, double p, const RingSolveOptions& opts) {
  if (!opts.force_grid && is_concentric_ball_ring(R)) {
    CapacityResult res;
    res.p = p;
    res.value = cap_radial_oracle(R.F.ball->radius, R.G.ball->radius, N, p);
    res.converged = true;
    res.grid_h = 0;
    return res;
  }
  SolverOptions sopt = opts.solver;
  sopt.p = p;
  Grid<N> grid = Grid<N>::covering(R.G.bbox, opts.res);
  return cap_numeric(R, sopt, grid);
}

}  // namespace ringcap
