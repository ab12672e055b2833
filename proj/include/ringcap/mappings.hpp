#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ringcap/geometry.hpp"

namespace ringcap {

template <int N>
struct Mat {
  std::array<double, static_cast<size_t>(N * N)> a{};  // row-major

  double& operator()(int i, int j) { return a[static_cast<size_t>(i * N + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i * N + j)]; }

  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1;
    return m;
  }

  Vec<N> apply(const Vec<N>& x) const {
    Vec<N> y;
    for (int i = 0; i < N; ++i) {
      double s = 0;
      for (int j = 0; j < N; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  Mat mul(const Mat& o) const {
    Mat r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double s = 0;
        for (int k = 0; k < N; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  double det() const {
    if constexpr (N == 2) {
      return a[0] * a[3] - a[1] * a[2];
    } else {
      return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
    }
  }

  Mat inverse() const {
    double d = det();
    if (std::abs(d) < 1e-300) throw std::invalid_argument("matrix not invertible");
    Mat r;
    if constexpr (N == 2) {
      r.a = {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
    } else {
      r(0, 0) = (a[4] * a[8] - a[5] * a[7]) / d;
      r(0, 1) = (a[2] * a[7] - a[1] * a[8]) / d;
      r(0, 2) = (a[1] * a[5] - a[2] * a[4]) / d;
      r(1, 0) = (a[5] * a[6] - a[3] * a[8]) / d;
      r(1, 1) = (a[0] * a[8] - a[2] * a[6]) / d;
      r(1, 2) = (a[2] * a[3] - a[0] * a[5]) / d;
      r(2, 0) = (a[3] * a[7] - a[4] * a[6]) / d;
      r(2, 1) = (a[1] * a[6] - a[0] * a[7]) / d;
      r(2, 2) = (a[0] * a[4] - a[1] * a[3]) / d;
    }
    return r;
  }
};

// Singular values via the symmetric eigenproblem of A^T A: closed form for
// 2x2, cyclic Jacobi sweeps for 3x3.
template <int N>
std::array<double, N> singular_values(const Mat<N>& m) {
  Mat<N> s;  // A^T A
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double acc = 0;
      for (int k = 0; k < N; ++k) acc += m(k, i) * m(k, j);
      s(i, j) = acc;
    }
  std::array<double, N> eig{};
  if constexpr (N == 2) {
    double tr = s(0, 0) + s(1, 1);
    double dt = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    double disc = std::sqrt(std::max(tr * tr / 4 - dt, 0.0));
    eig = {tr / 2 + disc, tr / 2 - disc};
  } else {
    for (int sweep = 0; sweep < 32; ++sweep) {
      double off = std::abs(s(0, 1)) + std::abs(s(0, 2)) + std::abs(s(1, 2));
      if (off < 1e-15 * (std::abs(s(0, 0)) + std::abs(s(1, 1)) + std::abs(s(2, 2)) + 1e-300))
        break;
      for (int p = 0; p < 2; ++p)
        for (int q = p + 1; q < 3; ++q) {
          if (std::abs(s(p, q)) < 1e-300) continue;
          double theta = (s(q, q) - s(p, p)) / (2 * s(p, q));
          double t = (theta >= 0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1));
          double c = 1 / std::sqrt(t * t + 1), sn = t * c;
          Mat<3> r;
          for (int i = 0; i < 3; ++i) {
            double sip = s(i, p), siq = s(i, q);
            r(i, p) = c * sip - sn * siq;
            r(i, q) = sn * sip + c * siq;
          }
          for (int i = 0; i < 3; ++i) {
            if (i != p && i != q) {
              s(i, p) = s(p, i) = r(i, p);
              s(i, q) = s(q, i) = r(i, q);
            }
          }
          double spp = s(p, p), sqq = s(q, q), spq = s(p, q);
          s(p, p) = c * c * spp - 2 * sn * c * spq + sn * sn * sqq;
          s(q, q) = sn * sn * spp + 2 * sn * c * spq + c * c * sqq;
          s(p, q) = s(q, p) = 0;
        }
    }
    eig = {s(0, 0), s(1, 1), s(2, 2)};
  }
  std::array<double, N> sv{};
  for (int i = 0; i < N; ++i) sv[static_cast<size_t>(i)] = std::sqrt(std::max(eig[static_cast<size_t>(i)], 0.0));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

template <int N>
double operator_norm(const Mat<N>& m) {
  return singular_values(m)[0];
}

template <int N>
double min_singular_value(const Mat<N>& m) {
  return singular_values(m)[static_cast<size_t>(N - 1)];
}

// ---------------------------------------------------------------------------
// MappingSpec: analytic invertible test mappings with closed-form derivative
// and inverse. Immutable and shareable; all evaluations are pure.
// ---------------------------------------------------------------------------

enum class MappingKind { Identity, Linear, RadialStretch, Composed };

template <int N>
struct MappingSpec {
  MappingKind kind = MappingKind::Identity;
  std::string name = "identity";
  std::function<Vec<N>(const Vec<N>&)> forward;
  std::function<Vec<N>(const Vec<N>&)> inverse;
  std::function<Mat<N>(const Vec<N>&)> jacobian;
  ImplicitSet<N> domain;    // Omega
  ImplicitSet<N> codomain;  // Omega-tilde = forward(Omega)
  double scale = 1.0;       // characteristic length of the domain
  std::vector<Vec<N>> singular_points;  // derivative degenerates here

  Vec<N> operator()(const Vec<N>& x) const { return forward(x); }
};

template <int N>
ImplicitSet<N> preimage_set(const ImplicitSet<N>& target,
                            const std::function<Vec<N>(const Vec<N>&)>& fwd,
                            const std::function<Vec<N>(const Vec<N>&)>& inv,
                            int boundary_samples = 4096) {
  ImplicitSet<N> s;
  s.kind = SetKind::Preimage;
  s.member = [target, fwd](const Vec<N>& x) { return target.member(fwd(x)); };
  // bbox: map target-bbox boundary points through the inverse, pad 5%
  BoxN<N> out;
  bool first = true;
  auto absorb = [&](const Vec<N>& y) {
    Vec<N> x = inv(y);
    for (int i = 0; i < N; ++i) {
      if (!std::isfinite(x[i])) throw std::runtime_error("mapping not invertible on the needed region");
      if (first || x[i] < out.lo[i]) out.lo[i] = x[i];
      if (first || x[i] > out.hi[i]) out.hi[i] = x[i];
    }
    first = false;
  };
  const BoxN<N>& b = target.bbox;
  if constexpr (N == 2) {
    int m = std::max(16, static_cast<int>(std::sqrt(static_cast<double>(boundary_samples))));
    for (int k = 0; k <= m; ++k) {
      double t = static_cast<double>(k) / m;
      absorb({b.lo[0] + t * b.extent(0), b.lo[1]});
      absorb({b.lo[0] + t * b.extent(0), b.hi[1]});
      absorb({b.lo[0], b.lo[1] + t * b.extent(1)});
      absorb({b.hi[0], b.lo[1] + t * b.extent(1)});
    }
  } else {
    int m = std::max(8, static_cast<int>(std::cbrt(static_cast<double>(boundary_samples))));
    for (int u = 0; u <= m; ++u)
      for (int v = 0; v <= m; ++v) {
        double s0 = static_cast<double>(u) / m, s1 = static_cast<double>(v) / m;
        for (int axis = 0; axis < 3; ++axis) {
          Vec<3> plo, phi;
          int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
          plo[axis] = b.lo[axis];
          phi[axis] = b.hi[axis];
          plo[a1] = phi[a1] = b.lo[a1] + s0 * b.extent(a1);
          plo[a2] = phi[a2] = b.lo[a2] + s1 * b.extent(a2);
          absorb(plo);
          absorb(phi);
        }
      }
  }
  s.bbox = out.padded(0.05);
  return s;
}

template <int N>
MappingSpec<N> identity_mapping(const ImplicitSet<N>& domain) {
  MappingSpec<N> m;
  m.kind = MappingKind::Identity;
  m.name = "identity";
  m.forward = [](const Vec<N>& x) { return x; };
  m.inverse = [](const Vec<N>& x) { return x; };
  m.jacobian = [](const Vec<N>&) { return Mat<N>::identity(); };
  m.domain = domain;
  m.codomain = domain;
  m.scale = domain.bbox.max_extent();
  return m;
}

template <int N>
MappingSpec<N> linear_mapping(const Mat<N>& A, const ImplicitSet<N>& domain) {
  Mat<N> Ainv = A.inverse();  // throws when singular
  MappingSpec<N> m;
  m.kind = MappingKind::Linear;
  m.name = "linear";
  m.forward = [A](const Vec<N>& x) { return A.apply(x); };
  m.inverse = [Ainv](const Vec<N>& y) { return Ainv.apply(y); };
  m.jacobian = [A](const Vec<N>&) { return A; };
  m.domain = domain;
  m.codomain = preimage_set<N>(domain, m.inverse, m.forward);
  m.codomain.kind = SetKind::Preimage;
  m.scale = domain.bbox.max_extent();
  return m;
}

// x -> |x|^(alpha-1) x. Inverse is the stretch with exponent 1/alpha.
// Dphi has singular values alpha*|x|^(alpha-1) (radial) and |x|^(alpha-1)
// (tangential, multiplicity N-1).
template <int N>
MappingSpec<N> radial_stretch_mapping(double alpha, const ImplicitSet<N>& domain) {
  if (!(alpha > 0)) throw std::invalid_argument("radial stretch exponent must be positive");
  auto stretch = [](double a, const Vec<N>& x) -> Vec<N> {
    double r = norm(x);
    if (r == 0) return x;
    return x * std::pow(r, a - 1);
  };
  MappingSpec<N> m;
  m.kind = MappingKind::RadialStretch;
  m.name = "radial_stretch";
  m.forward = [alpha, stretch](const Vec<N>& x) { return stretch(alpha, x); };
  m.inverse = [alpha, stretch](const Vec<N>& y) { return stretch(1.0 / alpha, y); };
  m.jacobian = [alpha](const Vec<N>& x) {
    double r = norm(x);
    Mat<N> J;
    if (r == 0) {
      // derivative at the origin: 0 for alpha>1, identity at alpha=1
      if (alpha == 1.0) return Mat<N>::identity();
      if (alpha < 1.0) {
        for (int i = 0; i < N; ++i) J(i, i) = std::numeric_limits<double>::infinity();
        return J;
      }
      return J;
    }
    double rp = std::pow(r, alpha - 1);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        J(i, j) = rp * ((i == j ? 1.0 : 0.0) + (alpha - 1) * x[i] * x[j] / (r * r));
    return J;
  };
  m.domain = domain;
  m.codomain = preimage_set<N>(domain, m.inverse, m.forward);
  m.scale = domain.bbox.max_extent();
  m.singular_points.push_back(Vec<N>{});
  return m;
}

template <int N>
MappingSpec<N> composed_mapping(const std::vector<MappingSpec<N>>& parts) {
  if (parts.empty()) throw std::invalid_argument("composition needs at least one mapping");
  MappingSpec<N> m;
  m.kind = MappingKind::Composed;
  m.name = "composed";
  auto chain = parts;  // applied first-to-last
  m.forward = [chain](const Vec<N>& x) {
    Vec<N> y = x;
    for (const auto& part : chain) y = part.forward(y);
    return y;
  };
  m.inverse = [chain](const Vec<N>& y) {
    Vec<N> x = y;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) x = it->inverse(x);
    return x;
  };
  m.jacobian = [chain](const Vec<N>& x) {
    Vec<N> y = x;
    Mat<N> J = Mat<N>::identity();
    for (const auto& part : chain) {
      J = part.jacobian(y).mul(J);
      y = part.forward(y);
    }
    return J;
  };
  m.domain = parts.front().domain;
  m.codomain = preimage_set<N>(m.domain, m.inverse, m.forward);
  m.scale = m.domain.bbox.max_extent();
  for (const auto& part : parts)
    for (const auto& sp : part.singular_points) m.singular_points.push_back(sp);
  return m;
}

// The inverse homeomorphism as a MappingSpec of its own: roles of domain and
// codomain swap, and the Jacobian is the matrix inverse evaluated at the
// preimage point.
template <int N>
MappingSpec<N> inverse_mapping(const MappingSpec<N>& phi) {
  MappingSpec<N> inv;
  inv.kind = phi.kind == MappingKind::Identity ? MappingKind::Identity : MappingKind::Composed;
  inv.name = phi.name + "^-1";
  inv.forward = phi.inverse;
  inv.inverse = phi.forward;
  // D(phi^-1)(y) = (Dphi(x))^-1 at x = phi^-1(y)
  auto jac = phi.jacobian;
  auto phi_inv = phi.inverse;
  inv.jacobian = [phi_inv, jac](const Vec<N>& y) { return jac(phi_inv(y)).inverse(); };
  inv.domain = phi.codomain;
  inv.codomain = phi.domain;
  inv.scale = inv.domain.bbox.max_extent();
  for (const auto& sp : phi.singular_points) inv.singular_points.push_back(phi.forward(sp));
  return inv;
}

// Finite-difference Jacobian, used by validation tests against the analytic one.
template <int N>
Mat<N> jacobian_fd(const MappingSpec<N>& phi, const Vec<N>& x, double step_rel = 1e-5) {
  double step = step_rel * std::max(phi.scale, 1e-12);
  Mat<N> J;
  for (int j = 0; j < N; ++j) {
    Vec<N> xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    Vec<N> fp = phi.forward(xp), fm = phi.forward(xm);
    for (int i = 0; i < N; ++i) J(i, j) = (fp[i] - fm[i]) / (2 * step);
  }
  return J;
}

// Round-trip validation: forward(inverse(y)) = y on sampled codomain points.
template <int N>
bool validate_round_trip(const MappingSpec<N>& phi, int samples, double tol_rel,
                         uint64_t seed = 3) {
  Rng rng(seed);
  double tol = tol_rel * std::max(phi.scale, 1e-12);
  int checked = 0;
  for (int k = 0; k < samples * 4 && checked < samples; ++k) {
    Vec<N> y = rng.point_in(phi.codomain.bbox);
    if (!phi.codomain.member(y)) continue;
    ++checked;
    Vec<N> y2 = phi.forward(phi.inverse(y));
    if (dist(y, y2) > tol) return false;
  }
  return checked > 0;
}

// ---------------------------------------------------------------------------
// Distortion quantities.
// ---------------------------------------------------------------------------

struct NotFiniteDistortion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// K_p(x) = |Dphi(x)| / |J(x,phi)|^{1/p}. Degenerate Jacobian with a
// non-degenerate differential signals undefined distortion; if both vanish
// the finite-distortion convention gives 0.
template <int N>
double dilatation_p(const MappingSpec<N>& phi, const Vec<N>& x, double p) {
  if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
  Mat<N> D = phi.jacobian(x);
  double opn = operator_norm(D);
  double J = std::abs(D.det());
  double scale = std::max(phi.scale, 1e-12);
  double j_floor = 1e-12 * std::pow(scale, N);
  double d_floor = 1e-6 * scale;
  if (J < j_floor) {
    if (opn > d_floor)
      throw NotFiniteDistortion("distortion undefined / not finite distortion at sample point");
    return 0.0;
  }
  return opn / std::pow(J, 1.0 / p);
}

struct DistortionReport {
  double p = 0, q = 0;
  double kappa = 0;  // infinity when p == q
  double K_pq = 0;
  double refinement_delta = 0;  // p==q: fine max minus coarse max
  std::size_t quadrature_nodes = 0;
  bool finite_distortion_ok = true;
  std::vector<double> Kp_samples;  // kept small; diagnostics only
};

inline double kappa_of(double p, double q) {
  if (p == q) return std::numeric_limits<double>::infinity();
  return p * q / (p - q);
}

// K_{p,q}(phi; Omega): ess-sup of K_p over quadrature nodes when p == q,
// otherwise the L_kappa norm by midpoint quadrature over domain cells.
// Cells within 2h of a singular point are excluded.
template <int N>
DistortionReport distortion_norm(const MappingSpec<N>& phi, double p, double q,
                                 const Grid<N>& quadrature) {
  if (!(q >= 1) || !(p >= q)) throw std::invalid_argument("require 1 <= q <= p");
  DistortionReport rep;
  rep.p = p;
  rep.q = q;
  rep.kappa = kappa_of(p, q);

  const double h = quadrature.h;
  const double puncture = 2 * h;
  double hn = std::pow(h, N);
  double sum_fine = 0, max_fine = 0, max_coarse = 0;
  std::size_t used = 0;

  std::array<int, N> idx{};
  std::size_t total = quadrature.total_cells();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = N - 1; i >= 0; --i) {
      idx[static_cast<size_t>(i)] =
          static_cast<int>(rem % static_cast<size_t>(quadrature.cells[static_cast<size_t>(i)]));
      rem /= static_cast<size_t>(quadrature.cells[static_cast<size_t>(i)]);
    }
    Vec<N> c = quadrature.node(idx);
    for (int i = 0; i < N; ++i) c[i] += h / 2;  // cell midpoint
    if (!phi.domain.member(c)) continue;
    bool punctured = false;
    for (const auto& sp : phi.singular_points)
      if (dist(c, sp) < puncture) punctured = true;
    if (punctured) continue;

    double kp;
    try {
      kp = dilatation_p(phi, c, p);
    } catch (const NotFiniteDistortion&) {
      rep.finite_distortion_ok = false;
      continue;
    }
    ++used;
    if (rep.Kp_samples.size() < 64) rep.Kp_samples.push_back(kp);
    max_fine = std::max(max_fine, kp);
    bool coarse = true;
    for (int i = 0; i < N; ++i) coarse = coarse && (idx[static_cast<size_t>(i)] % 2 == 0);
    if (coarse) max_coarse = std::max(max_coarse, kp);
    if (p != q) sum_fine += std::pow(kp, rep.kappa) * hn;
  }
  rep.quadrature_nodes = used;
  if (used == 0) throw std::runtime_error("no quadrature nodes inside the mapping domain");
  if (p == q) {
    rep.K_pq = max_fine;
    rep.refinement_delta = max_fine - max_coarse;
  } else {
    rep.K_pq = std::pow(sum_fine, 1.0 / rep.kappa);
    rep.refinement_delta = 0;
  }
  return rep;
}

struct FiniteDistortionResult {
  bool ok = true;
  std::vector<Vec<2>> violations2;  // populated for the active dimension only
  std::vector<Vec<3>> violations3;
  std::size_t checked = 0;
};

template <int N>
FiniteDistortionResult finite_distortion_check(const MappingSpec<N>& phi, int samples,
                                               uint64_t seed = 17) {
  FiniteDistortionResult out;
  Rng rng(seed);
  double scale = std::max(phi.scale, 1e-12);
  double j_floor = 1e-12 * std::pow(scale, N);
  double d_floor = 1e-6 * scale;
  for (int k = 0; k < samples * 4 && out.checked < static_cast<size_t>(samples); ++k) {
    Vec<N> x = rng.point_in(phi.domain.bbox);
    if (!phi.domain.member(x)) continue;
    ++out.checked;
    Mat<N> D = phi.jacobian(x);
    double J = std::abs(D.det());
    double opn = operator_norm(D);
    if (J < j_floor && opn > d_floor) {
      out.ok = false;
      if constexpr (N == 2) out.violations2.push_back(x);
      else out.violations3.push_back(x);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pullback of a ring condenser: (phi^{-1}(F); phi^{-1}(G)).
// ---------------------------------------------------------------------------

template <int N>
RingCondenser<N> pullback_condenser(const MappingSpec<N>& phi, const RingCondenser<N>& R) {
  // invertibility spot-check on the needed region
  Rng rng(23);
  double tol = 1e-6 * std::max(phi.scale, 1e-12);
  for (int k = 0; k < 64; ++k) {
    Vec<N> y = rng.point_in(R.G.bbox);
    Vec<N> y2 = phi.forward(phi.inverse(y));
    if (!(dist(y, y2) <= tol))
      throw std::runtime_error("mapping not invertible on the needed region");
  }
  RingCondenser<N> out;
  out.F = preimage_set<N>(R.F, phi.forward, phi.inverse);
  out.G = preimage_set<N>(R.G, phi.forward, phi.inverse);
  out.ambient = preimage_set<N>(R.ambient, phi.forward, phi.inverse);
  out.id = R.id.empty() ? "pullback" : ("pullback(" + R.id + ")");
  return out;
}

}  // namespace ringcap
