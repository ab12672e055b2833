#pragma once

#include <map>
#include <mutex>

#include "ringcap/capacity.hpp"
#include "ringcap/capmetric.hpp"
#include "ringcap/mappings.hpp"

namespace ringcap {

// Pullbacks with a closed form: the identity, and radial stretches acting on
// origin-centred ball rings (preimage of radius rho is rho^{1/alpha}).
template <int N>
std::optional<RingCondenser<N>> analytic_pullback(const MappingSpec<N>& phi,
                                                  const RingCondenser<N>& R) {
  if (phi.kind == MappingKind::Identity) return R;
  if (phi.kind == MappingKind::RadialStretch && is_concentric_ball_ring(R)) {
    double c = norm(R.G.ball->center);
    if (c < 1e-12 * R.G.ball->radius) {
      // recover alpha from the forward map on the unit-offset point
      Vec<N> e{};
      e[0] = 2.0;
      double alpha = std::log(norm(phi.forward(e))) / std::log(2.0);
      double rf = std::pow(R.F.ball->radius, 1.0 / alpha);
      double rg = std::pow(R.G.ball->radius, 1.0 / alpha);
      ImplicitSet<N> amb = make_box_set<N>(make_cube(Vec<N>{}, rg * 1.5), true);
      auto out = make_ball_ring<N>(Vec<N>{}, rf, rg, amb);
      out.id = R.id.empty() ? "pullback" : ("pullback(" + R.id + ")");
      return out;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Ring capacity inequality verification.
// ---------------------------------------------------------------------------

struct RingInequalityRecord {
  std::string id;
  double lhs = 0;       // cp_q^{1/q} of the pulled-back condenser
  double rhs_base = 0;  // cp_p^{1/p} of the original condenser
  double ratio = 0;     // lhs / rhs_base
  double bound = 0;     // K_p, or K_{p,q} * rhs_base in the (p,q) case
  double slack = 0;     // bound*(1+tol) - compared quantity
  double phi_lower = 0; // ratio^kappa, a lower estimate of the set function
  bool converged = true;
  bool skipped = false;
  std::string skip_reason;
};

struct RingVerification {
  std::vector<RingInequalityRecord> records;
  double p = 0, q = 0;
  double sup_ratio = 0;  // empirical constant over the batch
  double K = 0;          // K_p or K_{p,q} from the distortion norm
  double tol = 0;
  bool ok = true;
  std::vector<std::string> violations;
};

struct VerifyOptions {
  int res = 160;            // capacity solve resolution
  int distortion_res = 192; // quadrature resolution for K
  double tol = 0.03;
  bool force_grid = false;
  SolverOptions solver;
};

namespace detail {

template <int N>
CapacityResult solve_side(const RingCondenser<N>& R, double exponent,
                          const VerifyOptions& opts) {
  RingSolveOptions ro;
  ro.res = opts.res;
  ro.solver = opts.solver;
  ro.force_grid = opts.force_grid;
  return ring_capacity(R, exponent, ro);
}

template <int N>
RingCondenser<N> pullback_for(const MappingSpec<N>& phi, const RingCondenser<N>& R,
                              bool allow_analytic) {
  if (allow_analytic)
    if (auto a = analytic_pullback(phi, R)) return *a;
  return pullback_condenser(phi, R);
}

}  // namespace detail

// ratio check against the weak p-quasiconformal constant: for every ring
// condenser, cp_p^{1/p}(pullback) <= K_p * cp_p^{1/p}(original)
template <int N>
RingVerification verify_ring_pp(const MappingSpec<N>& phi,
                                const std::vector<RingCondenser<N>>& condensers, double p,
                                const VerifyOptions& opts) {
  if (!(p > N - 1)) throw std::invalid_argument("require p > n-1");
  RingVerification out;
  out.p = out.q = p;
  out.tol = opts.tol;
  Grid<N> qgrid = Grid<N>::covering(phi.domain.bbox, opts.distortion_res);
  out.K = distortion_norm(phi, p, p, qgrid).K_pq;

  out.records.resize(condensers.size());
  parallel_for(condensers.size(), [&](std::size_t i) {
    RingInequalityRecord rec;
    const auto& R = condensers[i];
    rec.id = R.id.empty() ? ("ring-" + std::to_string(i)) : R.id;
    try {
      auto rhs = detail::solve_side(R, p, opts);
      if (rhs.value < 1e-14) {
        rec.skipped = true;
        rec.skip_reason = "zero base capacity";
      } else {
        auto pull = detail::pullback_for(phi, R, !opts.force_grid);
        auto lhs = detail::solve_side(pull, p, opts);
        rec.lhs = std::pow(lhs.value, 1.0 / p);
        rec.rhs_base = std::pow(rhs.value, 1.0 / p);
        rec.ratio = rec.lhs / rec.rhs_base;
        rec.converged = lhs.converged && rhs.converged;
      }
    } catch (const std::exception& e) {
      rec.skipped = true;
      rec.skip_reason = e.what();
    }
    out.records[i] = rec;
  });

  for (auto& rec : out.records) {
    if (rec.skipped) continue;
    rec.bound = out.K;
    rec.slack = out.K * (1 + opts.tol) - rec.ratio;
    if (!rec.converged) continue;  // flagged, excluded from the sup
    out.sup_ratio = std::max(out.sup_ratio, rec.ratio);
    if (rec.slack < 0) {
      out.ok = false;
      out.violations.push_back(rec.id);
    }
  }
  return out;
}

// (p,q) check: cp_q^{1/q}(pullback) <= K_{p,q} * cp_p^{1/p}(original).
// Each record also carries ratio^kappa, the condenser's lower estimate of
// the capacity set function.
template <int N>
RingVerification verify_ring_pq(const MappingSpec<N>& phi,
                                const std::vector<RingCondenser<N>>& condensers, double p,
                                double q, const VerifyOptions& opts) {
  if (!(q > N - 1) || !(q < p)) throw std::invalid_argument("require n-1 < q < p");
  RingVerification out;
  out.p = p;
  out.q = q;
  out.tol = opts.tol;
  Grid<N> qgrid = Grid<N>::covering(phi.domain.bbox, opts.distortion_res);
  out.K = distortion_norm(phi, p, q, qgrid).K_pq;
  const double kappa = kappa_of(p, q);

  out.records.resize(condensers.size());
  parallel_for(condensers.size(), [&](std::size_t i) {
    RingInequalityRecord rec;
    const auto& R = condensers[i];
    rec.id = R.id.empty() ? ("ring-" + std::to_string(i)) : R.id;
    try {
      auto rhs = detail::solve_side(R, p, opts);
      if (rhs.value < 1e-14) {
        rec.skipped = true;
        rec.skip_reason = "zero base capacity";
      } else {
        auto pull = detail::pullback_for(phi, R, !opts.force_grid);
        auto lhs = detail::solve_side(pull, q, opts);
        rec.lhs = std::pow(lhs.value, 1.0 / q);
        rec.rhs_base = std::pow(rhs.value, 1.0 / p);
        rec.ratio = rec.lhs / rec.rhs_base;
        rec.phi_lower = std::pow(rec.ratio, kappa);
        rec.converged = lhs.converged && rhs.converged;
      }
    } catch (const std::exception& e) {
      rec.skipped = true;
      rec.skip_reason = e.what();
    }
    out.records[i] = rec;
  });

  for (auto& rec : out.records) {
    if (rec.skipped) continue;
    rec.bound = out.K * rec.rhs_base;
    rec.slack = rec.bound * (1 + opts.tol) - rec.lhs;
    if (!rec.converged) continue;
    out.sup_ratio = std::max(out.sup_ratio, rec.ratio);
    if (rec.slack < 0) {
      out.ok = false;
      out.violations.push_back(rec.id);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Condenser sampler. A fixed master list of candidates is drawn once from a
// reference frame; an estimate over a region uses exactly the candidates
// whose outer set fits inside it. Nested regions therefore use nested sample
// sets and the estimates are monotone by construction.
// ---------------------------------------------------------------------------

template <int N>
struct CondenserCandidate {
  int index = 0;
  bool is_box = false;
  Vec<N> center{};
  double r_F = 0, r_G = 0;          // ball rings
  BoxCondenserParams box_params{};  // box condensers (centred at `center`)

  // half-extent of the outer set, any shape
  double outer_radius() const {
    if (!is_box) return r_G;
    return box_params.r * (1 + box_params.t) * std::sqrt(static_cast<double>(N));
  }
};

template <int N>
struct CondenserSampler {
  std::vector<CondenserCandidate<N>> candidates;
  uint64_t stamp = 0;  // identifies the master list in ratio caches

  // absolute sizes relative to the frame extent; every 16th candidate is a
  // box condenser with aspect t cycling over {0.1, 0.5, 1}
  static CondenserSampler master(const BoxN<N>& frame, uint64_t seed, int count,
                                 double r_rel_min = 0.03, double r_rel_max = 0.10) {
    CondenserSampler s;
    Rng rng(seed ^ 0xc0d5ULL);
    const double L = frame.max_extent();
    uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    auto mix = [&h](double v) {
      uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h = (h ^ bits) * 0x100000001b3ULL;
    };
    for (int i = 0; i < N; ++i) {
      mix(frame.lo[i]);
      mix(frame.hi[i]);
    }
    mix(r_rel_min);
    mix(r_rel_max);
    mix(static_cast<double>(count));
    s.stamp = h;
    int boxes = 0;
    for (int k = 0; k < count; ++k) {
      CondenserCandidate<N> c;
      c.index = k;
      c.center = rng.point_in(frame);
      double rG = rng.uniform(r_rel_min, r_rel_max) * L;
      double ratio = rng.uniform(1.5, 4.0);
      if (k % 16 == 15) {
        static constexpr double aspects[3] = {0.1, 0.5, 1.0};
        c.is_box = true;
        c.box_params.t = aspects[boxes++ % 3];
        c.box_params.r = rG / (1 + c.box_params.t);  // keeps G within ~2 rG
        c.box_params.lambda.assign(static_cast<size_t>(N), 1.0);
      } else {
        c.r_G = rG;
        c.r_F = rG / ratio;
      }
      s.candidates.push_back(c);
    }
    return s;
  }

  // sizes relative to a ball of radius r (used by density quotients); the
  // narrow radius band keeps the witness scale tied to r
  static CondenserSampler scaled_for_ball(const Vec<N>& center, double r, uint64_t seed,
                                          int count) {
    BoxN<N> frame = make_cube(center, r * 0.55);
    return master(frame, seed, count, 0.16, 0.2);
  }
};

template <int N>
RingCondenser<N> candidate_condenser(const CondenserCandidate<N>& c, double plate_tau) {
  if (c.is_box) {
    auto R = make_box_condenser<N>(c.box_params, plate_tau);
    // translate to the candidate centre
    auto shift = [&](ImplicitSet<N>& s) {
      auto base = s.member;
      Vec<N> ctr = c.center;
      s.member = [base, ctr](const Vec<N>& x) { return base(x - ctr); };
      for (int i = 0; i < N; ++i) {
        s.bbox.lo[i] += ctr[i];
        s.bbox.hi[i] += ctr[i];
      }
      if (s.box)
        for (int i = 0; i < N; ++i) {
          s.box->lo[i] += ctr[i];
          s.box->hi[i] += ctr[i];
        }
    };
    shift(R.F);
    shift(R.G);
    shift(R.ambient);
    R.id = "box-" + std::to_string(c.index);
    return R;
  }
  ImplicitSet<N> amb = make_box_set<N>(make_cube(c.center, c.r_G * 1.5), true);
  auto R = make_ball_ring<N>(c.center, c.r_F, c.r_G, amb);
  R.id = "ring-" + std::to_string(c.index);
  return R;
}

// membership probe: does the candidate's outer set fit inside the region?
template <int N>
bool candidate_fits(const CondenserCandidate<N>& c, const ImplicitSet<N>& region) {
  if (!region.member(c.center)) return false;
  std::vector<Vec<N>> probes;
  if (c.is_box) {
    double t = c.box_params.t, r = c.box_params.r;
    BoxN<N> g;
    for (int i = 0; i + 1 < N; ++i) {
      g.lo[i] = c.center[i] - (r + r * t);
      g.hi[i] = c.center[i] + (r + r * t);
    }
    g.lo[N - 1] = c.center[N - 1] - r * t;
    g.hi[N - 1] = c.center[N - 1] + r * t;
    for (int corner = 0; corner < (1 << N); ++corner) {
      Vec<N> q;
      for (int i = 0; i < N; ++i) q[i] = ((corner >> i) & 1) ? g.hi[i] : g.lo[i];
      probes.push_back(q);
    }
  } else {
    const int dirs = N == 2 ? 32 : 64;
    Rng rng(static_cast<uint64_t>(c.index) * 7919 + 13);
    for (int k = 0; k < dirs; ++k) {
      Vec<N> u;
      if constexpr (N == 2) {
        double a = 2 * M_PI * k / dirs;
        u = {std::cos(a), std::sin(a)};
      } else {
        double z = rng.uniform(-1, 1), phi = rng.uniform(0, 2 * M_PI);
        double rr = std::sqrt(std::max(1 - z * z, 0.0));
        u = {rr * std::cos(phi), rr * std::sin(phi), z};
      }
      probes.push_back(c.center + u * (c.r_G * 1.001));
    }
  }
  for (const auto& q : probes)
    if (!region.member(q)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Capacity set function estimates.
// ---------------------------------------------------------------------------

struct SetFunctionEstimate {
  double psi_value = 0;
  int sampled_condensers = 0;
  std::string best_witness;
};

struct VariationEstimate {
  std::vector<SetFunctionEstimate> per_set;
  double total = 0;
  double bound_M = 0;
  bool ok = true;
};

struct PsiOptions {
  int res = 64;             // capacity solve resolution per candidate
  int distortion_res = 160;
  double tol = 0.05;
  SolverOptions solver;
};

// Shared ratio cache keyed by candidate index, so nested or partitioned
// estimates reuse solves and seed-extension holds exactly.
template <int N>
class PsiEngine {
 public:
  PsiEngine(MappingSpec<N> phi, double p, double q, PsiOptions opts)
      : phi_(std::move(phi)), p_(p), q_(q), opts_(opts) {
    if (!(q_ >= 1) || !(q_ < p_)) throw std::invalid_argument("require 1 <= q < p");
    kappa_ = kappa_of(p_, q_);
  }

  double kappa() const { return kappa_; }

  double K_pq() {
    if (!K_) {
      Grid<N> g = Grid<N>::covering(phi_.domain.bbox, opts_.distortion_res);
      K_ = distortion_norm(phi_, p_, q_, g).K_pq;
    }
    return *K_;
  }

  // sampled lower estimate of the set function on the region
  SetFunctionEstimate psi(const ImplicitSet<N>& region, const CondenserSampler<N>& sampler,
                          int budget) {
    if (budget < 10) throw std::invalid_argument("budget must be at least 10");
    std::vector<const CondenserCandidate<N>*> fit;
    int considered = 0;
    for (const auto& c : sampler.candidates) {
      if (considered++ >= budget) break;
      if (candidate_fits(c, region)) fit.push_back(&c);
    }
    if (fit.empty())
      throw std::invalid_argument("no valid condenser fits inside the region");
    ensure_ratios(sampler.stamp, fit);

    SetFunctionEstimate est;
    est.sampled_condensers = static_cast<int>(fit.size());
    for (const auto* c : fit) {
      double r = ratio_cache_.at({sampler.stamp, c->index});
      if (!std::isfinite(r)) continue;  // skipped (zero base capacity)
      double v = std::pow(r, kappa_);
      if (v > est.psi_value) {
        est.psi_value = v;
        est.best_witness = (c->is_box ? "box-" : "ring-") + std::to_string(c->index);
      }
    }
    return est;
  }

  VariationEstimate variation(const std::vector<BoxN<N>>& partition,
                              const CondenserSampler<N>& sampler, int budget) {
    for (std::size_t i = 0; i < partition.size(); ++i)
      for (std::size_t j = i + 1; j < partition.size(); ++j)
        if (partition[i].overlaps(partition[j]))
          throw std::invalid_argument("overlapping partition");
    VariationEstimate out;
    out.bound_M = std::pow(K_pq(), kappa_);
    for (const auto& box : partition) {
      auto est = psi(make_box_set<N>(box, /*closed=*/false), sampler, budget);
      out.total += est.psi_value;
      out.per_set.push_back(est);
    }
    out.ok = out.total <= out.bound_M * (1 + opts_.tol);
    return out;
  }

  // quotient sequence Psi(B(x,r)) / |B(x,r)| for decreasing radii
  std::vector<double> density_quotients(const ImplicitSet<N>& omega_tilde, const Vec<N>& x,
                                        const std::vector<double>& radii, int budget,
                                        uint64_t seed) {
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
      if (!(radii[i] > radii[i + 1]))
        throw std::invalid_argument("radii must be strictly decreasing");
    std::vector<double> out;
    for (double r : radii) {
      if (!(r > 0)) throw std::invalid_argument("radii must be positive");
      auto ball = make_ball_set(x, r, false);
      const int dirs = 64;
      for (int k = 0; k < dirs; ++k) {
        double a = 2 * M_PI * k / dirs;
        Vec<N> u{};
        u[0] = std::cos(a);
        u[1] = std::sin(a);
        if (!omega_tilde.member(x + u * r))
          throw std::invalid_argument("ball escapes the domain");
      }
      auto sampler = CondenserSampler<N>::scaled_for_ball(x, r, seed, budget);
      auto est = psi(ball, sampler, budget);
      out.push_back(est.psi_value / (unit_ball_volume(N) * std::pow(r, N)));
    }
    return out;
  }

 private:
  void ensure_ratios(uint64_t stamp, const std::vector<const CondenserCandidate<N>*>& wanted) {
    std::vector<const CondenserCandidate<N>*> missing;
    for (const auto* c : wanted)
      if (!ratio_cache_.count({stamp, c->index})) missing.push_back(c);
    if (missing.empty()) return;
    std::vector<double> vals(missing.size());
    parallel_for(missing.size(), [&](std::size_t i) { vals[i] = compute_ratio(*missing[i]); });
    for (std::size_t i = 0; i < missing.size(); ++i)
      ratio_cache_[{stamp, missing[i]->index}] = vals[i];
  }

  double compute_ratio(const CondenserCandidate<N>& c) {
    double plate_tau = 0;
    if (c.is_box) {
      // tie the plate thickness to the solve grid
      double gext = 2 * (c.box_params.r + c.box_params.r * c.box_params.t);
      plate_tau = gext / opts_.res;
    }
    RingCondenser<N> R = candidate_condenser(c, plate_tau);
    // anisotropic pullbacks can under-resolve at the base resolution; retry finer
    for (int attempt = 0; attempt < 3; ++attempt) {
      RingSolveOptions ro;
      ro.res = opts_.res << attempt;
      ro.solver = opts_.solver;
      try {
        auto rhs = ring_capacity(R, p_, ro);
        if (rhs.value < 1e-14) return std::numeric_limits<double>::quiet_NaN();
        RingCondenser<N> pull;
        if (auto a = analytic_pullback(phi_, R)) {
          pull = *a;
        } else {
          pull = pullback_condenser(phi_, R);
        }
        auto lhs = ring_capacity(pull, q_, ro);
        return std::pow(lhs.value, 1.0 / q_) / std::pow(rhs.value, 1.0 / p_);
      } catch (const std::exception&) {
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  MappingSpec<N> phi_;
  double p_, q_, kappa_;
  PsiOptions opts_;
  std::optional<double> K_;
  std::map<std::pair<uint64_t, int>, double> ratio_cache_;
};

}  // namespace ringcap
