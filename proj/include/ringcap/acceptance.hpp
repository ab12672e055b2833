#pragma once

#include <iomanip>
#include <set>

#include "ringcap/runner.hpp"

namespace ringcap {

// ---------------------------------------------------------------------------
// Acceptance battery. Every check below pins its tolerance in code; the
// numeric payload of each criterion is deterministic for a fixed seed, so a
// repeated run serialises to identical bytes (checked by the final
// criterion). Wall-clock timings go to the log only, never into the summary.
// ---------------------------------------------------------------------------

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool applicable = true;
  std::string detail;
  Json payload = Json::object();
};

struct AcceptanceOptions {
  int res = 256;           // capacity resolution for the convergence criteria
  uint64_t seed = 0;
  std::set<int> only;      // empty = all criteria
  bool second_pass_logging = false;
};

struct SuiteOutcome {
  std::vector<CriterionResult> criteria;
  Json summary = Json::object();
  int exit_code = 0;
};

namespace acceptance {

constexpr double kAnnulusHalfCap = 9.064720283654388;  // 2*pi / log 2
constexpr double kTwoPi = 6.283185307179586;
constexpr double kSqrt2 = 1.4142135623730951;

inline std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100 * x);
  return buf;
}

template <int N>
RingCondenser<N> origin_ring(double r_F, double r_G) {
  ImplicitSet<N> amb = make_box_set<N>(make_cube(Vec<N>{}, r_G * 1.5), true);
  return make_ball_ring<N>(Vec<N>{}, r_F, r_G, amb);
}

// --- 1: radial oracle agreement with monotone grid convergence ------------

inline CriterionResult criterion_radial_oracle(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 1;
  c.name = "radial-oracle-agreement";
  if (opts.res < 128) {
    c.applicable = false;
    c.pass = true;
    c.detail = "insufficient resolution";
    return c;
  }
  struct Case {
    double rF, rG, oracle;
  };
  const Case cases[] = {{0.5, 1.0, kAnnulusHalfCap}, {1.0, M_E, kTwoPi}};
  const int levels[] = {opts.res / 4, opts.res / 2, opts.res};

  bool ok = true;
  double worst_final = 0, worst_time = 0;
  Json jcases = Json::array();
  for (const auto& cs : cases) {
    auto R = origin_ring<2>(cs.rF, cs.rG);
    std::vector<double> errs;
    Json jerr = Json::array();
    for (int res : levels) {
      SolverOptions sopt;
      sopt.p = 2.0;
      Stopwatch sw;
      auto cr = cap_numeric(R, sopt, Grid<2>::covering(R.G.bbox, res));
      double t = sw.seconds();
      worst_time = std::max(worst_time, t);
      double err = std::abs(cr.value - cs.oracle) / cs.oracle;
      errs.push_back(err);
      Json je = Json::object();
      je.set("res", res);
      je.set("value", cr.value);
      je.set("rel_error", (cr.value - cs.oracle) / cs.oracle);
      jerr.push_back(std::move(je));
      if (t > 60.0) ok = false;  // runtime budget per solve
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
      if (!(errs[i + 1] < errs[i])) ok = false;  // monotone decrease
    if (!(errs.back() <= 0.02)) ok = false;
    worst_final = std::max(worst_final, errs.back());
    Json jc = Json::object();
    jc.set("r_F", cs.rF);
    jc.set("r_G", cs.rG);
    jc.set("oracle", cs.oracle);
    jc.set("levels", std::move(jerr));
    jcases.push_back(std::move(jc));
  }
  c.payload.set("cases", std::move(jcases));
  c.pass = ok;
  c.detail = "final |err| " + pct(worst_final) + " (tol 2%), slowest solve " +
             format_double(worst_time, 3) + "s";
  return c;
}

// --- 2: non-conformal exponent ---------------------------------------------

inline CriterionResult criterion_nonconformal(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 2;
  c.name = "nonconformal-exponent";
  if (opts.res < 128) {
    c.applicable = false;
    c.pass = true;
    c.detail = "insufficient resolution";
    return c;
  }
  auto R = origin_ring<2>(0.5, 1.0);
  double oracle = cap_radial_oracle(0.5, 1.0, 2, 1.5);
  SolverOptions sopt;
  sopt.p = 1.5;
  auto cr = cap_numeric(R, sopt, Grid<2>::covering(R.G.bbox, opts.res));
  double err = std::abs(cr.value - oracle) / oracle;
  c.payload.set("oracle", oracle);
  c.payload.set("value", cr.value);
  c.payload.set("rel_error", (cr.value - oracle) / oracle);
  c.pass = err <= 0.03;
  c.detail = "p=1.5 |err| " + pct(err) + " (tol 3%)";
  return c;
}

// --- 3: bound bracket -------------------------------------------------------

inline CriterionResult criterion_bracket(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 3;
  c.name = "bound-bracket";
  (void)opts;

  struct Item {
    std::string label;
    double value = 0, lower = 0, upper = 0;
    bool ok = false;
  };
  std::vector<Item> items;

  auto check2d = [&](const RingCondenser<2>& R, double p, const std::string& label) {
    SolverOptions sopt;
    sopt.p = p;
    auto cr = cap_numeric(R, sopt, Grid<2>::covering(R.G.bbox, 160));
    Item it;
    it.label = label;
    it.value = cr.value;
    it.lower = cap_lower_bound_measure(R, p);
    it.upper = cap_upper_bound(R, p);
    it.ok = it.lower <= it.value && it.value <= it.upper;
    items.push_back(it);
  };

  for (double p : {1.5, 2.0, 3.0})
    check2d(origin_ring<2>(0.5, 1.0), p, "annulus(0.5,1) p=" + format_double(p, 3));
  check2d(origin_ring<2>(1.0, 2.0), 2.0, "annulus(1,2) p=2");

  {  // off-centre ball pair, boundary distance known in closed form
    Vec2 cF{{0.2, 0.1}};
    RingCondenser<2> R;
    R.F = make_ball_set(cF, 0.3, true);
    R.G = make_ball_set<2>({{0, 0}}, 0.8, false);
    R.ambient = make_box_set<2>(make_cube(Vec2{}, 1.2), true);
    R.dist_F_boundary_G = 0.8 - norm(cF) - 0.3;
    R.id = "offset-ball";
    check2d(R, 2.0, "offset ball ring p=2");
  }
  {  // box in box
    RingCondenser<2> R;
    R.F = make_box_set<2>({{-0.3, -0.3}, {0.3, 0.3}}, true);
    R.G = make_box_set<2>({{-1, -1}, {1, 1}}, false);
    R.ambient = make_box_set<2>(make_cube(Vec2{}, 1.5), true);
    R.dist_F_boundary_G = 0.7;
    R.id = "box-in-box";
    check2d(R, 2.0, "box in box p=2");
  }
  {  // 3D shell
    auto R = origin_ring<3>(1.0, 2.0);
    SolverOptions sopt;
    sopt.p = 2.0;
    auto cr = cap_numeric(R, sopt, Grid<3>::covering(R.G.bbox, 48));
    Item it;
    it.label = "ball shell 3D (1,2) p=2";
    it.value = cr.value;
    it.lower = cap_lower_bound_measure(R, 2.0);
    it.upper = cap_upper_bound(R, 2.0);
    it.ok = it.lower <= it.value && it.value <= it.upper;
    items.push_back(it);
  }

  int violations = 0;
  Json arr = Json::array();
  for (const auto& it : items) {
    if (!it.ok) ++violations;
    Json j = Json::object();
    j.set("case", it.label);
    j.set("lower", it.lower);
    j.set("value", it.value);
    j.set("upper", it.upper);
    j.set("ok", it.ok);
    arr.push_back(std::move(j));
  }
  c.payload.set("cases", std::move(arr));
  c.pass = violations == 0;
  c.detail = std::to_string(items.size()) + " condensers, " + std::to_string(violations) +
             " violations";
  return c;
}

// --- 4: equality case of the p-QC ring inequality --------------------------

inline CriterionResult criterion_equality_case(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 4;
  c.name = "ring-pp-equality-radial";
  if (opts.res < 128) {
    c.applicable = false;
    c.pass = true;
    c.detail = "insufficient resolution";
    return c;
  }
  const double alpha = 4.0;
  bool ok = true;

  // oracle arithmetic: ratio must equal sqrt(alpha) = 2
  double worst_oracle = 0;
  Json joracle = Json::array();
  for (auto [rF, rG] : std::vector<std::pair<double, double>>{
           {0.0625, 0.5}, {0.1, 0.4}, {0.2, 0.7}}) {
    double lhs = cap_radial_oracle(std::pow(rF, 1 / alpha), std::pow(rG, 1 / alpha), 2, 2.0);
    double rhs = cap_radial_oracle(rF, rG, 2, 2.0);
    double ratio = std::sqrt(lhs / rhs);
    worst_oracle = std::max(worst_oracle, std::abs(ratio - 2.0) / 2.0);
    Json j = Json::object();
    j.set("r_F", rF);
    j.set("r_G", rG);
    j.set("ratio", ratio);
    joracle.push_back(std::move(j));
  }
  if (worst_oracle > 0.01) ok = false;

  // grid solves of both sides
  double worst_grid = 0;
  Json jgrid = Json::array();
  for (auto [rF, rG] : std::vector<std::pair<double, double>>{{0.0625, 0.5}, {0.25, 0.75}}) {
    SolverOptions sopt;
    sopt.p = 2.0;
    auto Rorig = origin_ring<2>(rF, rG);
    auto Rpull = origin_ring<2>(std::pow(rF, 1 / alpha), std::pow(rG, 1 / alpha));
    auto lo = cap_numeric(Rpull, sopt, Grid<2>::covering(Rpull.G.bbox, opts.res));
    auto ro = cap_numeric(Rorig, sopt, Grid<2>::covering(Rorig.G.bbox, opts.res));
    double ratio = std::sqrt(lo.value / ro.value);
    worst_grid = std::max(worst_grid, std::abs(ratio - 2.0) / 2.0);
    Json j = Json::object();
    j.set("r_F", rF);
    j.set("r_G", rG);
    j.set("ratio", ratio);
    jgrid.push_back(std::move(j));
  }
  if (worst_grid > 0.04) ok = false;

  c.payload.set("oracle_ratios", std::move(joracle));
  c.payload.set("grid_ratios", std::move(jgrid));
  c.pass = ok;
  c.detail = "oracle dev " + pct(worst_oracle) + " (tol 1%), grid dev " + pct(worst_grid) +
             " (tol 4%)";
  return c;
}

// --- 5: off-centre rings under a linear stretch ----------------------------

inline CriterionResult criterion_offcenter_linear(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 5;
  c.name = "ring-pp-offcenter-linear";
  ImplicitSet<2> tilde = make_box_set<2>({{-1, -1}, {1, 1}}, false);
  auto phi = parse_mapping2("linear:2,0,0,1", tilde);
  auto rings = parse_ring_batch2("offcenter:5", tilde, opts.seed);
  VerifyOptions vopt;
  vopt.res = std::min(opts.res, 192);
  vopt.tol = 0.03;
  auto ver = verify_ring_pp(phi, rings, 2.0, vopt);
  c.payload.set("verification", pipelines::verification_json(ver));
  c.pass = ver.ok && ver.sup_ratio <= kSqrt2 * 1.03;
  c.detail = "sup ratio " + format_double(ver.sup_ratio, 5) + " vs bound " +
             format_double(kSqrt2 * 1.03, 5);
  return c;
}

// --- 6: (p,q) ring inequality ----------------------------------------------

inline CriterionResult criterion_ring_pq(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 6;
  c.name = "ring-pq-linear";
  ImplicitSet<2> tilde = make_box_set<2>({{-1, -1}, {1, 1}}, false);
  auto phi = parse_mapping2("linear:2,0,0,1", tilde);
  auto rings = parse_ring_batch2("offcenter:10", tilde, opts.seed + 1);
  VerifyOptions vopt;
  vopt.res = std::min(opts.res, 160);
  vopt.tol = 0.03;
  auto ver = verify_ring_pq(phi, rings, 3.0, 2.0, vopt);
  double min_slack_rel = std::numeric_limits<double>::infinity();
  for (const auto& r : ver.records) {
    if (r.skipped) continue;
    min_slack_rel = std::min(min_slack_rel, (r.bound - r.lhs) / r.bound);
  }
  c.payload.set("verification", pipelines::verification_json(ver));
  c.payload.set("min_slack_rel", min_slack_rel);
  c.pass = ver.ok && min_slack_rel >= -0.03;
  c.detail = "min relative slack " + pct(min_slack_rel) + " (tol -3%)";
  return c;
}

// --- 7: positivity and monotonicity of the capacity set function -----------

inline CriterionResult criterion_setfunc_monotone(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 7;
  c.name = "setfunc-positive-monotone";
  ImplicitSet<2> tilde = make_ball_set<2>({{0, 0}}, 1.0, false);
  auto phi = parse_mapping2("radial:4", tilde);
  PsiOptions popt;
  popt.res = 64;
  PsiEngine<2> engine(phi, 3.0, 2.0, popt);
  const int budget = 64;
  auto sampler = CondenserSampler<2>::master(tilde.bbox, opts.seed, budget, 0.02, 0.06);

  // candidates actually inside the disk (centres are drawn in its bbox)
  std::vector<const CondenserCandidate<2>*> usable;
  for (const auto& cand : sampler.candidates)
    if (candidate_fits(cand, tilde)) usable.push_back(&cand);

  Rng rng(opts.seed ^ 0xAB1EULL);
  int positive = 0, monotone = 0;
  const int pairs = 20;
  Json jpairs = Json::array();
  for (int k = 0; k < pairs; ++k) {
    // nest two boxes around a sampled candidate so both regions are non-empty
    const auto& cand = *usable[static_cast<size_t>(rng.uniform_int(static_cast<int>(usable.size())))];
    double half1 = cand.outer_radius() * 1.4 + 0.03;
    double half2 = half1 * rng.uniform(1.4, 2.2);
    auto A1 = make_intersection(make_box_set<2>(make_cube(cand.center, half1), false), tilde);
    auto A2 = make_intersection(make_box_set<2>(make_cube(cand.center, half2), false), tilde);
    auto e1 = engine.psi(A1, sampler, budget);
    auto e2 = engine.psi(A2, sampler, budget);
    if (e1.psi_value > 0 && e2.psi_value > 0) ++positive;
    if (e1.psi_value <= e2.psi_value) ++monotone;
    Json j = Json::object();
    j.set("psi_inner", e1.psi_value);
    j.set("psi_outer", e2.psi_value);
    j.set("inner_samples", e1.sampled_condensers);
    j.set("outer_samples", e2.sampled_condensers);
    jpairs.push_back(std::move(j));
  }
  // identity positivity on the full region as an extra sampled open set
  auto engine_id = PsiEngine<2>(parse_mapping2("identity", tilde), 3.0, 2.0, popt);
  auto full = engine_id.psi(tilde, sampler, budget);

  c.payload.set("nested_pairs", std::move(jpairs));
  c.payload.set("identity_psi_full", full.psi_value);
  c.pass = positive == pairs && monotone == pairs && full.psi_value > 0;
  c.detail = std::to_string(monotone) + "/" + std::to_string(pairs) + " monotone, " +
             std::to_string(positive) + "/" + std::to_string(pairs) + " positive";
  return c;
}

// --- 8: variation bound over a 16-box partition -----------------------------

inline CriterionResult criterion_variation_bound(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 8;
  c.name = "variation-bound-16box";
  ImplicitSet<2> tilde = make_box_set<2>({{-1, -1}, {1, 1}}, false);

  std::vector<Box2> boxes;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Box2 b;
      b.lo = {{-1 + 0.5 * i, -1 + 0.5 * j}};
      b.hi = {{-1 + 0.5 * (i + 1), -1 + 0.5 * (j + 1)}};
      boxes.push_back(b);
    }

  const int budget = 256;
  auto sampler = CondenserSampler<2>::master(tilde.bbox, opts.seed, budget, 0.02, 0.05);
  bool ok = true;
  Json jmaps = Json::array();
  for (const std::string& mdesc : {std::string("identity"), std::string("linear:2,0,0,1")}) {
    auto phi = parse_mapping2(mdesc, tilde);
    PsiOptions popt;
    popt.res = 64;
    popt.tol = 0.05;
    PsiEngine<2> engine(phi, 3.0, 2.0, popt);
    auto var = engine.variation(boxes, sampler, budget);
    int empty = 0;
    for (const auto& e : var.per_set)
      if (e.sampled_condensers == 0) ++empty;
    ok = ok && var.ok && empty == 0;
    Json j = Json::object();
    j.set("map", mdesc);
    j.set("total", var.total);
    j.set("bound_M", var.bound_M);
    j.set("empty_boxes", empty);
    j.set("ok", var.ok);
    jmaps.push_back(std::move(j));
  }
  c.payload.set("maps", std::move(jmaps));
  c.pass = ok;
  c.detail = ok ? "totals within 1.05*M on both maps" : "bound exceeded or empty box";
  return c;
}

// --- 9: metric axioms -------------------------------------------------------

inline CriterionResult criterion_metric_axioms(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 9;
  c.name = "metric-axioms";
  ImplicitSet<2> disk = make_ball_set<2>({{0, 0}}, 1.0, false);
  std::vector<Vec2> pts = {{{0.5, 0.0}}, {{0.0, 0.5}}, {{-0.45, -0.1}}, {{0.3, -0.4}}};
  MetricOptions mopt;
  mopt.seed = opts.seed;
  mopt.control_points = 3;  // runtime: estimates stay upper bounds
  mopt.search_res = 64;
  mopt.final_res = 128;

  Stopwatch sw;
  bool ok = true;
  Json jruns = Json::array();
  for (double p : {1.5, 2.0}) {
    auto rep = check_metric_axioms(disk, p, pts, mopt, 0.02, 0.05);
    double worst_asym = 0;
    for (const auto& e : rep.pairs) worst_asym = std::max(worst_asym, e.asymmetry);
    int violated = 0, tight = 0;
    for (const auto& t : rep.triples) {
      if (t.status == "violated") ++violated;
      if (t.status == "tight") ++tight;
    }
    ok = ok && rep.symmetry_ok && rep.triangle_ok && rep.positivity_ok;
    Json j = Json::object();
    j.set("p", p);
    j.set("worst_asymmetry", worst_asym);
    j.set("tight_triples", tight);
    j.set("violated_triples", violated);
    j.set("symmetry_ok", rep.symmetry_ok);
    j.set("triangle_ok", rep.triangle_ok);
    j.set("positivity_ok", rep.positivity_ok);
    jruns.push_back(std::move(j));
  }
  double elapsed = sw.seconds();
  if (elapsed > 1800.0) ok = false;  // 30 minute budget
  c.payload.set("runs", std::move(jruns));
  c.pass = ok;
  c.detail = "both exponents, " + format_double(elapsed, 3) + "s (budget 1800s)";
  return c;
}

// --- 10: Lipschitz property in the capacitary metric ------------------------

inline CriterionResult criterion_lipschitz(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 10;
  c.name = "metric-lipschitz";
  ImplicitSet<2> disk = make_ball_set<2>({{0, 0}}, 1.0, false);
  std::vector<std::pair<Vec2, Vec2>> pairs = {
      {{{0.2, 0.0}}, {{-0.15, 0.1}}},
      {{{0.1, 0.25}}, {{0.3, -0.1}}},
      {{{-0.2, -0.2}}, {{0.25, 0.15}}},
  };
  MetricOptions mopt;
  mopt.seed = opts.seed;
  mopt.control_points = 3;
  mopt.search_res = 64;
  mopt.final_res = 128;

  bool ok = true;
  double worst = std::numeric_limits<double>::infinity();
  Json jmaps = Json::array();
  for (const std::string& mdesc :
       {std::string("identity"), std::string("linear:2,0,0,1"), std::string("radial:4")}) {
    auto phi = parse_mapping2(mdesc, disk);
    auto rep = check_lipschitz(phi, pairs, 2.0, 2.0, mopt, 0.05);
    ok = ok && rep.ok;
    Json j = Json::object();
    j.set("map", mdesc);
    j.set("K", rep.K);
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
      worst = std::min(worst, e.slack_rel);
      Json je = Json::object();
      je.set("lhs", e.lhs);
      je.set("rhs", e.rhs);
      je.set("slack_rel", e.slack_rel);
      entries.push_back(std::move(je));
    }
    j.set("pairs", std::move(entries));
    jmaps.push_back(std::move(j));
  }
  c.payload.set("maps", std::move(jmaps));
  c.pass = ok;
  c.detail = "min slack " + pct(worst) + " (tol -5%)";
  return c;
}

// --- 11: shrinking-plate continuity diagnostic ------------------------------

inline CriterionResult criterion_shrinking(const AcceptanceOptions& opts) {
  CriterionResult c;
  c.id = 11;
  c.name = "shrinking-compacta";
  (void)opts;
  ImplicitSet<2> G = make_ball_set<2>({{0, 0}}, 1.0, false);
  Grid<2> grid = Grid<2>::covering(G.bbox, 192);
  bool ok = true;
  Json jruns = Json::array();
  for (double p : {1.5, 2.0}) {
    std::vector<double> caps;
    Json jc = Json::array();
    for (int k = 2; k <= 6; ++k) {
      RingCondenser<2> R;
      R.F = make_ball_set<2>({{0, 0}}, 1.0 / k, true);
      R.G = G;
      R.ambient = make_box_set<2>(make_cube(Vec2{}, 1.5), true);
      R.dist_F_boundary_G = 1.0 - 1.0 / k;
      SolverOptions sopt;
      sopt.p = p;
      auto cr = cap_numeric(R, sopt, grid);
      caps.push_back(cr.value);
      Json j = Json::object();
      j.set("k", k);
      j.set("value", cr.value);
      jc.push_back(std::move(j));
    }
    for (std::size_t i = 0; i + 1 < caps.size(); ++i)
      if (!(caps[i + 1] < caps[i])) ok = false;
    Json j = Json::object();
    j.set("p", p);
    j.set("values", std::move(jc));
    jruns.push_back(std::move(j));
  }
  c.payload.set("runs", std::move(jruns));
  c.pass = ok;
  c.detail = ok ? "capacity strictly decreasing as F shrinks" : "monotonicity violated";
  return c;
}

// ---------------------------------------------------------------------------

inline std::vector<CriterionResult> run_battery(const AcceptanceOptions& opts,
                                                std::ostream* log) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  const std::pair<int, Fn> table[] = {
      {1, criterion_radial_oracle},  {2, criterion_nonconformal},
      {3, criterion_bracket},        {4, criterion_equality_case},
      {5, criterion_offcenter_linear}, {6, criterion_ring_pq},
      {7, criterion_setfunc_monotone}, {8, criterion_variation_bound},
      {9, criterion_metric_axioms},  {10, criterion_lipschitz},
      {11, criterion_shrinking},
  };
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : table) {
    if (!opts.only.empty() && !opts.only.count(id)) continue;
    Stopwatch sw;
    CriterionResult r = fn(opts);
    if (log) {
      *log << "[" << std::setw(2) << r.id << "/12] " << (r.pass ? "PASS" : "FAIL") << " "
           << r.name << " (" << format_double(sw.seconds(), 3) << "s) " << r.detail << "\n"
           << std::flush;
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline Json battery_json(const AcceptanceOptions& opts,
                         const std::vector<CriterionResult>& criteria) {
  Json j = Json::object();
  j.set("suite", "acceptance");
  j.set("seed", static_cast<long long>(opts.seed));
  j.set("res", opts.res);
  Json arr = Json::array();
  for (const auto& c : criteria) {
    Json jc = Json::object();
    jc.set("id", c.id);
    jc.set("name", c.name);
    jc.set("pass", c.pass);
    jc.set("applicable", c.applicable);
    jc.set("detail", c.detail);
    jc.set("data", c.payload);
    arr.push_back(std::move(jc));
  }
  j.set("criteria", std::move(arr));
  return j;
}

}  // namespace acceptance

// Full suite: criteria 1-11 once, then a silent second battery run whose
// JSON must agree byte-for-byte (criterion 12).
inline SuiteOutcome run_acceptance_suite(const AcceptanceOptions& opts,
                                         std::ostream& log = std::cout) {
  for (int id : opts.only)
    if (id < 1 || id > 12) throw std::invalid_argument("unknown criterion: " + std::to_string(id));

  SuiteOutcome out;
  out.criteria = acceptance::run_battery(opts, &log);
  Json first = acceptance::battery_json(opts, out.criteria);

  bool want12 = opts.only.empty() || opts.only.count(12);
  if (want12) {
    CriterionResult c12;
    c12.id = 12;
    c12.name = "reproducibility";
    Stopwatch sw;
    auto second = acceptance::run_battery(opts, opts.second_pass_logging ? &log : nullptr);
    Json second_json = acceptance::battery_json(opts, second);
    c12.pass = first.dump() == second_json.dump();
    c12.detail = c12.pass ? "second battery run byte-identical" : "summaries differ";
    log << "[12/12] " << (c12.pass ? "PASS" : "FAIL") << " " << c12.name << " ("
        << format_double(sw.seconds(), 3) << "s) " << c12.detail << "\n"
        << std::flush;
    out.criteria.push_back(std::move(c12));
  }

  out.summary = acceptance::battery_json(opts, out.criteria);
  bool all = true;
  for (const auto& c : out.criteria) all = all && c.pass;
  out.exit_code = all ? 0 : 1;
  return out;
}

}  // namespace ringcap
