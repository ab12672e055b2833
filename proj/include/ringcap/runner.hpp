#pragma once

#include <filesystem>
#include <iostream>

#include "ringcap/inequalities.hpp"
#include "ringcap/report.hpp"

namespace ringcap {

// ---------------------------------------------------------------------------
// Run configuration. Flat key=value config files and CLI flags both land
// here; every output echoes the seed for audit.
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;
  double p = 2.0;
  std::optional<double> q;
  int res = 128;
  std::string map = "identity";
  std::string shape;             // condenser descriptor for `cap`
  std::string rings;             // batch descriptor for `verify-ring`
  std::string domain = "disk:1"; // Omega-tilde for mappings / metric domain
  std::string points;            // metric sample points
  std::string pairs;             // lipschitz pairs
  uint64_t seed = 0;
  double tol = 0.03;
  int budget = 48;
  int partition = 4;
  std::string out;               // output directory ("" = stdout only)
  bool svg = false;
};

namespace cfgdetail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    if (trim(tok).empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(trim(tok), &pos);
    out.push_back(v);
  }
  return out;
}

}  // namespace cfgdetail

// key=value config file ("#" comments, blank lines ignored)
inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = cfgdetail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line missing '=': " + t);
    std::string key = cfgdetail::trim(t.substr(0, eq));
    std::string val = cfgdetail::trim(t.substr(eq + 1));
    if (key == "command") cfg.command = val;
    else if (key == "p") cfg.p = std::stod(val);
    else if (key == "q") cfg.q = std::stod(val);
    else if (key == "res") cfg.res = std::stoi(val);
    else if (key == "map") cfg.map = val;
    else if (key == "shape") cfg.shape = val;
    else if (key == "rings") cfg.rings = val;
    else if (key == "domain") cfg.domain = val;
    else if (key == "points") cfg.points = val;
    else if (key == "pairs") cfg.pairs = val;
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "tol") cfg.tol = std::stod(val);
    else if (key == "budget") cfg.budget = std::stoi(val);
    else if (key == "partition") cfg.partition = std::stoi(val);
    else if (key == "out") cfg.out = val;
    else if (key == "svg") cfg.svg = (val == "true" || val == "1");
    else throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Descriptor parsing: domains, condensers, mappings.
// ---------------------------------------------------------------------------

inline ImplicitSet<2> parse_domain2(const std::string& desc) {
  auto head = cfgdetail::split(desc, ':');
  const std::string kind = cfgdetail::trim(head[0]);
  const std::string args = head.size() > 1 ? head[1] : "";
  if (kind == "disk") {
    auto v = cfgdetail::parse_doubles(args);
    if (v.size() != 1) throw std::invalid_argument("disk:R expects one radius");
    return make_ball_set<2>({{0, 0}}, v[0], false);
  }
  if (kind == "box") {
    auto v = cfgdetail::parse_doubles(args);
    if (v.size() != 4) throw std::invalid_argument("box:x0,y0,x1,y1 expects four numbers");
    return make_box_set<2>({{v[0], v[1]}, {v[2], v[3]}}, false);
  }
  throw std::invalid_argument("unknown domain kind: " + kind);
}

template <int N>
RingCondenser<N> parse_condenser(const std::string& desc);

template <>
inline RingCondenser<2> parse_condenser<2>(const std::string& desc) {
  auto head = cfgdetail::split(desc, ':');
  const std::string kind = cfgdetail::trim(head[0]);
  const std::string args = head.size() > 1 ? head[1] : "";
  auto v = cfgdetail::parse_doubles(args);
  if (kind == "annulus") {
    if (v.size() != 2) throw std::invalid_argument("annulus:rF,rG expects two radii");
    ImplicitSet<2> amb = make_box_set<2>(make_cube(Vec2{}, v[1] * 1.5), true);
    auto R = make_ball_ring<2>({{0, 0}}, v[0], v[1], amb);
    R.id = desc;
    return R;
  }
  if (kind == "ballring") {
    if (v.size() != 4) throw std::invalid_argument("ballring:cx,cy,rF,rG expects four numbers");
    Vec2 c{{v[0], v[1]}};
    ImplicitSet<2> amb = make_box_set<2>(make_cube(c, v[3] * 1.5), true);
    auto R = make_ball_ring<2>(c, v[2], v[3], amb);
    R.id = desc;
    return R;
  }
  if (kind == "boxcond") {
    if (v.size() < 2) throw std::invalid_argument("boxcond:t,r[,l1,l2] expects at least t,r");
    BoxCondenserParams bp;
    bp.t = v[0];
    bp.r = v[1];
    if (v.size() > 2)
      bp.lambda.assign(v.begin() + 2, v.end());
    else
      bp.lambda = {1.0, 1.0};
    auto R = make_box_condenser<2>(bp, bp.r * bp.t * bp.lambda.back() / 64);
    R.id = desc;
    return R;
  }
  throw std::invalid_argument("unknown condenser kind: " + kind);
}

template <>
inline RingCondenser<3> parse_condenser<3>(const std::string& desc) {
  auto head = cfgdetail::split(desc, ':');
  const std::string kind = cfgdetail::trim(head[0]);
  auto v = cfgdetail::parse_doubles(head.size() > 1 ? head[1] : "");
  if (kind == "annulus3") {
    if (v.size() != 2) throw std::invalid_argument("annulus3:rF,rG expects two radii");
    ImplicitSet<3> amb = make_box_set<3>(make_cube(Vec3{}, v[1] * 1.5), true);
    auto R = make_ball_ring<3>({{0, 0, 0}}, v[0], v[1], amb);
    R.id = desc;
    return R;
  }
  throw std::invalid_argument("unknown 3D condenser kind: " + kind);
}

// mapping descriptor, attached to a requested codomain (the region the
// condensers and query points live in)
inline MappingSpec<2> parse_mapping2(const std::string& desc, const ImplicitSet<2>& codomain) {
  std::string d = cfgdetail::trim(desc);
  if (d == "identity") return identity_mapping(codomain);

  auto build_raw = [&](const std::string& one) -> MappingSpec<2> {
    auto head = cfgdetail::split(one, ':');
    const std::string kind = cfgdetail::trim(head[0]);
    const std::string args = head.size() > 1 ? head[1] : "";
    if (kind == "identity") return identity_mapping(codomain);
    if (kind == "linear") {
      auto v = cfgdetail::parse_doubles(args);
      if (v.size() != 4) throw std::invalid_argument("linear:a,b,c,d expects four entries");
      Mat<2> A;
      A.a = {v[0], v[1], v[2], v[3]};
      return linear_mapping(A, codomain);
    }
    if (kind == "radial") {
      auto v = cfgdetail::parse_doubles(args);
      if (v.size() != 1) throw std::invalid_argument("radial:alpha expects one exponent");
      return radial_stretch_mapping(v[0], codomain);
    }
    throw std::invalid_argument("unknown mapping kind: " + kind);
  };

  MappingSpec<2> raw;
  if (d.rfind("composed:", 0) == 0) {
    std::string inner = d.substr(9);
    if (!inner.empty() && inner.front() == '[' && inner.back() == ']')
      inner = inner.substr(1, inner.size() - 2);
    std::vector<MappingSpec<2>> parts;
    for (const auto& part : cfgdetail::split(inner, ';'))
      if (!cfgdetail::trim(part).empty()) parts.push_back(build_raw(cfgdetail::trim(part)));
    raw = composed_mapping(parts);
  } else {
    raw = build_raw(d);
  }
  // re-anchor: the requested region is the codomain, the domain its preimage
  raw.codomain = codomain;
  raw.domain = preimage_set<2>(codomain, raw.forward, raw.inverse);
  raw.scale = raw.domain.bbox.max_extent();
  return raw;
}

inline std::vector<Vec2> parse_points2(const std::string& desc) {
  std::vector<Vec2> pts;
  for (const auto& tok : cfgdetail::split(desc, ';')) {
    if (cfgdetail::trim(tok).empty()) continue;
    auto v = cfgdetail::parse_doubles(tok);
    if (v.size() != 2) throw std::invalid_argument("point expects two coordinates: " + tok);
    pts.push_back({{v[0], v[1]}});
  }
  return pts;
}

inline std::vector<std::pair<Vec2, Vec2>> parse_pairs2(const std::string& desc) {
  std::vector<std::pair<Vec2, Vec2>> out;
  for (const auto& tok : cfgdetail::split(desc, ';')) {
    if (cfgdetail::trim(tok).empty()) continue;
    auto ends = cfgdetail::split(tok, ':');
    if (ends.size() != 2) throw std::invalid_argument("pair expects x,y:u,v — got " + tok);
    auto a = cfgdetail::parse_doubles(ends[0]);
    auto b = cfgdetail::parse_doubles(ends[1]);
    if (a.size() != 2 || b.size() != 2)
      throw std::invalid_argument("pair expects x,y:u,v — got " + tok);
    out.push_back({{{a[0], a[1]}}, {{b[0], b[1]}}});
  }
  return out;
}

// deterministic batch condenser descriptors
inline std::vector<RingCondenser<2>> parse_ring_batch2(const std::string& desc,
                                                       const ImplicitSet<2>& region,
                                                       uint64_t seed) {
  auto head = cfgdetail::split(desc, ':');
  const std::string kind = cfgdetail::trim(head[0]);
  if (kind == "origin-centered") {
    int k = head.size() > 1 ? std::stoi(head[1]) : 5;
    std::vector<RingCondenser<2>> out;
    Rng rng(seed ^ 0x0c1ULL);
    double L = region.bbox.max_extent() / 2;
    for (int i = 0; i < k; ++i) {
      double rG = rng.uniform(0.35, 0.6) * L;
      double rF = rG / rng.uniform(2.0, 6.0);
      ImplicitSet<2> amb = make_box_set<2>(make_cube(Vec2{}, rG * 1.5), true);
      auto R = make_ball_ring<2>({{0, 0}}, rF, rG, amb);
      R.id = "origin-" + std::to_string(i);
      out.push_back(R);
    }
    return out;
  }
  if (kind == "offcenter") {
    int k = head.size() > 1 ? std::stoi(head[1]) : 5;
    std::vector<RingCondenser<2>> out;
    Rng rng(seed ^ 0x0c2ULL);
    double L = region.bbox.max_extent();
    int guard = 0;
    while (static_cast<int>(out.size()) < k && guard++ < 1000) {
      Vec2 c = rng.point_in(region.bbox.padded(-0.25));
      double rG = rng.uniform(0.05, 0.11) * L;
      double rF = rG / rng.uniform(1.8, 3.5);
      CondenserCandidate<2> probe;
      probe.center = c;
      probe.r_F = rF;
      probe.r_G = rG;
      if (!candidate_fits(probe, region)) continue;
      ImplicitSet<2> amb = make_box_set<2>(make_cube(c, rG * 1.5), true);
      auto R = make_ball_ring<2>(c, rF, rG, amb);
      R.id = "offcenter-" + std::to_string(out.size());
      out.push_back(R);
    }
    if (static_cast<int>(out.size()) < k)
      throw std::runtime_error("could not place the requested ring batch in the region");
    return out;
  }
  // otherwise: ';'-separated explicit condenser descriptors
  std::vector<RingCondenser<2>> out;
  for (const auto& tok : cfgdetail::split(desc, ';'))
    if (!cfgdetail::trim(tok).empty()) out.push_back(parse_condenser<2>(cfgdetail::trim(tok)));
  if (out.empty()) throw std::invalid_argument("empty ring batch descriptor");
  return out;
}

// ---------------------------------------------------------------------------
// Pipelines. Each returns a summary JSON plus an exit code (0 pass,
// 1 tolerance violation); configuration errors throw and map to exit 2.
// ---------------------------------------------------------------------------

struct PipelineResult {
  Json summary = Json::object();
  int exit_code = 0;
  std::vector<std::pair<std::string, std::string>> artifacts;  // filename -> payload
};

namespace pipelines {

inline Json config_echo(const RunConfig& cfg) {
  Json j = Json::object();
  j.set("command", cfg.command);
  j.set("seed", static_cast<long long>(cfg.seed));
  j.set("p", cfg.p);
  if (cfg.q) j.set("q", *cfg.q);
  j.set("res", cfg.res);
  j.set("tol", cfg.tol);
  if (!cfg.map.empty()) j.set("map", cfg.map);
  if (!cfg.shape.empty()) j.set("shape", cfg.shape);
  if (!cfg.rings.empty()) j.set("rings", cfg.rings);
  if (!cfg.domain.empty()) j.set("domain", cfg.domain);
  return j;
}

template <int N>
PipelineResult run_cap_nd(const RunConfig& cfg, const RingCondenser<N>& R) {
  SolverOptions sopt;
  sopt.p = cfg.p;
  sopt.validate();
  Grid<N> grid = Grid<N>::covering(R.G.bbox, cfg.res);
  auto res = cap_numeric(R, sopt, grid);

  std::optional<double> upper, lower;
  try {
    upper = cap_upper_bound(R, cfg.p);
  } catch (const std::exception&) {
  }
  try {
    lower = cap_lower_bound_measure(R, cfg.p);
  } catch (const std::exception&) {
  }

  PipelineResult out;
  out.summary = config_echo(cfg);
  out.summary.set("value", res.value);
  out.summary.set("h", res.grid_h);
  out.summary.set("iterations", static_cast<long long>(res.iterations));
  out.summary.set("converged", res.converged);
  if (lower) out.summary.set("lower_bound", *lower);
  if (upper) out.summary.set("upper_bound", *upper);
  out.summary.set("diam_diagnostic", cap_lower_bound_diam(R, cfg.p));
  if (is_concentric_ball_ring(R)) {
    double oracle = cap_radial_oracle(R.F.ball->radius, R.G.ball->radius, N, cfg.p);
    out.summary.set("oracle", oracle);
    out.summary.set("rel_error", (res.value - oracle) / oracle);
  }
  bool ok = true;
  if (lower && res.value < *lower * (1 - cfg.tol)) ok = false;
  if (upper && res.value > *upper * (1 + cfg.tol)) ok = false;
  out.summary.set("ok", ok);
  out.exit_code = ok ? 0 : 1;
  return out;
}

inline PipelineResult run_cap(const RunConfig& cfg) {
  if (cfg.shape.empty()) throw std::invalid_argument("cap requires --shape");
  if (cfg.shape.rfind("annulus3", 0) == 0) {
    auto R = parse_condenser<3>(cfg.shape);
    return run_cap_nd<3>(cfg, R);
  }
  auto R = parse_condenser<2>(cfg.shape);
  return run_cap_nd<2>(cfg, R);
}

inline PipelineResult run_distort(const RunConfig& cfg) {
  ImplicitSet<2> tilde = parse_domain2(cfg.domain);
  auto phi = parse_mapping2(cfg.map, tilde);
  double q = cfg.q.value_or(cfg.p);
  Grid<2> grid = Grid<2>::covering(phi.domain.bbox, cfg.res);
  auto rep = distortion_norm(phi, cfg.p, q, grid);
  auto fd = finite_distortion_check(phi, 2000, cfg.seed);

  PipelineResult out;
  out.summary = config_echo(cfg);
  out.summary.set("K_pq", rep.K_pq);
  out.summary.set("kappa", rep.kappa);
  out.summary.set("refinement_delta", rep.refinement_delta);
  out.summary.set("quadrature_nodes", static_cast<long long>(rep.quadrature_nodes));
  out.summary.set("finite_distortion_ok", fd.ok && rep.finite_distortion_ok);
  out.exit_code = (fd.ok && rep.finite_distortion_ok) ? 0 : 1;
  out.summary.set("ok", out.exit_code == 0);
  return out;
}

inline std::string csv_ledger(const RingVerification& ver) {
  CsvWriter csv({"id", "p", "q", "lhs", "rhs", "ratio", "bound", "slack", "converged"});
  for (const auto& r : ver.records) {
    if (r.skipped) {
      csv.add_row({r.id, format_double(ver.p), format_double(ver.q), "", "", "", "", "",
                   "skipped: " + r.skip_reason});
    } else {
      csv.add_row({r.id, format_double(ver.p), format_double(ver.q), format_double(r.lhs),
                   format_double(r.rhs_base), format_double(r.ratio), format_double(r.bound),
                   format_double(r.slack), r.converged ? "true" : "false"});
    }
  }
  return csv.dump();
}

inline Json verification_json(const RingVerification& ver) {
  Json j = Json::object();
  j.set("sup_ratio", ver.sup_ratio);
  j.set("K", ver.K);
  j.set("records", static_cast<long long>(ver.records.size()));
  j.set("ok", ver.ok);
  Json viols = Json::array();
  for (const auto& v : ver.violations) viols.push_back(v);
  j.set("violations", std::move(viols));
  return j;
}

inline PipelineResult run_verify_ring(const RunConfig& cfg) {
  ImplicitSet<2> tilde = parse_domain2(cfg.domain);
  auto phi = parse_mapping2(cfg.map, tilde);
  auto rings = parse_ring_batch2(cfg.rings.empty() ? "origin-centered:5" : cfg.rings, tilde,
                                 cfg.seed);
  VerifyOptions vopt;
  vopt.res = cfg.res;
  vopt.tol = cfg.tol;

  RingVerification ver;
  if (cfg.q && *cfg.q != cfg.p) {
    ver = verify_ring_pq(phi, rings, cfg.p, *cfg.q, vopt);
  } else {
    ver = verify_ring_pp(phi, rings, cfg.p, vopt);
  }

  PipelineResult out;
  out.summary = config_echo(cfg);
  out.summary.set("verification", verification_json(ver));
  out.summary.set("ok", ver.ok);
  out.exit_code = ver.ok ? 0 : 1;
  out.artifacts.push_back({"ledger.csv", csv_ledger(ver)});
  return out;
}

inline PipelineResult run_setfunc(const RunConfig& cfg) {
  ImplicitSet<2> tilde = parse_domain2(cfg.domain);
  auto phi = parse_mapping2(cfg.map, tilde);
  double q = cfg.q.value_or(cfg.p - 1.0);
  if (!(q < cfg.p)) throw std::invalid_argument("setfunc requires q < p");

  PsiOptions popt;
  popt.res = std::max(32, cfg.res / 2);
  PsiEngine<2> engine(phi, cfg.p, q, popt);
  auto sampler = CondenserSampler<2>::master(tilde.bbox, cfg.seed, cfg.budget);

  auto psi_all = engine.psi(tilde, sampler, cfg.budget);

  // partition the bounding box into partition x partition open boxes
  std::vector<Box2> boxes;
  const Box2& bb = tilde.bbox;
  for (int i = 0; i < cfg.partition; ++i)
    for (int j = 0; j < cfg.partition; ++j) {
      Box2 b;
      b.lo = {{bb.lo[0] + bb.extent(0) * i / cfg.partition,
               bb.lo[1] + bb.extent(1) * j / cfg.partition}};
      b.hi = {{bb.lo[0] + bb.extent(0) * (i + 1) / cfg.partition,
               bb.lo[1] + bb.extent(1) * (j + 1) / cfg.partition}};
      boxes.push_back(b);
    }
  VariationEstimate var;
  bool variation_ok = true;
  std::string variation_note;
  try {
    var = engine.variation(boxes, sampler, cfg.budget);
    variation_ok = var.ok;
  } catch (const std::invalid_argument& e) {
    variation_note = e.what();  // e.g. no condenser fits in a partition cell
  }

  PipelineResult out;
  out.summary = config_echo(cfg);
  out.summary.set("q_used", q);
  out.summary.set("kappa", engine.kappa());
  out.summary.set("K_pq", engine.K_pq());
  Json psij = Json::object();
  psij.set("psi", psi_all.psi_value);
  psij.set("condensers", psi_all.sampled_condensers);
  psij.set("best_witness", psi_all.best_witness);
  out.summary.set("psi_region", std::move(psij));
  if (variation_note.empty()) {
    Json vj = Json::object();
    vj.set("total", var.total);
    vj.set("bound_M", var.bound_M);
    vj.set("boxes", static_cast<long long>(var.per_set.size()));
    vj.set("ok", var.ok);
    out.summary.set("variation", std::move(vj));
  } else {
    out.summary.set("variation_note", variation_note);
  }
  bool ok = variation_ok && psi_all.psi_value > 0;
  out.summary.set("ok", ok);
  out.exit_code = ok ? 0 : 1;
  return out;
}

inline PipelineResult run_metric(const RunConfig& cfg) {
  ImplicitSet<2> omega = parse_domain2(cfg.domain);
  auto points = parse_points2(
      cfg.points.empty() ? "0.5,0;0,0.5;-0.45,-0.1" : cfg.points);
  MetricOptions mopt;
  mopt.seed = cfg.seed;
  mopt.search_res = std::max(32, cfg.res / 2);
  mopt.final_res = cfg.res;
  auto rep = check_metric_axioms(omega, cfg.p, points, mopt);

  PipelineResult out;
  out.summary = config_echo(cfg);
  Json pairs = Json::array();
  for (const auto& e : rep.pairs) {
    Json pj = Json::object();
    pj.set("i", e.i);
    pj.set("j", e.j);
    pj.set("d_ij", e.d_ij);
    pj.set("d_ji", e.d_ji);
    pj.set("asymmetry", e.asymmetry);
    pairs.push_back(std::move(pj));
  }
  out.summary.set("pairs", std::move(pairs));
  int tight = 0, violated = 0;
  for (const auto& t : rep.triples) {
    if (t.status == "tight") ++tight;
    if (t.status == "violated") ++violated;
  }
  Json axioms = Json::object();
  axioms.set("symmetry_ok", rep.symmetry_ok);
  axioms.set("triangle_ok", rep.triangle_ok);
  axioms.set("positivity_ok", rep.positivity_ok);
  axioms.set("tight_triples", tight);
  axioms.set("violated_triples", violated);
  out.summary.set("axioms", std::move(axioms));
  bool ok = rep.symmetry_ok && rep.triangle_ok && rep.positivity_ok;
  out.summary.set("ok", ok);
  out.exit_code = ok ? 0 : 1;

  if (cfg.svg) {
    SvgCanvas canvas(omega.bbox.padded(0.08));
    if (omega.ball) {
      canvas.add_circle(omega.ball->center, omega.ball->radius, "black");
    } else {
      canvas.add_rect(omega.bbox, "black");
    }
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    // overlay best curves of a representative query per point pair
    MetricOptions single = mopt;
    int color = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        auto q = capacitary_distance(points[i], points[j], omega, cfg.p, single);
        canvas.add_polyline(q.best_curve.pts, palette[color % 6]);
        ++color;
      }
    for (const auto& pt : points) canvas.add_dot(pt, "black");
    out.artifacts.push_back({"curves.svg", canvas.dump()});
  }
  return out;
}

}  // namespace pipelines

// Dispatch a parsed config; writes artifacts when an output directory is
// set. Exit codes: 0 pass, 1 tolerance violation, 2 configuration error.
inline int run(const RunConfig& cfg, std::ostream& log = std::cout) {
  PipelineResult result;
  try {
    if (cfg.command == "cap") result = pipelines::run_cap(cfg);
    else if (cfg.command == "distort") result = pipelines::run_distort(cfg);
    else if (cfg.command == "verify-ring") result = pipelines::run_verify_ring(cfg);
    else if (cfg.command == "setfunc") result = pipelines::run_setfunc(cfg);
    else if (cfg.command == "metric") result = pipelines::run_metric(cfg);
    else throw std::invalid_argument("unknown command: " + cfg.command);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }

  std::string payload = result.summary.dump();
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    std::ofstream out(cfg.out + "/summary.json", std::ios::binary);
    out << payload;
    for (const auto& [name, content] : result.artifacts) {
      std::ofstream art(cfg.out + "/" + name, std::ios::binary);
      art << content;
    }
  }
  log << payload;
  return result.exit_code;
}

}  // namespace ringcap
