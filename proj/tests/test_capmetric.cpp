#include <catch2/catch_amalgamated.hpp>

#include "ringcap/capmetric.hpp"
#include "ringcap/runner.hpp"
#include "test_support.hpp"

using namespace ringcap;

namespace {

ImplicitSet<2> unit_disk() { return make_ball_set<2>({{0, 0}}, 1.0, false); }

MetricOptions quick_metric() {
  MetricOptions m;
  m.control_points = 2;
  m.search_res = 48;
  m.final_res = 64;
  m.max_sweeps = 3;
  return m;
}

}  // namespace

TEST_CASE("duality exponents") {
  auto d = duality_exponents(2.0, 2.0, 2);
  CHECK(d.p_dual == Catch::Approx(2.0));
  CHECK(d.q_dual == Catch::Approx(2.0));
  CHECK(duality_exponents(4.0, 2.0, 2).p_dual == Catch::Approx(4.0 / 3.0));
  CHECK(duality_exponents(3.0, 2.5, 3).q_dual == Catch::Approx(2.5 / (2.5 - 2.0)));
  CHECK_THROWS_AS(duality_exponents(2.0, 2.0, 3), std::invalid_argument);
}

TEST_CASE("tube geometry") {
  Polyline<2> seg;
  seg.pts = {{{-0.25, 0}}, {{0.25, 0}}};
  CHECK(seg.length() == Catch::Approx(0.5));
  auto tube = tube_set(seg, 0.1);
  CHECK(tube.member({{0.0, 0.09}}));
  CHECK_FALSE(tube.member({{0.0, 0.11}}));
  CHECK(tube.member({{0.3, 0.0}}));   // cap beyond the endpoint
  CHECK_FALSE(tube.member({{0.4, 0.0}}));
  CHECK(distance_to_polyline({{0.0, 0.5}}, seg) == Catch::Approx(0.5));
}

TEST_CASE("a point curve with a fixed tube radius is a ball condenser") {
  auto omega = unit_disk();
  Polyline<2> point;
  point.pts = {{{0.1, 0.0}}};
  CurveCapacityOptions opts;
  opts.res = 64;
  opts.half_radius_probe = false;
  auto cc = curve_capacity(point, omega, 2.0, 0.15, opts);

  RingCondenser<2> R;
  R.F = make_ball_set<2>({{0.1, 0.0}}, 0.15, true);
  R.G = omega;
  R.ambient = make_box_set<2>(make_cube(Vec2{}, 1.5), true);
  SolverOptions sopt;
  sopt.p = 2.0;
  auto ball = cap_numeric(R, sopt, Grid<2>::covering(omega.bbox, 64));
  CHECK(cc.cp == Catch::Approx(ball.value).epsilon(1e-12));
}

TEST_CASE("curve capacity rejects bad exponents and clearance violations") {
  auto omega = unit_disk();
  Polyline<2> seg;
  seg.pts = {{{-0.25, 0}}, {{0.25, 0}}};
  CurveCapacityOptions opts;
  opts.res = 48;
  CHECK_THROWS_WITH(curve_capacity(seg, omega, 3.0, 0.05, opts),
                    Catch::Matchers::ContainsSubstring("admissible range"));
  Polyline<2> near_edge;
  near_edge.pts = {{{0.0, 0.0}}, {{0.98, 0.0}}};
  CHECK_THROWS_WITH(curve_capacity(near_edge, omega, 2.0, 0.05, opts),
                    Catch::Matchers::ContainsSubstring("clearance"));
}

TEST_CASE("curve capacity decreases with the tube radius") {
  auto omega = unit_disk();
  Polyline<2> seg;
  seg.pts = {{{-0.25, 0}}, {{0.25, 0}}};
  CurveCapacityOptions opts;
  opts.res = 96;
  auto cc = curve_capacity(seg, omega, 2.0, 0.1, opts);
  CHECK(cc.cp_half_root > 0.0);
  CHECK(cc.cp_half_root < cc.cp_root);  // thinner plate, smaller capacity
  CHECK(cc.cp_root > 0.0);
}

TEST_CASE("curve capacity dominates the chord-length estimate") {
  // cp^(n-1) * |Omega|^(p-n+1) / |x-y|^p stays bounded away from zero; the
  // smallest observed quotient plays the role of the unspecified constant
  auto omega = unit_disk();
  const double p = 2.0;
  const double vol_omega = M_PI;
  CurveCapacityOptions opts;
  opts.res = 64;
  opts.half_radius_probe = false;
  double c_min = std::numeric_limits<double>::infinity();
  for (auto [a, b] : std::vector<std::pair<Vec2, Vec2>>{
           {{{-0.25, 0}}, {{0.25, 0}}},
           {{{0.0, -0.3}}, {{0.1, 0.35}}},
           {{{-0.4, 0.2}}, {{0.3, 0.25}}}}) {
    auto cc = curve_capacity(Polyline<2>{{a, b}}, omega, p, 0.06, opts);
    REQUIRE(cc.cp > 0.0);
    double chord = dist(a, b);
    double quotient = std::pow(cc.cp, 2 - 1) * std::pow(vol_omega, p - 2 + 1) /
                      std::pow(chord, p);
    c_min = std::min(c_min, quotient);
  }
  CHECK(c_min > 0.0);
}

TEST_CASE("capacitary distance basics") {
  auto omega = unit_disk();
  auto opts = quick_metric();

  // coincident query points: zero distance, no solves
  auto same = capacitary_distance<2>({{0.2, 0.1}}, {{0.2, 0.1}}, omega, 2.0, opts);
  CHECK(same.d_value == 0.0);
  CHECK(same.optimizer_iterations == 0);

  auto fwd = capacitary_distance<2>({{-0.3, 0.0}}, {{0.3, 0.1}}, omega, 2.0, opts);
  auto rev = capacitary_distance<2>({{0.3, 0.1}}, {{-0.3, 0.0}}, omega, 2.0, opts);
  CHECK(fwd.d_value > 0.0);
  CHECK(std::abs(fwd.d_value - rev.d_value) <=
        0.02 * 0.5 * (fwd.d_value + rev.d_value));

  // in a convex domain the straight segment is near-optimal
  MetricOptions probe = opts;
  probe.max_sweeps = 0;  // straight segment only
  auto straight = capacitary_distance<2>({{-0.3, 0.0}}, {{0.3, 0.1}}, omega, 2.0, probe);
  CHECK(fwd.d_value <= straight.d_value + 1e-12);
  CHECK(fwd.d_value >= straight.d_value * 0.99);
}

TEST_CASE("distance does not increase when the domain grows") {
  auto opts = quick_metric();
  Vec2 a{{-0.3, 0.0}}, b{{0.3, 0.0}};
  auto d_small = capacitary_distance(a, b, unit_disk(), 2.0, opts);
  auto d_large =
      capacitary_distance(a, b, make_ball_set<2>({{0, 0}}, 1.3, false), 2.0, opts);
  CHECK(d_large.d_value <= d_small.d_value * 1.02);
}

TEST_CASE("metric axioms on a small point set") {
  auto omega = unit_disk();
  std::vector<Vec2> pts = {{{0.4, 0.0}}, {{0.0, 0.4}}, {{-0.35, -0.1}}};
  auto rep = check_metric_axioms(omega, 2.0, pts, quick_metric(), 0.05, 0.08);
  CHECK(rep.positivity_ok);
  CHECK(rep.symmetry_ok);
  for (const auto& t : rep.triples) CHECK(t.status != "violated");
  CHECK_THROWS_AS(check_metric_axioms(omega, 2.0, {pts[0], pts[1]}, quick_metric()),
                  std::invalid_argument);
}

TEST_CASE("near-collinear triples read tight, not violated") {
  auto omega = make_box_set<2>({{-1, -0.5}, {1, 0.5}}, false);
  std::vector<Vec2> pts = {{{-0.5, 0.0}}, {{0.0, 0.0}}, {{0.5, 0.0}}};
  auto rep = check_metric_axioms(omega, 2.0, pts, quick_metric(), 0.05, 0.08);
  for (const auto& t : rep.triples) CHECK(t.status != "violated");
}

TEST_CASE("duality exponents configure the forward-direction check") {
  // for p = q = 4 > n the dual exponents 4/3 land in the admissible metric
  // range, and the forward inequality is the Lipschitz check for the inverse
  auto d = duality_exponents(4.0, 4.0, 2);
  REQUIRE(d.p_dual == Catch::Approx(4.0 / 3.0));
  REQUIRE(d.q_dual == Catch::Approx(4.0 / 3.0));

  auto omega = unit_disk();
  Mat<2> A;
  A.a = {2, 0, 0, 1};
  auto phi = linear_mapping(A, omega);
  auto phi_inv = inverse_mapping(phi);
  CHECK(validate_round_trip(phi_inv, 2000, 1e-8));
  Mat<2> Jinv = phi_inv.jacobian({{0.3, 0.1}});
  CHECK(Jinv(0, 0) == Catch::Approx(0.5));
  CHECK(Jinv(1, 1) == Catch::Approx(1.0));

  std::vector<std::pair<Vec2, Vec2>> pairs = {{{{0.15, 0.0}}, {{-0.1, 0.1}}}};
  auto rep = check_lipschitz(phi_inv, pairs, d.p_dual, d.q_dual, quick_metric(), 0.05, 64);
  CHECK(rep.ok);
  CHECK(rep.K > 0.0);
}

TEST_CASE("identity is 1-Lipschitz between its own metrics") {
  auto omega = unit_disk();
  auto phi = identity_mapping(omega);
  std::vector<std::pair<Vec2, Vec2>> pairs = {{{{0.2, 0.0}}, {{-0.2, 0.1}}}};
  auto rep = check_lipschitz(phi, pairs, 2.0, 2.0, quick_metric(), 0.05, 64);
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.K == Catch::Approx(1.0));
  CHECK(rep.ok);
  CHECK(rep.entries[0].slack_rel >= -0.02);

  CHECK_THROWS_AS(check_lipschitz(phi, pairs, 3.0, 2.0, quick_metric()),
                  std::invalid_argument);
}
