#include <catch2/catch_amalgamated.hpp>

#include "ringcap/geometry.hpp"
#include "ringcap/mappings.hpp"
#include "test_support.hpp"

using namespace ringcap;

TEST_CASE("ball ring construction and validation") {
  ImplicitSet<2> amb = make_box_set<2>({{-2, -2}, {2, 2}}, true);

  auto R = make_ball_ring<2>({{0, 0}}, 0.5, 1.0, amb);
  REQUIRE(R.dist_F_boundary_G.has_value());
  CHECK(*R.dist_F_boundary_G == Catch::Approx(0.5));
  CHECK(R.F.member({{0.5, 0.0}}));       // F closed
  CHECK_FALSE(R.G.member({{1.0, 0.0}})); // G open
  CHECK(R.G.member({{0.99, 0.0}}));
  check_inclusions(R);

  CHECK_THROWS_WITH(make_ball_ring<2>({{0, 0}}, 1.0, 0.5, amb),
                    Catch::Matchers::ContainsSubstring("radius ordering"));
  CHECK_THROWS_WITH(make_ball_ring<2>({{0, 0}}, 1.0, 3.0, amb),
                    Catch::Matchers::ContainsSubstring("escapes ambient"));
}

TEST_CASE("box condenser volume matches the closed form") {
  BoxCondenserParams p2;
  p2.lambda = {1.0, 1.0};
  p2.r = 1.0;
  p2.t = 0.5;
  CHECK(p2.volume_G() == Catch::Approx(3.0));

  BoxCondenserParams p3;
  p3.lambda = {1.0, 1.0, 1.0};
  p3.r = 1.0;
  p3.t = 1.0;
  CHECK(p3.volume_G() == Catch::Approx(32.0));

  auto R = make_box_condenser<2>(p2, 0.01);
  CHECK(R.F.member({{0.5, 0.0}}));
  CHECK_FALSE(R.F.member({{0.5, 0.02}}));
  CHECK(R.G.member({{1.2, 0.2}}));
  CHECK_FALSE(R.G.member({{1.5, 0.0}}));
  // Monte Carlo volume agrees with the closed form
  auto vol = measure(R.G, MeasureMethod::MonteCarlo, 200000, 3);
  CHECK(std::abs(vol.value - p2.volume_G()) <= std::max(4 * vol.error, 1e-9));

  BoxCondenserParams bad = p2;
  bad.t = 0.0;
  CHECK_THROWS_WITH(make_box_condenser<2>(bad, 0.01),
                    Catch::Matchers::ContainsSubstring("t must be positive"));
  BoxCondenserParams unsorted;
  unsorted.lambda = {1.0, 2.0};
  CHECK_THROWS_AS(make_box_condenser<2>(unsorted, 0.01), std::invalid_argument);
}

TEST_CASE("measure: Monte Carlo and grid methods") {
  auto ball = make_ball_set<2>({{0, 0}}, 1.0, true);
  auto mc = measure(ball, MeasureMethod::MonteCarlo, 1000000, 1);
  CHECK(std::abs(mc.value - M_PI) < 0.01);
  CHECK(mc.error < 0.005);

  auto box = make_box_set<2>({{0, 0}, {1, 1}}, true);
  auto gr = measure(box, MeasureMethod::Grid, 128);
  CHECK(gr.value == Catch::Approx(1.0));

  // annulus area by difference predicate
  ImplicitSet<2> ring;
  ring.kind = SetKind::Intersection;
  ring.bbox = make_cube(Vec2{}, 1.0);
  ring.member = [](const Vec2& x) {
    double r = norm(x);
    return r >= 0.5 && r < 1.0;
  };
  auto ra = measure(ring, MeasureMethod::MonteCarlo, 400000, 2);
  CHECK(std::abs(ra.value - 0.75 * M_PI) < 5 * ra.error + 1e-3);

  CHECK_THROWS_WITH(measure(ball, MeasureMethod::MonteCarlo, 50),
                    Catch::Matchers::ContainsSubstring("at least 100"));
}

TEST_CASE("measure is monotone under set inclusion") {
  auto small = make_ball_set<2>({{0.1, 0.0}}, 0.4, true);
  auto large = make_ball_set<2>({{0, 0}}, 1.0, true);
  auto ms = measure(small, MeasureMethod::MonteCarlo, 200000, 7);
  auto ml = measure(large, MeasureMethod::MonteCarlo, 200000, 8);
  CHECK(ms.value <= ml.value + 4 * (ms.error + ml.error));
}

TEST_CASE("grid covers the box with a one-cell margin") {
  Box2 box{{-1, -0.5}, {1, 0.5}};
  auto g = Grid<2>::covering(box, 64);
  CHECK(g.h == Catch::Approx(2.0 / 64));
  auto ext = g.extent_box();
  CHECK(ext.lo[0] < box.lo[0]);
  CHECK(ext.hi[1] > box.hi[1]);
  CHECK(ext.contains_box(box));
  CHECK(g.total_nodes() == static_cast<std::size_t>(g.nodes(0)) * g.nodes(1));
}

TEST_CASE("membership stays inside the bounding box") {
  Rng rng(99);
  auto sets = std::vector<ImplicitSet<2>>{
      make_ball_set<2>({{0.3, -0.2}}, 0.7, true),
      make_box_set<2>({{-1, 0}, {0.5, 2}}, false),
  };
  ImplicitSet<2> disk = make_ball_set<2>({{0, 0}}, 1.0, false);
  auto phi = radial_stretch_mapping<2>(3.0, disk);
  sets.push_back(preimage_set<2>(make_ball_set<2>({{0.2, 0.1}}, 0.3, true), phi.forward,
                                 phi.inverse));
  for (const auto& s : sets) {
    Box2 wide = s.bbox.padded(0.5);
    for (int k = 0; k < 20000; ++k) {
      Vec2 x = rng.point_in(wide);
      if (s.member(x)) {
        REQUIRE(s.bbox.contains(x));
      }
    }
  }
}

TEST_CASE("pullback under the identity preserves membership") {
  ImplicitSet<2> amb = make_box_set<2>({{-2, -2}, {2, 2}}, true);
  auto R = make_ball_ring<2>({{0.2, -0.1}}, 0.3, 0.9, amb);
  auto phi = identity_mapping(amb);
  auto P = pullback_condenser(phi, R);
  Rng rng(5);
  for (int k = 0; k < 10000; ++k) {
    Vec2 x = rng.point_in(R.G.bbox.padded(0.2));
    CHECK(P.F.member(x) == R.F.member(x));
    CHECK(P.G.member(x) == R.G.member(x));
  }
}

TEST_CASE("pullback of a ball ring under a radial stretch") {
  // preimage of radius rho under x -> |x|^{alpha-1} x is rho^{1/alpha}
  ImplicitSet<2> dom = make_ball_set<2>({{0, 0}}, 1.5, false);
  auto phi = radial_stretch_mapping<2>(4.0, dom);
  ImplicitSet<2> amb = make_box_set<2>({{-2, -2}, {2, 2}}, true);
  auto R = make_ball_ring<2>({{0, 0}}, 0.0625, 1.0, amb);
  auto P = pullback_condenser(phi, R);

  Rng rng(6);
  for (int k = 0; k < 10000; ++k) {
    Vec2 x = rng.point_in(Box2{{-1.2, -1.2}, {1.2, 1.2}});
    double r = norm(x);
    CHECK(P.F.member(x) == (r <= 0.5));
    CHECK(P.G.member(x) == (r < 1.0));
  }
  CHECK(P.G.bbox.contains_box(Box2{{-1, -1}, {1, 1}}));
}

TEST_CASE("pullback of a centred ball under diag(2,1) is an ellipse") {
  ImplicitSet<2> dom = make_box_set<2>({{-2, -2}, {2, 2}}, false);
  Mat<2> A;
  A.a = {2, 0, 0, 1};
  auto phi = linear_mapping(A, dom);
  auto ball = make_ball_set<2>({{0, 0}}, 0.5, true);
  auto pre = preimage_set<2>(ball, phi.forward, phi.inverse);
  Rng rng(8);
  for (int k = 0; k < 10000; ++k) {
    Vec2 x = rng.point_in(Box2{{-0.6, -0.6}, {0.6, 0.6}});
    bool in_ellipse = (x[0] * x[0]) / (0.25 * 0.25) + (x[1] * x[1]) / (0.5 * 0.5) <= 1.0;
    CHECK(pre.member(x) == in_ellipse);
  }
}

TEST_CASE("pullback preserves the inclusion F inside G") {
  ImplicitSet<2> dom = make_ball_set<2>({{0, 0}}, 2.0, false);
  auto phi = radial_stretch_mapping<2>(2.5, dom);
  ImplicitSet<2> amb = make_box_set<2>({{-3, -3}, {3, 3}}, true);
  auto R = make_ball_ring<2>({{0.3, 0.2}}, 0.2, 0.6, amb);
  auto P = pullback_condenser(phi, R);
  Rng rng(9);
  int seen_f = 0;
  for (int k = 0; k < 20000; ++k) {
    Vec2 x = rng.point_in(P.F.bbox);
    if (P.F.member(x)) {
      ++seen_f;
      REQUIRE(P.G.member(x));
    }
  }
  CHECK(seen_f > 100);
}

TEST_CASE("sampled diameter approximates the analytic one") {
  auto ball = make_ball_set<2>({{0.5, 0.5}}, 0.8, true);
  double d = sampled_diameter(ball, 800, 123);
  CHECK(d == Catch::Approx(1.6).margin(0.06));
}
