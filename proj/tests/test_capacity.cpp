#include <catch2/catch_amalgamated.hpp>

#include "ringcap/capacity.hpp"
#include "test_support.hpp"

using namespace ringcap;
using ringcap::testing::annulus;
using ringcap::testing::brute_force_radial_capacity;

namespace {
constexpr double kHalfAnnulusCap = 9.064720283654388;  // 2*pi / log 2
constexpr double kTwoPi = 6.283185307179586;
constexpr double kShellCap3d = 25.132741228718345;  // 8*pi
}  // namespace

TEST_CASE("radial oracle validated against brute-force 1D minimisation") {
  struct Case {
    double rF, rG, p;
    int n;
    double frozen;  // independently derived value
  };
  const Case cases[] = {
      {0.5, 1.0, 2.0, 2, kHalfAnnulusCap},
      {1.0, M_E, 2.0, 2, kTwoPi},
      {1.0, 2.0, 2.0, 3, kShellCap3d},
      {0.5, 1.0, 1.5, 2, kTwoPi},
  };
  for (const auto& c : cases) {
    double oracle = cap_radial_oracle(c.rF, c.rG, c.n, c.p);
    double brute = brute_force_radial_capacity(c.rF, c.rG, c.n, c.p);
    CHECK(oracle == Catch::Approx(c.frozen).epsilon(1e-7));
    CHECK(brute == Catch::Approx(oracle).epsilon(1e-4));
  }
  // exponents without frozen constants still agree across the two routes
  for (double p : {1.2, 2.7, 4.0}) {
    double oracle = cap_radial_oracle(0.4, 1.3, 2, p);
    double brute = brute_force_radial_capacity(0.4, 1.3, 2, p);
    CHECK(brute == Catch::Approx(oracle).epsilon(2e-4));
  }
  CHECK_THROWS_AS(cap_radial_oracle(0.5, 1.0, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cap_radial_oracle(1.0, 0.5, 2, 2.0), std::invalid_argument);
}

TEST_CASE("p_energy on reference fields") {
  // constant field: zero energy
  {
    auto R = annulus<2>(0.5, 1.0);
    auto f = make_field(R, Grid<2>::covering(R.G.bbox, 32));
    std::fill(f.values.begin(), f.values.end(), 1.0);
    CHECK(p_energy(f, 2.0) == Catch::Approx(0.0).margin(1e-14));
  }
  // linear profile f = x on the unit square: |grad| = 1 everywhere
  {
    ScalarField<2> f;
    f.grid = Grid<2>::covering(Box2{{0, 0}, {1, 1}}, 64);
    f.values.resize(f.grid.total_nodes());
    f.mask.assign(f.grid.total_nodes(), Interior);
    for (int i = 0; i < f.grid.nodes(0); ++i)
      for (int j = 0; j < f.grid.nodes(1); ++j)
        f.values[f.grid.flat({i, j})] = f.grid.node({i, j})[0];
    double area = f.grid.extent_box().volume();  // grid carries a margin
    CHECK(p_energy(f, 2.0) == Catch::Approx(area).epsilon(1e-12));
  }
  // radial log profile on the annulus approximates the capacity
  {
    auto R = annulus<2>(0.5, 1.0);
    auto g = Grid<2>::covering(R.G.bbox, 512);  // h = 1/256
    auto f = make_field(R, g);
    for (int i = 0; i < g.nodes(0); ++i)
      for (int j = 0; j < g.nodes(1); ++j) {
        auto id = g.flat({i, j});
        if (f.mask[id] != Interior) continue;
        double r = norm(g.node({i, j}));
        f.values[id] = std::clamp(std::log(1.0 / r) / std::log(2.0), 0.0, 1.0);
      }
    CHECK(p_energy(f, 2.0) == Catch::Approx(kHalfAnnulusCap).epsilon(0.02));
  }
}

TEST_CASE("cap_numeric matches the radial oracle on annuli") {
  SolverOptions opts;
  opts.p = 2.0;
  {
    auto R = annulus<2>(0.5, 1.0);
    auto res = cap_numeric(R, opts, Grid<2>::covering(R.G.bbox, 256));
    CHECK(res.converged);
    CHECK(res.value == Catch::Approx(kHalfAnnulusCap).epsilon(0.02));
  }
  {
    auto R = annulus<2>(1.0, M_E);
    auto res = cap_numeric(R, opts, Grid<2>::covering(R.G.bbox, 256));
    CHECK(res.value == Catch::Approx(kTwoPi).epsilon(0.02));
  }
}

TEST_CASE("grid convergence toward the oracle is monotone") {
  SolverOptions opts;
  opts.p = 2.0;
  auto R = annulus<2>(0.5, 1.0);
  std::vector<double> errs;
  for (int res : {64, 128, 256}) {
    auto cr = cap_numeric(R, opts, Grid<2>::covering(R.G.bbox, res));
    errs.push_back(std::abs(cr.value - kHalfAnnulusCap) / kHalfAnnulusCap);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
}

TEST_CASE("degenerate condensers are rejected") {
  SolverOptions opts;
  opts.p = 2.0;
  auto R = annulus<2>(0.93, 1.0);
  CHECK_THROWS_WITH(cap_numeric(R, opts, Grid<2>::covering(R.G.bbox, 32)),
                    Catch::Matchers::ContainsSubstring("too thin"));

  SolverOptions bad;
  bad.p = 0.5;
  CHECK_THROWS_WITH(cap_numeric(R, bad, Grid<2>::covering(R.G.bbox, 64)),
                    Catch::Matchers::ContainsSubstring("p must exceed 1"));
}

TEST_CASE("solver output is a valid admissible field") {
  auto R = annulus<2>(0.4, 1.0);
  SolverOptions opts;
  opts.p = 2.0;
  auto g = Grid<2>::covering(R.G.bbox, 96);
  auto f = make_field(R, g);
  detail::init_ramp(f);
  auto oc = detail::run_descent(f, 2.0, 1e-4, 1e-8, 20000);
  CHECK(oc.converged);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.mask[i] == ClampOne) REQUIRE(f.values[i] == 1.0);
    if (f.mask[i] == ClampZero) REQUIRE(f.values[i] == 0.0);
    if (f.mask[i] == Interior) {
      REQUIRE(f.values[i] >= 0.0);
      REQUIRE(f.values[i] <= 1.0);
    }
  }
}

TEST_CASE("solver value is the least energy among admissible candidates") {
  auto R = annulus<2>(0.4, 1.0);
  SolverOptions opts;
  opts.p = 2.0;
  auto g = Grid<2>::covering(R.G.bbox, 64);
  auto best = cap_numeric(R, opts, g).value;
  Rng rng(17);
  auto f = make_field(R, g);
  for (int trial = 0; trial < 12; ++trial) {
    for (std::size_t i = 0; i < f.values.size(); ++i)
      if (f.mask[i] == Interior) f.values[i] = rng.uniform();
    CHECK(p_energy(f, 2.0) >= best - 1e-9);
  }
  // the EDT ramp start is admissible too
  detail::init_ramp(f);
  CHECK(p_energy(f, 2.0) >= best - 1e-9);
}

TEST_CASE("capacity is monotone in F and G") {
  SolverOptions opts;
  opts.p = 2.0;
  auto base = annulus<2>(0.4, 1.0);
  auto grid = Grid<2>::covering(base.G.bbox, 128);
  double cap_base = cap_numeric(base, opts, grid).value;

  auto bigger_f = annulus<2>(0.44, 1.0);
  CHECK(cap_numeric(bigger_f, opts, grid).value >= cap_base * (1 - 1e-6));

  auto bigger_g = annulus<2>(0.4, 1.2);
  double cap_bigger_g = cap_numeric(bigger_g, opts, Grid<2>::covering(bigger_g.G.bbox, 154)).value;
  CHECK(cap_bigger_g <= cap_base * (1 + 2e-2));
}

TEST_CASE("capacity scales like s^(n-p)") {
  SolverOptions opts;
  opts.p = 1.5;
  auto small = annulus<2>(0.5, 1.0);
  auto big = annulus<2>(1.0, 2.0);
  double c_small = cap_numeric(small, opts, Grid<2>::covering(small.G.bbox, 128)).value;
  double c_big = cap_numeric(big, opts, Grid<2>::covering(big.G.bbox, 128)).value;
  CHECK(c_big / c_small == Catch::Approx(std::pow(2.0, 2 - 1.5)).epsilon(0.03));
}

TEST_CASE("capacity bounds bracket the solve") {
  // upper bound closed forms first
  CHECK(cap_upper_bound(annulus<2>(1.0, 2.0), 2.0) == Catch::Approx(3 * M_PI));
  CHECK(cap_upper_bound(annulus<2>(0.5, 1.0), 2.0) == Catch::Approx(3 * M_PI));
  CHECK(cap_lower_bound_measure(annulus<2>(0.5, 1.0), 2.0) == Catch::Approx(M_PI));
  CHECK(cap_lower_bound_measure(annulus<3>(1.0, 2.0), 2.0) == Catch::Approx(1.5 * M_PI));

  SolverOptions opts;
  for (double p : {1.5, 2.0, 3.0}) {
    opts.p = p;
    auto R = annulus<2>(0.5, 1.0);
    double v = cap_numeric(R, opts, Grid<2>::covering(R.G.bbox, 128)).value;
    CHECK(cap_lower_bound_measure(R, p) <= v);
    CHECK(v <= cap_upper_bound(R, p));
  }
  {
    opts.p = 2.0;
    auto R = annulus<3>(1.0, 2.0);
    double v = cap_numeric(R, opts, Grid<3>::covering(R.G.bbox, 32)).value;
    CHECK(cap_lower_bound_measure(R, 2.0) <= v);
    CHECK(v <= cap_upper_bound(R, 2.0));
  }

  auto degenerate = annulus<2>(0.5, 1.0);
  degenerate.dist_F_boundary_G = 0.0;
  CHECK_THROWS_WITH(cap_upper_bound(degenerate, 2.0),
                    Catch::Matchers::ContainsSubstring("non-positive"));

  auto nonconvex = annulus<2>(0.5, 1.0);
  nonconvex.F.convex = false;
  CHECK_THROWS_WITH(cap_lower_bound_measure(nonconvex, 2.0),
                    Catch::Matchers::ContainsSubstring("requires convex F"));
}

TEST_CASE("diameter diagnostic: value, scaling, degenerate point") {
  auto R = annulus<2>(0.5, 1.0);
  CHECK(cap_lower_bound_diam(R, 2.0) == Catch::Approx(1.0 / M_PI));

  // doubling all lengths multiplies the diagnostic by 2^(n-p)
  auto R2 = annulus<2>(1.0, 2.0);
  double p = 1.5;
  CHECK(cap_lower_bound_diam(R2, p) / cap_lower_bound_diam(R, p) ==
        Catch::Approx(std::pow(2.0, 2 - p)).epsilon(1e-9));

  RingCondenser<2> point;
  point.F.kind = SetKind::Intersection;
  point.F.bbox = Box2{{0.1, 0.1}, {0.1, 0.1}};
  point.F.member = [](const Vec2& x) { return x[0] == 0.1 && x[1] == 0.1; };
  point.G = make_ball_set<2>({{0, 0}}, 1.0, false);
  point.ambient = make_box_set<2>(make_cube(Vec2{}, 2.0), true);
  CHECK(cap_lower_bound_diam(point, 2.0) == 0.0);
}

TEST_CASE("distance transform agrees with brute force") {
  Grid<2> g = Grid<2>::covering(Box2{{0, 0}, {1, 1}}, 24);
  Rng rng(31);
  std::vector<uint8_t> seed(g.total_nodes(), 0);
  for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = rng.uniform() < 0.07;
  seed[0] = 1;  // nonempty
  auto d2 = detail::edt_squared(g, seed);

  std::vector<std::array<int, 2>> sources;
  for (int i = 0; i < g.nodes(0); ++i)
    for (int j = 0; j < g.nodes(1); ++j)
      if (seed[g.flat({i, j})]) sources.push_back({i, j});
  for (int i = 0; i < g.nodes(0); ++i)
    for (int j = 0; j < g.nodes(1); ++j) {
      double best = 1e18;
      for (auto& s : sources) {
        double dx = i - s[0], dy = j - s[1];
        best = std::min(best, dx * dx + dy * dy);
      }
      REQUIRE(d2[g.flat({i, j})] == Catch::Approx(best));
    }
}

TEST_CASE("grid separation estimate approximates dist(F, boundary G)") {
  auto R = annulus<2>(0.5, 1.0);
  auto g = Grid<2>::covering(R.G.bbox, 128);
  auto f = make_field(R, g);
  CHECK(separation_on_grid(f) == Catch::Approx(0.5).margin(2.5 * g.h));
}

TEST_CASE("ring capacity routing: oracle for concentric rings, grid otherwise") {
  RingSolveOptions ro;
  ro.res = 64;
  auto R = annulus<2>(0.5, 1.0);
  auto oracle_route = ring_capacity(R, 2.0, ro);
  CHECK(oracle_route.grid_h == 0.0);
  CHECK(oracle_route.value == Catch::Approx(kHalfAnnulusCap).epsilon(1e-9));
  ro.force_grid = true;
  auto grid_route = ring_capacity(R, 2.0, ro);
  CHECK(grid_route.grid_h > 0.0);
  CHECK(grid_route.value == Catch::Approx(kHalfAnnulusCap).epsilon(0.06));
}
