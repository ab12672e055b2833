#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ringcap/acceptance.hpp"
#include "ringcap/runner.hpp"

using namespace ringcap;

TEST_CASE("json writer: fixed 12-digit floats, ordering, escaping") {
  Json j = Json::object();
  j.set("b_second", 0.1234567890123456);
  j.set("a_first", 1);
  j.set("text", "a\"b\nc");
  Json arr = Json::array();
  arr.push_back(2.0);
  arr.push_back(false);
  j.set("arr", std::move(arr));
  std::string s = j.dump();
  CHECK(s.find("0.123456789012") != std::string::npos);
  // insertion order preserved
  CHECK(s.find("b_second") < s.find("a_first"));
  CHECK(s.find("\\\"") != std::string::npos);
  CHECK(s.find("\\n") != std::string::npos);
  CHECK(Json(123456789.0).dump().find("123456789") != std::string::npos);
}

TEST_CASE("csv writer quotes embedded separators") {
  CsvWriter csv({"id", "note"});
  csv.add_row({"a", "plain"});
  csv.add_row({"b", "with,comma"});
  std::string s = csv.dump();
  CHECK(s.find("\"with,comma\"") != std::string::npos);
  CHECK_THROWS_AS(csv.add_row({"only-one"}), std::invalid_argument);
}

TEST_CASE("svg canvas emits well-formed primitives") {
  SvgCanvas canvas(Box2{{-1, -1}, {1, 1}});
  canvas.add_circle({{0, 0}}, 1.0, "black");
  canvas.add_polyline({{{-0.5, 0}}, {{0.5, 0.2}}}, "#1f77b4");
  canvas.add_dot({{0.1, 0.1}}, "red");
  std::string s = canvas.dump();
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("<circle") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
}

TEST_CASE("config file parsing") {
  std::string path = "test_config.tmp";
  {
    std::ofstream out(path);
    out << "# comment\ncommand = cap\nshape = annulus:0.5,1\np = 2\nres = 64\nseed = 7\n";
  }
  auto cfg = parse_config_file(path);
  CHECK(cfg.command == "cap");
  CHECK(cfg.shape == "annulus:0.5,1");
  CHECK(cfg.p == 2.0);
  CHECK(cfg.res == 64);
  CHECK(cfg.seed == 7);
  {
    std::ofstream out(path);
    out << "bogus = 1\n";
  }
  CHECK_THROWS_WITH(parse_config_file(path), Catch::Matchers::ContainsSubstring("unknown config key"));
  std::remove(path.c_str());
}

TEST_CASE("descriptor parsing errors") {
  CHECK_THROWS_WITH(parse_domain2("trapezoid:1"),
                    Catch::Matchers::ContainsSubstring("unknown domain kind"));
  CHECK_THROWS_WITH(parse_condenser<2>("blob:1,2"),
                    Catch::Matchers::ContainsSubstring("unknown condenser kind"));
  ImplicitSet<2> disk = parse_domain2("disk:1");
  CHECK_THROWS_WITH(parse_mapping2("swirl:3", disk),
                    Catch::Matchers::ContainsSubstring("unknown mapping kind"));
  CHECK_THROWS_AS(parse_mapping2("linear:1,2", disk), std::invalid_argument);
  CHECK(parse_points2("0.1,0.2;0.3,0.4").size() == 2);
  CHECK_THROWS_AS(parse_points2("0.1"), std::invalid_argument);
  auto pairs = parse_pairs2("0,0:1,1;0.5,0:0,0.5");
  CHECK(pairs.size() == 2);
  CHECK_THROWS_AS(parse_pairs2("0,0-1,1"), std::invalid_argument);
}

TEST_CASE("composed mapping descriptor round-trips through the parser") {
  ImplicitSet<2> disk = parse_domain2("disk:1");
  auto phi = parse_mapping2("composed:[radial:4;linear:2,0,0,1]", disk);
  CHECK(phi.kind == MappingKind::Composed);
  CHECK(validate_round_trip(phi, 2000, 1e-8));
}

TEST_CASE("exit codes: pass, violation, configuration error") {
  std::ostringstream sink;
  RunConfig cfg;
  cfg.command = "cap";
  cfg.shape = "annulus:0.5,1";
  cfg.p = 2.0;
  cfg.res = 96;
  CHECK(run(cfg, sink) == 0);

  cfg.p = 0.5;  // precondition violation -> configuration error
  std::ostringstream err;
  CHECK(run(cfg, err) == 2);
  CHECK(err.str().find("p must exceed 1") != std::string::npos);

  cfg.p = 2.0;
  cfg.command = "rotate";
  CHECK(run(cfg, sink) == 2);

  cfg.command = "cap";
  cfg.shape = "blob:1";
  CHECK(run(cfg, sink) == 2);
}

TEST_CASE("cap pipeline reports value, bracket, and oracle on annuli") {
  std::ostringstream out;
  RunConfig cfg;
  cfg.command = "cap";
  cfg.shape = "annulus:0.5,1";
  cfg.p = 2.0;
  cfg.res = 128;
  REQUIRE(run(cfg, out) == 0);
  std::string s = out.str();
  CHECK(s.find("\"value\"") != std::string::npos);
  CHECK(s.find("\"oracle\"") != std::string::npos);
  CHECK(s.find("\"lower_bound\"") != std::string::npos);
  CHECK(s.find("\"upper_bound\"") != std::string::npos);
  CHECK(s.find("\"seed\"") != std::string::npos);
}

TEST_CASE("identical config and seed reproduce byte-identical output") {
  auto run_once = [](const RunConfig& cfg) {
    std::ostringstream out;
    REQUIRE(run(cfg, out) == 0);
    return out.str();
  };
  RunConfig cfg;
  cfg.command = "verify-ring";
  cfg.map = "radial:4";
  cfg.rings = "origin-centered:3";
  cfg.p = 2.0;
  cfg.res = 48;
  cfg.seed = 0;
  CHECK(run_once(cfg) == run_once(cfg));

  RunConfig mc;
  mc.command = "setfunc";
  mc.map = "identity";
  mc.p = 3.0;
  mc.q = 2.0;
  mc.res = 64;
  mc.budget = 24;
  mc.partition = 2;
  CHECK(run_once(mc) == run_once(mc));
}

TEST_CASE("distort pipeline emits the distortion summary") {
  std::ostringstream out;
  RunConfig cfg;
  cfg.command = "distort";
  cfg.map = "radial:4";
  cfg.p = 2.0;
  cfg.res = 96;
  REQUIRE(run(cfg, out) == 0);
  CHECK(out.str().find("\"K_pq\"") != std::string::npos);
  CHECK(out.str().find("\"finite_distortion_ok\": true") != std::string::npos);
}

TEST_CASE("unknown acceptance criterion is a configuration error") {
  AcceptanceOptions opts;
  opts.only = {13};
  CHECK_THROWS_WITH(run_acceptance_suite(opts, std::cout),
                    Catch::Matchers::ContainsSubstring("unknown criterion"));
}

TEST_CASE("convergence criteria report insufficient resolution instead of failing") {
  AcceptanceOptions opts;
  opts.res = 32;
  opts.only = {1, 2};
  std::ostringstream sink;
  auto cs = acceptance::run_battery(opts, &sink);
  REQUIRE(cs.size() == 2);
  for (const auto& c : cs) {
    CHECK_FALSE(c.applicable);
    CHECK(c.pass);
    CHECK(c.detail == "insufficient resolution");
  }
}

TEST_CASE("worker count honours the thread cap") {
  setenv("RINGCAP_THREADS", "1", 1);
  CHECK(worker_count(16) == 1);
  unsetenv("RINGCAP_THREADS");
  CHECK(worker_count(1) == 1);
  CHECK(worker_count(16) >= 1);
}

TEST_CASE("metric pipeline with svg artifact") {
  std::ostringstream out;
  RunConfig cfg;
  cfg.command = "metric";
  cfg.domain = "disk:1";
  cfg.points = "0.4,0;0,0.4;-0.3,-0.1";
  cfg.p = 2.0;
  cfg.res = 64;
  cfg.svg = true;
  cfg.out = "test_metric_out.tmp";
  int code = run(cfg, out);
  CHECK(code == 0);
  CHECK(std::filesystem::exists("test_metric_out.tmp/summary.json"));
  CHECK(std::filesystem::exists("test_metric_out.tmp/curves.svg"));
  std::filesystem::remove_all("test_metric_out.tmp");
}
