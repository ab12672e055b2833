// Command-line front end: capacity solves, distortion norms, ring
// inequality batches, set-function estimates, capacitary metrics, and the
// acceptance suite. Exit codes: 0 all checks pass, 1 tolerance violations,
// 2 configuration or solver error.

#include <CLI11.hpp>

#include "ringcap/ringcap.hpp"

namespace {

void add_common(CLI::App* sub, ringcap::RunConfig& cfg) {
  sub->add_option("--p", cfg.p, "exponent p (> 1)");
  sub->add_option("--res", cfg.res, "grid resolution (cells across the largest extent)");
  sub->add_option("--seed", cfg.seed, "seed recorded in every output");
  sub->add_option("--tol", cfg.tol, "tolerance for pass/fail checks");
  sub->add_option("--out", cfg.out, "output directory for summary.json and ledgers");
}

int run_suite_command(const ringcap::RunConfig& cfg, const std::string& only_spec) {
  ringcap::AcceptanceOptions opts;
  opts.res = cfg.res;
  opts.seed = cfg.seed;
  if (!only_spec.empty()) {
    for (const auto& tok : ringcap::cfgdetail::split(only_spec, ',')) {
      if (ringcap::cfgdetail::trim(tok).empty()) continue;
      try {
        opts.only.insert(std::stoi(ringcap::cfgdetail::trim(tok)));
      } catch (const std::exception&) {
        throw std::invalid_argument("unknown criterion: " + tok);
      }
    }
  }
  auto outcome = ringcap::run_acceptance_suite(opts, std::cout);
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    outcome.summary.write_file(cfg.out + "/summary.json");
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ring condenser capacities, distortion, set functions, capacitary metrics"};
  app.require_subcommand(1);

  ringcap::RunConfig cfg;
  std::string config_path, only_spec;
  double q_flag = -1;

  auto* cap = app.add_subcommand("cap", "capacity of a single condenser");
  cap->add_option("--shape", cfg.shape, "condenser: annulus:rF,rG | ballring:cx,cy,rF,rG | "
                                        "boxcond:t,r[,l1,l2] | annulus3:rF,rG")->required();
  add_common(cap, cfg);

  auto* distort = app.add_subcommand("distort", "distortion norm K_{p,q} of a mapping");
  distort->add_option("--map", cfg.map, "identity | linear:a,b,c,d | radial:alpha | composed:[..;..]");
  distort->add_option("--q", q_flag, "exponent q (default: q = p)");
  distort->add_option("--domain", cfg.domain, "disk:R | box:x0,y0,x1,y1");
  add_common(distort, cfg);

  auto* verify = app.add_subcommand("verify-ring", "ring capacity inequality batch");
  verify->add_option("--map", cfg.map, "mapping descriptor");
  verify->add_option("--q", q_flag, "exponent q for the (p,q) inequality");
  verify->add_option("--rings", cfg.rings, "origin-centered:k | offcenter:k | desc;desc;...");
  verify->add_option("--domain", cfg.domain, "region the condensers live in");
  add_common(verify, cfg);

  auto* setfunc = app.add_subcommand("setfunc", "capacity set function and variation estimates");
  setfunc->add_option("--map", cfg.map, "mapping descriptor");
  setfunc->add_option("--q", q_flag, "exponent q < p");
  setfunc->add_option("--domain", cfg.domain, "region");
  setfunc->add_option("--budget", cfg.budget, "sampled condensers per estimate");
  setfunc->add_option("--partition", cfg.partition, "partition factor k (k x k boxes)");
  add_common(setfunc, cfg);

  auto* metric = app.add_subcommand("metric", "capacitary metric queries and axiom checks");
  metric->add_option("--domain", cfg.domain, "disk:R | box:x0,y0,x1,y1");
  metric->add_option("--points", cfg.points, "x,y;x,y;... sample points");
  metric->add_flag("--svg", cfg.svg, "emit an SVG overlay of the best curves");
  add_common(metric, cfg);

  auto* suite = app.add_subcommand("suite", "full acceptance battery");
  suite->add_option("--only", only_spec, "comma-separated criterion ids");
  add_common(suite, cfg);

  auto* runcmd = app.add_subcommand("run", "run from a key=value config file");
  runcmd->add_option("--config", config_path, "config file path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (runcmd->parsed()) {
      ringcap::RunConfig file_cfg = ringcap::parse_config_file(config_path);
      if (file_cfg.command == "suite") return run_suite_command(file_cfg, "");
      return ringcap::run(file_cfg);
    }
    if (q_flag > 0) cfg.q = q_flag;
    if (cap->parsed()) cfg.command = "cap";
    if (distort->parsed()) cfg.command = "distort";
    if (verify->parsed()) cfg.command = "verify-ring";
    if (setfunc->parsed()) cfg.command = "setfunc";
    if (metric->parsed()) cfg.command = "metric";
    if (suite->parsed()) {
      cfg.res = suite->count("--res") ? cfg.res : 256;
      return run_suite_command(cfg, only_spec);
    }
    return ringcap::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
