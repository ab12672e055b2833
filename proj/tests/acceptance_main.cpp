// Acceptance suite driver: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <cstring>
#include <iostream>

#include "ringcap/acceptance.hpp"

int main(int argc, char** argv) {
  ringcap::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--res") == 0 && i + 1 < argc) {
      opts.res = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      for (const auto& tok : ringcap::cfgdetail::split(argv[++i], ','))
        if (!tok.empty()) opts.only.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: ringcap_acceptance [--res N] [--seed S] [--only 1,2,...]\n";
      return 2;
    }
  }

  try {
    ringcap::Stopwatch sw;
    auto outcome = ringcap::run_acceptance_suite(opts, std::cout);
    int passed = 0;
    for (const auto& c : outcome.criteria) passed += c.pass ? 1 : 0;
    std::cout << "acceptance: " << passed << "/" << outcome.criteria.size()
              << " criteria passed in " << ringcap::format_double(sw.seconds(), 4)
              << "s\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
