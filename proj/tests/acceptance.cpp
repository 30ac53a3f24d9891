// Acceptance gate: runs every verification suite and prints one line per
// criterion. Exit status is nonzero if any suite fails.

#include <cstdio>

#include "eigencrit/verify.hpp"

int main() {
  eigencrit::PipelineCache cache;
  int failures = 0;
  int idx = 0;
  for (const auto& name : eigencrit::suite_names()) {
    ++idx;
    eigencrit::SuiteResult res;
    bool threw = false;
    std::string err;
    try {
      res = eigencrit::run_suite(name, cache);
    } catch (const std::exception& e) {
      threw = true;
      err = e.what();
    }
    const bool pass = !threw && res.pass();
    std::printf("%d. %-18s %s\n", idx, name.c_str(), pass ? "PASS" : "FAIL");
    if (threw) {
      std::printf("     error: %s\n", err.c_str());
    } else {
      for (const auto& c : res.checks)
        if (!c.pass)
          std::printf("     failed: %s  (%s)\n", c.name.c_str(),
                      c.detail.c_str());
    }
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
