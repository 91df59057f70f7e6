#include "cts/validation.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char **argv)
{
  const std::string suite = argc > 1 ? argv[1] : "all";
  const auto results = cts::run_suite(suite);
  int failed = 0;
  for (const auto &r : results)
  {
    std::printf("[%s] criterion %d %s (%.1f s of %.0f s): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds, r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(results.size()) - failed, results.size());
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
