// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "qgeom/suites.hpp"

using namespace qgeom;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Checks(Params&, Rng&)> run;
};

Checks concat(Checks a, const Checks& b) {
  append(a, b);
  return a;
}

}  // namespace

int main() {
  const std::uint64_t seed = 20261016;
  const std::vector<Criterion> criteria{
      {1, "gsn orthonormality", 10, [](Params& p, Rng& r) { return suites::gsn_checks(p, r); }},
      {2, "nice-surface inner product", 5, [](Params& p, Rng& r) { return suites::nice_surface_checks(p, r, nullptr); }},
      {3, "character zeros and orthonormal family", 5, [](Params& p, Rng& r) { return suites::character_zero_checks(p, r); }},
      {4, "weyl operator laws", 30,
       [](Params& p, Rng& r) { return concat(suites::weyl_unitarity_checks(p, r), suites::weyl_algebra_checks(p, r)); }},
      {5, "covariance", 30, [](Params& p, Rng& r) { return suites::covariance_checks(p, r); }},
      {6, "quasi-flux measure invariance", 60, [](Params& p, Rng& r) { return suites::quasi_flux_checks(p, r); }},
      {7, "minimal decomposition", 10, [](Params& p, Rng& r) { return suites::decomposition_checks(p, r, nullptr); }},
      {8, "stratified constructors", 30, [](Params& p, Rng& r) { return suites::strat_checks(p, r); }},
      {9, "casimir estimates", 60, [](Params& p, Rng& r) { return suites::casimir_checks(p, r); }},
      {10, "winding average", 120, [](Params& p, Rng& r) { return suites::winding_checks(p, r); }},
      {11, "regularity", 10, [](Params& p, Rng& r) { return suites::regularity_checks(p, r); }},
      {12, "subdivision", 10, [](Params& p, Rng& r) { return suites::subdivision_checks(p, r); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Params params;
    Rng rng(seed + static_cast<std::uint64_t>(c.id));
    Checks checks;
    std::string error;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      checks = c.run(params, rng);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks.push_back(check_le("runtime_s", secs, c.budget_s));
    const bool ok = error.empty() && all_pass(checks);
    if (!ok) ++failed;
    std::printf("%s criterion %2d  %-40s %7.2fs\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs);
    if (!error.empty()) std::printf("      error: %s\n", error.c_str());
    for (const auto& k : checks) {
      if (!k.pass) {
        std::printf("      %s: %.3e %s %.3e\n", k.name.c_str(), k.measured, k.at_least ? "<" : ">", k.bound);
      }
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
