#include <doctest.h>

#include "qsocount/check.hpp"
#include "qsocount/error.hpp"

using namespace qsocount;

namespace {

double metric(const SuiteReport& r, const std::string& key) {
  for (const auto& [k, v] : r.metrics)
    if (k == key) return v;
  FAIL("missing metric " << key);
  return 0;
}

}  // namespace

TEST_CASE("every suite passes a short run") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    auto r = run_suite(name, name == "estimator" ? 60 : 80, 0xC0FFEE);
    CHECK(r.suite == name);
    CHECK(r.failures == 0);
    CHECK(r.failed_trials.empty());
    CHECK_FALSE(r.metrics.empty());
  }
}

TEST_CASE("suites draw nontrivial instances") {
  auto p = run_suite("parsimony", 100, 1);
  CHECK(metric(p, "nonzero_fraction") > 0.3);
  CHECK(metric(p, "nonzero_fraction") < 1.0);
  CHECK(metric(p, "max_size") <= 22);
  CHECK(metric(p, "max_size") >= 8);
  auto s = run_suite("selfreduce", 100, 1);
  CHECK(metric(s, "nonzero_fraction") > 0.3);
  CHECK(metric(s, "nonzero_fraction") < 1.0);
}

TEST_CASE("suites are deterministic in the seed") {
  auto a = run_suite("product", 40, 99);
  auto b = run_suite("product", 40, 99);
  CHECK(a.metrics == b.metrics);
  auto c = run_suite("product", 40, 100);
  CHECK(a.seed != c.seed);
}

TEST_CASE("replay matches the trial") {
  auto r = replay_trial("selfreduce", 0x1234);
  CHECK(r.trials == 1);
  CHECK(r.failures == 0);
  auto again = replay_trial("selfreduce", 0x1234);
  CHECK(r.metrics == again.metrics);
  CHECK_FALSE(is_suite("nope"));
  CHECK(is_suite("mr"));
  try {
    run_suite("nope", 1, 1);
    FAIL("expected check.suite");
  } catch (const Error& e) {
    CHECK(e.code() == "check.suite");
  }
}
