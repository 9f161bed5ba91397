#include <doctest.h>

#include "property_suites.h"

TEST_CASE("randomized property suites") {
  const auto results = vrt_tests::run_property_suites();
  CHECK(results.size() >= 10);
  for (const auto& r : results) {
    INFO(r.name);
    CHECK(r.cases >= 10000);
    CHECK(r.failures == 0);
  }
}
