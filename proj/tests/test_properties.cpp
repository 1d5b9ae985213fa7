#include "support/properties.hpp"

#include <gtest/gtest.h>

namespace {

constexpr int kCases = 1000;

void expect_holds(const props::Outcome& o) {
  EXPECT_EQ(o.cases, kCases);
  EXPECT_TRUE(o.ok()) << o.failures << " violations; " << o.first_failure;
}

}  // namespace

TEST(Properties, ProjectionIsIdempotent) { expect_holds(props::projection_idempotence(kCases, 1)); }
TEST(Properties, ChiSquareResidualsHaveZeroWeightedMarginals) {
  expect_holds(props::chi_square_marginals(kCases, 2));
}
TEST(Properties, SiteTotalsWithinCapacityBounds) { expect_holds(props::row_sum_bounds(kCases, 3)); }
TEST(Properties, BootstrapKeepsRowsGlued) { expect_holds(props::bootstrap_gluing(kCases, 4)); }
TEST(Properties, PartitionIdentity) { expect_holds(props::partition_identity(kCases, 5)); }
TEST(Properties, AffineInvariance) { expect_holds(props::affine_invariance(kCases, 6)); }
