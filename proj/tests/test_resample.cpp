#include "vpboot/resample.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vpboot;

namespace {

CommunityTable small_table(Index n) {
  Matrix v(n, 2);
  for (Index i = 0; i < n; ++i) v.row(i) << static_cast<double>(i), static_cast<double>(2 * i + 1);
  return CommunityTable::from_values(v);
}

PredictorBlock small_block(Index n) {
  Matrix v(n, 1);
  for (Index i = 0; i < n; ++i) v(i, 0) = 100.0 + static_cast<double>(i);
  return PredictorBlock::from_values("env", v);
}

}  // namespace

TEST(ResampleRows, IdenticalRowsAreInvariant) {
  const auto table = CommunityTable::from_values(Matrix::Constant(6, 3, 4.0));
  SplitMix64 rng(1);
  const auto r = resample_rows(table, {}, rng);
  EXPECT_EQ(r.table.values(), table.values());
}

TEST(ResampleRows, SameSeedSameIndices) {
  const auto table = small_table(10);
  SplitMix64 a(42), b(42);
  EXPECT_EQ(resample_rows(table, {}, a).source_rows, resample_rows(table, {}, b).source_rows);
}

TEST(ResampleRows, RowsStayGluedAndLabelsAreSuffixed) {
  const auto table = small_table(8);
  const std::vector<PredictorBlock> blocks{small_block(8)};
  SplitMix64 rng(3);
  const auto r = resample_rows(table, blocks, rng);
  for (Index k = 0; k < 8; ++k) {
    const Index src = r.source_rows[static_cast<std::size_t>(k)];
    EXPECT_EQ(r.table.values()(k, 0), static_cast<double>(src));
    EXPECT_EQ(r.blocks[0].values()(k, 0), 100.0 + static_cast<double>(src));
    EXPECT_EQ(r.table.site_ids()[k], r.blocks[0].site_ids()[k]);
    EXPECT_EQ(r.table.site_ids()[k].rfind(table.site_ids()[src], 0), 0u);
  }
  std::set<std::string> unique(r.table.site_ids().begin(), r.table.site_ids().end());
  EXPECT_EQ(unique.size(), 8u);
}

TEST(ResampleRows, UniformFrequencies) {
  const auto table = small_table(10);
  std::vector<double> counts(10, 0.0);
  SplitMix64 rng(11);
  constexpr int resamples = 10000;
  for (int r = 0; r < resamples; ++r)
    for (Index i : draw_row_indices(10, rng)) counts[static_cast<std::size_t>(i)] += 1.0;
  for (double c : counts) EXPECT_NEAR(c / (10.0 * resamples), 0.1, 0.01);
}

TEST(ResampleRows, MisalignedBlockRejected) {
  const auto table = small_table(4);
  const std::vector<PredictorBlock> blocks{
      PredictorBlock("b", {"a", "b", "c", "d"}, {"v"}, Matrix::Ones(4, 1))};
  SplitMix64 rng(1);
  EXPECT_THROW(resample_rows(table, blocks, rng), InputError);
}

TEST(Summarize, ThreePointArithmetic) {
  const std::vector<double> v{0.1, 0.2, 0.3};
  const auto s = summarize("stat", v);
  EXPECT_NEAR(s.mean, 0.2, 1e-15);
  EXPECT_NEAR(s.sd, 0.1, 1e-15);
  EXPECT_NEAR(s.relative_uncertainty, 0.5, 1e-14);
  EXPECT_LE(s.ci95_low, s.ci95_high);
  EXPECT_NEAR(s.ci95_low, 0.105, 1e-15);
  EXPECT_NEAR(s.ci95_high, 0.295, 1e-15);
}

TEST(Summarize, OrderInvariant) {
  std::vector<double> v{0.7, 0.1, 0.4, 0.35, 0.9, 0.2};
  const auto a = summarize("s", v);
  std::reverse(v.begin(), v.end());
  const auto b = summarize("s", v);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.sd, b.sd);
  EXPECT_EQ(a.ci95_low, b.ci95_low);
}

TEST(Summarize, ZeroMeanIsReportedNonFinite) {
  const std::vector<double> v{-1.0, 1.0};
  EXPECT_FALSE(std::isfinite(summarize("s", v).relative_uncertainty));
}

TEST(Bootstrap, ConstantStatisticCollapses) {
  const auto table = small_table(12);
  const auto s = bootstrap_statistic(
      table, {}, [](const CommunityTable&, std::span<const PredictorBlock>) {
        return std::vector<double>{0.42};
      },
      {"c"}, {50, 1, 1});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].sd, 0.0);
  EXPECT_EQ(s[0].relative_uncertainty, 0.0);
  EXPECT_EQ(s[0].ci95_low, 0.42);
  EXPECT_EQ(s[0].ci95_high, 0.42);
  EXPECT_EQ(s[0].replicate_count, 50);
}

TEST(Bootstrap, StandardErrorOfMean) {
  std::mt19937_64 g(5);
  std::normal_distribution<double> normal(3.0, 2.0);
  Matrix col(100, 1);
  for (Index i = 0; i < 100; ++i) col(i, 0) = normal(g);
  const double sd = std::sqrt((col.array() - col.mean()).square().sum() / 99.0);
  const auto s = bootstrap_indices(
      100, [&](const std::vector<Index>& rows) { return std::vector<double>{take_rows(col, rows).mean()}; },
      {"mean"}, {2000, 17, 0});
  EXPECT_NEAR(s[0].sd, sd / 10.0, 0.1 * sd / 10.0);
}

TEST(Bootstrap, DeterministicAcrossThreadCounts) {
  const auto table = small_table(15);
  auto stat = [](const CommunityTable& t, std::span<const PredictorBlock>) {
    return std::vector<double>{t.values().col(0).mean(), t.values().col(1).maxCoeff()};
  };
  const auto a = bootstrap_statistic(table, {}, stat, {"m", "x"}, {300, 9, 1});
  const auto b = bootstrap_statistic(table, {}, stat, {"m", "x"}, {300, 9, 4});
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(a[k].mean, b[k].mean);
    EXPECT_EQ(a[k].sd, b[k].sd);
    EXPECT_EQ(a[k].ci95_high, b[k].ci95_high);
  }
}

TEST(Bootstrap, FewDegenerateResamplesAreRedrawn) {
  // Fails whenever row 0 is drawn first: about 1 in 40 attempts.
  auto stat = [](const std::vector<Index>& rows) {
    if (rows.front() == 0) throw NumericalError("degenerate");
    return std::vector<double>{static_cast<double>(rows.front())};
  };
  const auto s = bootstrap_indices(40, stat, {"first"}, {400, 3, 1});
  EXPECT_GT(s[0].redrawn_replicates, 0);
  EXPECT_LE(s[0].redrawn_replicates, 20);
  EXPECT_EQ(s[0].replicate_count, 400);
}

TEST(Bootstrap, TooManyFailuresIsAnError) {
  auto stat = [](const std::vector<Index>& rows) {
    if (rows.front() < 5) throw NumericalError("degenerate");
    return std::vector<double>{1.0};
  };
  try {
    bootstrap_indices(10, stat, {"s"}, {200, 3, 1});
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("rate"), std::string::npos);
  }
}

TEST(Bootstrap, RequiresTwoReplicates) {
  EXPECT_THROW(bootstrap_indices(
                   5, [](const std::vector<Index>&) { return std::vector<double>{1.0}; }, {"s"},
                   {1, 0, 1}),
               InputError);
}
