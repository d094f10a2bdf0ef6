#include <gtest/gtest.h>

#include "ktaxi/tables.hpp"
#include "ktaxi/tree.hpp"

using namespace ktaxi;

TEST(Tables, CkdSmallValues) {
  for (int k = 0; k <= 12; ++k) EXPECT_EQ(c_kd(k, 1), k);
  EXPECT_EQ(c_kd(3, 3), 7);
  EXPECT_EQ(c_kd(3, 2), 6);
  EXPECT_EQ(c_kd_recurrence(3, 2), 6);
  EXPECT_EQ(c_kd(2, 2), 3);
  EXPECT_EQ(c_kd(0, 5), 0);
}

TEST(Tables, CkdFormulaMatchesRecurrence) {
  for (int k = 0; k <= 20; ++k) {
    for (int d = 0; d <= 12; ++d) {
      EXPECT_EQ(c_kd(k, d), c_kd_recurrence(k, d)) << k << "," << d;
      if (d >= k) EXPECT_EQ(c_kd(k, d), (BigInt(1) << k) - 1);
    }
  }
}

TEST(Tables, CkdLargeIsExact) {
  EXPECT_EQ(c_kd(60, 60), (BigInt(1) << 60) - 1);
  EXPECT_EQ(c_kd(100, 100), (BigInt(1) << 100) - 1);
}

TEST(Tables, BandsForTwoServers) {
  auto b = bands(2, 2);
  EXPECT_EQ(b.m, (std::vector<BigInt>{-3, -1}));
  EXPECT_EQ(b.M, (std::vector<BigInt>{5, 7}));
  EXPECT_EQ(b.c, 7);
}

TEST(Tables, BandsForThreeServers) {
  auto b = bands(3, 2);
  EXPECT_EQ(b.m, (std::vector<BigInt>{-5, -1}));
  EXPECT_EQ(b.M, (std::vector<BigInt>{13, 17}));
  EXPECT_EQ(b.c, 17);
  EXPECT_EQ(b.M[0] + 2 * b.m[0], 3);
}

TEST(Tables, BandPropertiesOverGrid) {
  for (int k = 2; k <= 10; ++k) {
    for (int d = 1; d <= 8; ++d) {
      auto b = bands(k, d);
      EXPECT_EQ(b.lower(d), -1);
      EXPECT_TRUE(check_band_properties(b).all());
    }
  }
  EXPECT_THROW(bands(1, 2), Error);
}

TEST(Tables, CheckedConversion) {
  EXPECT_EQ(to_int64(BigInt(42)), 42);
  EXPECT_THROW(to_int64(BigInt(1) << 70), Error);
}
