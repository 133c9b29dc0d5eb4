#include "gasflow/time_series.hpp"

#include <gtest/gtest.h>

using gasflow::TimeSeries;

TEST(TimeSeries, ConstantHoldsEverywhere) {
  auto s = TimeSeries::constant(42.0);
  EXPECT_DOUBLE_EQ(s.value(0.0), 42.0);
  EXPECT_DOUBLE_EQ(s.value(13.7), 42.0);
  EXPECT_DOUBLE_EQ(s.value(24.0), 42.0);
}

TEST(TimeSeries, PiecewiseConstantHold) {
  TimeSeries s{{0.0, 10.0}, {6.0, 30.0}, {21.0, 15.0}};
  EXPECT_DOUBLE_EQ(s.value(0.0), 10.0);
  EXPECT_DOUBLE_EQ(s.value(5.999), 10.0);
  EXPECT_DOUBLE_EQ(s.value(6.0), 30.0);
  EXPECT_DOUBLE_EQ(s.value(20.5), 30.0);
  EXPECT_DOUBLE_EQ(s.value(21.0), 15.0);
  EXPECT_DOUBLE_EQ(s.value(23.99), 15.0);
}

TEST(TimeSeries, BeforeFirstBreakpointHoldsFirstValue) {
  TimeSeries s{{2.0, 5.0}, {10.0, 7.0}};
  EXPECT_DOUBLE_EQ(s.value(0.0), 5.0);
  EXPECT_DOUBLE_EQ(s.start_hour(), 2.0);
}

TEST(TimeSeries, RejectsNonIncreasingBreakpoints) {
  TimeSeries s;
  s.add(0.0, 1.0);
  EXPECT_THROW(s.add(0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(s.add(-1.0, 2.0), std::invalid_argument);
}

TEST(TimeSeries, MinMax) {
  TimeSeries s{{0.0, 10.0}, {6.0, 30.0}, {21.0, 15.0}};
  EXPECT_DOUBLE_EQ(s.min_value(), 10.0);
  EXPECT_DOUBLE_EQ(s.max_value(), 30.0);
}
