#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "roaddet/roaddet.hpp"

using namespace roaddet;
using roaddet::testing::kind_of;

namespace {

BinaryMask parse(const std::vector<std::string>& rows) {
  BinaryMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) m(x, y) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#';
  return m;
}

}  // namespace

TEST(Components, Empty) {
  EXPECT_EQ(connected_components(BinaryMask(4, 4, 0)).component_count, 0);
  EXPECT_EQ(count_set(largest_component(connected_components(BinaryMask(4, 4, 0)))), 0u);
}

TEST(Components, DiagonalsDependOnConnectivity) {
  const BinaryMask m = parse({"#..", ".#.", "..#"});
  EXPECT_EQ(connected_components(m, Connectivity::Eight).component_count, 1);
  EXPECT_EQ(connected_components(m, Connectivity::Four).component_count, 3);
}

TEST(Components, RasterOrderLabels) {
  const BinaryMask m = parse({"..#", "#..", "#.#"});
  const LabelMap l = connected_components(m, Connectivity::Four);
  EXPECT_EQ(l.labels(2, 0), 1);
  EXPECT_EQ(l.labels(0, 1), 2);
  EXPECT_EQ(l.labels(0, 2), 2);
  EXPECT_EQ(l.labels(2, 2), 3);
}

TEST(Components, MatchesFloodFillOn16x16) {
  roaddet::testing::Gen g(41);
  for (int k = 0; k < 50; ++k) {
    const BinaryMask m = g.mask(16, 16, 0.5);
    EXPECT_TRUE(oracle::same_partition(connected_components(m).labels, oracle::flood_labels(m, true)));
  }
}

TEST(Largest, PicksTheBiggest) {
  // Sizes 5, 9 and 2.
  const BinaryMask m = parse({
      "#####.....",
      "..........",
      "###.....##",
      "###.......",
      "###.......",
  });
  const BinaryMask big = largest_component(connected_components(m));
  EXPECT_EQ(count_set(big), 9u);
  EXPECT_EQ(big(0, 2), 1);
  EXPECT_EQ(big(0, 0), 0);
}

TEST(Largest, TieGoesToTheEarlierComponent) {
  const BinaryMask m = parse({"..##", "....", "##..", });
  const BinaryMask big = largest_component(connected_components(m));
  EXPECT_EQ(big(2, 0), 1);
  EXPECT_EQ(big(0, 2), 0);
}

TEST(Largest, SingleComponentIsIdentity) {
  const BinaryMask m = parse({".##.", ".#..", ".##."});
  EXPECT_EQ(largest_component(connected_components(m)), m);
}

TEST(FillHoles, RingCenterIsFilled) {
  const BinaryMask m = parse({".....", ".###.", ".#.#.", ".###.", "....."});
  const BinaryMask f = fill_holes(m);
  EXPECT_EQ(f(2, 2), 1);
  EXPECT_EQ(count_set(f), 9u);
}

TEST(FillHoles, BorderTouchingBackgroundStays) {
  const BinaryMask m = parse({"#####", "#...#", "#.#.#", "#....", "#####"});
  EXPECT_EQ(fill_holes(m), m);
  EXPECT_EQ(fill_holes(m), oracle::fill_holes(m));
}

TEST(FillHoles, HoleFreeMaskIsFixed) {
  const BinaryMask m = parse({"##..", "##..", "...#"});
  EXPECT_EQ(fill_holes(m), m);
}

TEST(FillHoles, DiagonalLeakDependsOnTheElement) {
  // The center touches the outside only diagonally.
  const BinaryMask m = parse({"....", ".##.", "#.#.", ".#..", "...."});
  EXPECT_EQ(fill_holes(m)(1, 2), 1);
  EXPECT_EQ(fill_holes(m, StructuringElement::square())(1, 2), 0);
}

TEST(StructuringElements, Validation) {
  EXPECT_EQ(kind_of([] { StructuringElement({{1, 0}, {-1, 0}}); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { StructuringElement({{0, 0}, {1, 0}}); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(StructuringElement().offsets().size(), 5u);
  EXPECT_EQ(StructuringElement::square().offsets().size(), 9u);
}

TEST(ConditionalDilation, StaysInsideTheConstraint) {
  const BinaryMask constraint = parse({"###.", "..#.", "..##"});
  BinaryMask seed(4, 3, 0);
  seed(0, 0) = 1;
  EXPECT_EQ(conditional_dilation(seed, constraint, {}), constraint);
  EXPECT_EQ(kind_of([&] { conditional_dilation(seed, BinaryMask(3, 3), {}); }), ErrorKind::DimensionMismatch);
}
