#include <cmath>

#include <gtest/gtest.h>

#include "specid/graph.hpp"
#include "specid/hull.hpp"

using namespace specid;

TEST(Hull, RectangleMoments) {
  const auto h = convex_hull({{0, 1}, {4, 1}, {0, -1}, {4, -1}, {2, 0}}, false);
  EXPECT_EQ(h.vertices.size(), 4u);
  EXPECT_NEAR(h.area, 8.0, 1e-12);
  EXPECT_NEAR(std::abs(h.centroid - cdouble(2.0)), 0.0, 1e-12);
  EXPECT_NEAR(h.second_moment.real(), 5.0, 1e-12);
  EXPECT_NEAR(h.second_moment.imag(), 0.0, 1e-12);
  EXPECT_FALSE(h.degenerate);
}

TEST(Hull, MirroredUpperHalf) {
  // Mirroring the upper half of the rectangle recovers the whole rectangle.
  const auto h = convex_hull({{0, 1}, {4, 1}, {0, 0}, {4, 0}});
  EXPECT_NEAR(h.area, 8.0, 1e-12);
  EXPECT_NEAR(h.second_moment.real(), 5.0, 1e-12);
  EXPECT_NEAR(h.centroid.imag(), 0.0, 1e-12);
}

TEST(Hull, SegmentMoments) {
  const auto h = convex_hull({0.0, 6.0, 2.0, 3.5});
  EXPECT_TRUE(h.degenerate);
  EXPECT_NEAR(h.centroid.real(), 3.0, 1e-12);
  EXPECT_NEAR(h.second_moment.real(), 12.0, 1e-12);
  EXPECT_EQ(h.area, 0.0);

  const auto point = convex_hull({2.0, 2.0});
  EXPECT_TRUE(point.degenerate);
  EXPECT_NEAR(point.second_moment.real(), 4.0, 1e-12);
}

TEST(Hull, VerticesCounterclockwise) {
  const auto h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}, false);
  ASSERT_EQ(h.vertices.size(), 4u);
  double twice_area = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto a = h.vertices[i], b = h.vertices[(i + 1) % 4];
    twice_area += a.real() * b.imag() - b.real() * a.imag();
  }
  EXPECT_GT(twice_area, 0.0);
}

TEST(Hull, ContainsAndDistance) {
  const auto h = convex_hull({{0, 0}, {2, 0}, {0, 2}}, false);
  EXPECT_TRUE(h.contains({0.5, 0.5}));
  EXPECT_TRUE(h.contains({2, 0}));
  EXPECT_FALSE(h.contains({2, 2}));
  EXPECT_TRUE(h.contains({2.05, 0}, 0.1));
  EXPECT_NEAR(h.distance({3, 0}), 1.0, 1e-12);
  EXPECT_NEAR(h.distance({0.2, 0.2}), 0.0, 1e-12);
  EXPECT_NEAR(h.distance({-1, -1}), std::sqrt(2.0), 1e-12);
}

TEST(Hull, SymmetricMomentsAreReal) {
  Rng rng(2);
  ComplexList pts;
  for (int i = 0; i < 30; ++i) pts.emplace_back(rng.uniform(0, 5), rng.uniform(-2, 2));
  const auto h = convex_hull(pts);
  EXPECT_LT(std::abs(h.centroid.imag()), 1e-10);
  EXPECT_LT(std::abs(h.second_moment.imag()), 1e-10);
}

// Green's-theorem moments against Monte-Carlo integration over the polygon.
TEST(Hull, MomentsMatchMonteCarlo) {
  Rng rng(11);
  ComplexList pts;
  for (int i = 0; i < 12; ++i) pts.emplace_back(rng.uniform(1, 9), rng.uniform(0, 3));
  const auto h = convex_hull(pts);
  double xmin = INFINITY, xmax = -INFINITY, ymax = 0;
  for (const auto& v : h.vertices) {
    xmin = std::min(xmin, v.real());
    xmax = std::max(xmax, v.real());
    ymax = std::max(ymax, std::abs(v.imag()));
  }
  const int N = 1000000;
  double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
  int hits = 0;
  for (int i = 0; i < N; ++i) {
    const cdouble z(rng.uniform(xmin, xmax), rng.uniform(-ymax, ymax));
    if (!h.contains(z)) continue;
    ++hits;
    const double x = z.real(), w = (z * z).real();
    s1 += x;
    s1sq += x * x;
    s2 += w;
    s2sq += w * w;
  }
  const double m1 = s1 / hits, m2 = s2 / hits;
  const double se1 = std::sqrt((s1sq / hits - m1 * m1) / hits);
  const double se2 = std::sqrt((s2sq / hits - m2 * m2) / hits);
  EXPECT_LT(std::abs(m1 - h.centroid.real()), 3 * se1);
  EXPECT_LT(std::abs(m2 - h.second_moment.real()), 3 * se2);
  const double box = (xmax - xmin) * 2 * ymax;
  const double area_mc = box * hits / N;
  const double p = static_cast<double>(hits) / N;
  EXPECT_LT(std::abs(area_mc - h.area), 3 * box * std::sqrt(p * (1 - p) / N));
}
