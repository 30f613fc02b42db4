#include <cmath>

#include <gtest/gtest.h>

#include "dualsim/error.hpp"
#include "dualsim/events.hpp"
#include "dualsim/random.hpp"
#include "dualsim/screen.hpp"

using namespace dualsim;

TEST(ScreenGrid, CentersAndEdges) {
  const auto g = ScreenGrid::symmetric(2.0, 4);
  EXPECT_DOUBLE_EQ(g.width(), 1.0);
  EXPECT_EQ(g.centers(), (std::vector<double>{-1.5, -0.5, 0.5, 1.5}));
  EXPECT_EQ(g.edges(), (std::vector<double>{-2, -1, 0, 1, 2}));
  EXPECT_THROW((ScreenGrid{1.0, 1.0, 3}.validate()), Error);
  EXPECT_THROW((ScreenGrid{0.0, 1.0, 0}.validate()), Error);
}

TEST(ScreenPattern, PerEventMustSumToOne) {
  auto p = make_pattern(ScreenGrid{0, 3, 3}, {0.2, 0.3, 0.5});
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.edges(), (std::vector<double>{0, 1, 2, 3}));
  p.intensities[0] = 0.3;
  EXPECT_THROW(p.validate(), Error);
  p.normalization = Normalization::relative;
  EXPECT_NO_THROW(p.validate());
  const auto n = p.normalized();
  EXPECT_NEAR(n.total(), 1.0, 1e-15);
  EXPECT_EQ(n.normalization, Normalization::per_event);
}

TEST(ScreenPattern, RejectsNegativeOrNonUniform) {
  ScreenPattern p;
  p.positions = {0, 1, 2};
  p.intensities = {0.5, -0.1, 0.6};
  EXPECT_THROW(p.validate(), Error);
  p.intensities = {0.5, 0.2, 0.3};
  p.positions = {0, 1, 3};
  EXPECT_THROW(p.validate(), Error);
}

TEST(ScreenPattern, ZeroTotalCannotNormalize) {
  auto p = make_pattern(ScreenGrid{0, 2, 2}, {0.5, 0.5});
  p.intensities = {0, 0};
  p.normalization = Normalization::relative;
  try {
    (void)p.normalized();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_distribution);
  }
}

TEST(EventRecord, TagsAndEquality) {
  EventRecord e;
  EXPECT_FALSE(e.get(Tag::choice).has_value());
  e.set(Tag::choice, false);
  EXPECT_EQ(e.get(Tag::choice), false);
  EXPECT_FALSE(e.has(Tag::choice));
  e.set(Tag::choice, true);
  EXPECT_TRUE(e.has(Tag::choice));

  auto f = e;
  f.timeline = Timeline{1, 2};
  EXPECT_TRUE(e.same_outcome(f));
  EXPECT_FALSE(e == f);
  f.index = 3;
  EXPECT_FALSE(e.same_outcome(f));
}

TEST(Histogram, FindBinHalfOpenWithClosedLastBin) {
  const auto h = Histogram::empty({0, 1, 2, 3});
  EXPECT_EQ(h.find_bin(0.0), 0u);
  EXPECT_EQ(h.find_bin(1.0), 1u);
  EXPECT_EQ(h.find_bin(2.999), 2u);
  EXPECT_EQ(h.find_bin(3.0), 2u);
  EXPECT_FALSE(h.find_bin(-0.001).has_value());
  EXPECT_FALSE(h.find_bin(3.001).has_value());
}

TEST(Histogram, ValidateInvariants) {
  Histogram h = Histogram::empty({0, 1, 2});
  h.counts = {2, 3};
  h.total = 4;
  EXPECT_THROW(h.validate(), Error);
  h.total = 5;
  EXPECT_NO_THROW(h.validate());
  EXPECT_THROW(Histogram::empty({0, 0, 1}), Error);
  EXPECT_THROW(Histogram::empty({0}), Error);
}

TEST(Histogram, MergeIsAssociativeAndCommutative) {
  Histogram a = Histogram::empty({0, 1, 2});
  Histogram b = a;
  Histogram c = a;
  a.counts = {1, 2};
  a.total = 3;
  b.counts = {4, 0};
  b.total = 4;
  c.counts = {0, 7};
  c.total = 7;
  EXPECT_EQ(merge(a, b), merge(b, a));
  EXPECT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
  EXPECT_THROW(merge(a, Histogram::empty({0, 1, 3})), Error);
}

TEST(RandomStream, SubstreamsAreDeterministicAndDistinct) {
  const RandomStream base(42);
  auto a = base.substream(7, Channel::screen);
  auto b = base.substream(7, Channel::screen);
  auto c = base.substream(7, Channel::detector);
  auto d = base.substream(8, Channel::screen);
  const auto va = a.next_u64();
  EXPECT_EQ(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  EXPECT_NE(va, d.next_u64());
  EXPECT_NE(RandomStream(1).substream(0, Channel::screen).next_u64(),
            RandomStream(2).substream(0, Channel::screen).next_u64());
}

TEST(RandomStream, UniformInUnitInterval) {
  RandomStream r(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}
