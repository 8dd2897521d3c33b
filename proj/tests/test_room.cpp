#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>

#include "modalrtf/room.hpp"
#include "test_support.hpp"

using namespace modalrtf;

namespace {

RoomModel test_room(int order) {
  return RoomModel::centered({6.0, 5.0, 2.5}, {0.9, 0.8, 0.7, 0.6, 0.5, 0.4}, order);
}

struct MirrorImage {
  Cartesian3 corner;
  Real amplitude;
  int order;
};

// Oracle: breadth-first mirroring of the source across the six wall planes,
// keeping the first (shortest) path to each distinct image position.
std::vector<MirrorImage> mirror_bfs(const RoomModel& room, const Cartesian3& y, int max_order) {
  auto key = [](const Cartesian3& p) {
    return std::array<long long, 3>{std::llround(p.x() * 1e9), std::llround(p.y() * 1e9),
                                    std::llround(p.z() * 1e9)};
  };
  std::map<std::array<long long, 3>, MirrorImage> seen;
  std::queue<MirrorImage> frontier;
  const MirrorImage start{y + room.origin_offset, 1.0, 0};
  seen.emplace(key(start.corner), start);
  frontier.push(start);
  while (!frontier.empty()) {
    const MirrorImage cur = frontier.front();
    frontier.pop();
    if (cur.order == max_order) continue;
    for (int wall = 0; wall < 6; ++wall) {
      const int d = wall / 2;
      const Real plane = wall % 2 == 0 ? 0.0 : room.dimensions[d];
      MirrorImage next = cur;
      next.corner[d] = 2.0 * plane - cur.corner[d];
      next.amplitude *= room.wall_reflection[static_cast<std::size_t>(wall)];
      next.order += 1;
      if (seen.emplace(key(next.corner), next).second) frontier.push(next);
    }
  }
  std::vector<MirrorImage> out;
  for (auto& [k, v] : seen) out.push_back(v);
  return out;
}

}  // namespace

TEST(ImageSources, CountsFollowLatticeShells) {
  const RoomModel room = test_room(3);
  const Cartesian3 y(0.3, -0.2, 0.1);
  EXPECT_EQ(enumerate_images(room, y, 0).size(), 1u);
  EXPECT_EQ(enumerate_images(room, y, 1).size(), 7u);
  EXPECT_EQ(enumerate_images(room, y, 2).size(), 25u);
  const auto three = enumerate_images(room, y, 3);
  EXPECT_EQ(std::count_if(three.begin(), three.end(), [](const ImageSource& s) { return s.order == 3; }), 38);
}

TEST(ImageSources, MatchBruteForceMirroring) {
  const RoomModel room = test_room(4);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Cartesian3 y = fixtures::random_in_ball(rng, 1.0);
    for (int order = 0; order <= 4; ++order) {
      const auto images = enumerate_images(room, y, order);
      const auto oracle = mirror_bfs(room, y, order);
      ASSERT_EQ(images.size(), oracle.size());
      for (const auto& want : oracle) {
        const Cartesian3 p = want.corner - room.origin_offset;
        const auto it = std::find_if(images.begin(), images.end(), [&](const ImageSource& s) {
          return (s.position - p).norm() < 1e-9;
        });
        ASSERT_NE(it, images.end());
        EXPECT_EQ(it->order, want.order);
        EXPECT_NEAR(it->amplitude, want.amplitude, 1e-15);
      }
    }
  }
}

TEST(ImageSources, SortedAndDirectFirst) {
  const Cartesian3 y(0.5, 0.5, 0.2);
  const auto images = enumerate_images(test_room(2), y, 2);
  EXPECT_EQ(images.front().order, 0);
  EXPECT_NEAR((images.front().position - y).norm(), 0.0, 1e-15);
  EXPECT_EQ(images.front().amplitude, 1.0);
  for (std::size_t i = 1; i < images.size(); ++i) EXPECT_LE(images[i - 1].order, images[i].order);
}

TEST(Oracle, Reciprocity) {
  const RoomModel room = test_room(3);
  std::mt19937_64 rng(5);
  const WaveContext ctx(640.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Cartesian3 x = fixtures::random_in_ball(rng, 1.1);
    const Cartesian3 y = fixtures::random_in_ball(rng, 1.1) + Cartesian3(1.0, 0.8, 0.0);
    const Complex a = rtf_oracle(room, x, y, ctx);
    const Complex b = rtf_oracle(room, y, x, ctx);
    EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-12);
  }
}

TEST(Oracle, FreeFieldIsDirectPathOnly) {
  const RoomModel room = RoomModel::centered({6.0, 5.0, 2.5}, {0, 0, 0, 0, 0, 0}, 3);
  const WaveContext ctx(500.0);
  const Cartesian3 x(0.1, 0.2, -0.3), y(1.0, 1.0, 0.5);
  EXPECT_NEAR(std::abs(rtf_oracle(room, x, y, ctx) - direct_field(x, y, ctx)), 0.0, 1e-16);
  const RoomModel order0 = test_room(0);
  EXPECT_NEAR(std::abs(rtf_oracle(order0, x, y, ctx) - direct_field(x, y, ctx)), 0.0, 1e-16);
}

TEST(Oracle, RigidFirstOrderClosedForm) {
  // One image per wall: sum the six mirror distances by hand.
  const RoomModel room = RoomModel::centered({4.0, 3.0, 2.0}, {1, 1, 1, 1, 1, 1}, 1);
  const WaveContext ctx(300.0);
  const Cartesian3 x(0.2, 0.1, 0.0), y(-0.5, 0.3, 0.4);
  const Cartesian3 c = y + room.origin_offset;
  Complex want = direct_field(x, y, ctx);
  for (int d = 0; d < 3; ++d) {
    Cartesian3 low = c, high = c;
    low[d] = -c[d];
    high[d] = 2.0 * room.dimensions[d] - c[d];
    want += direct_field(x, low - room.origin_offset, ctx);
    want += direct_field(x, high - room.origin_offset, ctx);
  }
  EXPECT_NEAR(std::abs(rtf_oracle(room, x, y, ctx) - want), 0.0, 1e-15);
}

TEST(Oracle, Validation) {
  const RoomModel room = test_room(2);
  const WaveContext ctx(500.0);
  EXPECT_THROW(rtf_oracle(room, {5.0, 0, 0}, {0, 0, 0.1}, ctx), DomainError);
  EXPECT_THROW(rtf_oracle(room, {0, 0, 0.1}, {5.0, 0, 0}, ctx), DomainError);
  EXPECT_THROW(rtf_oracle(room, {0, 0, 0.1}, {0, 0, 0.1}, ctx), DomainError);
  RoomModel bad = room;
  bad.wall_reflection[2] = 1.5;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = room;
  bad.origin_offset.x() = 7.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_TRUE(room.contains({2.9, 2.4, 1.2}));
  EXPECT_FALSE(room.contains({3.0, 0.0, 0.0}));
}
