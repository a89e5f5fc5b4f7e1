#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "outlift/curve.hpp"

#include <cmath>
#include <variant>
#include <vector>

using namespace outlift;

namespace {

const CrossingEvent& crossing_at(const TrackedLoop& loop, std::size_t k) {
  return std::get<CrossingEvent>(loop.events.at(k));
}

const PolylinePiece& polyline_at(const TrackedLoop& loop, std::size_t k) {
  return std::get<PolylinePiece>(loop.events.at(k));
}

int count_crossings(const TrackedLoop& loop) {
  int n = 0;
  for (const LoopEvent& e : loop.events)
    if (std::holds_alternative<CrossingEvent>(e)) ++n;
  return n;
}

// straight polyline between two points, uniform parameters
PolylinePiece seg(double t0, double t1, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                  int n) {
  PolylinePiece p{t0, t1, {}};
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    p.pts.push_back((1.0 - s) * a + s * b);
  }
  return p;
}

}  // namespace

TEST_CASE("generator loops that avoid the chart carry one exterior crossing") {
  const ChartMap F = ChartMap::torus_shear(1, 2);
  for (int k : {2, 3}) {
    const TrackedLoop loop = generator_loop(k, F, 3);
    REQUIRE(loop.events.size() == 3);
    CHECK(std::holds_alternative<ExteriorStub>(loop.events[0]));
    CHECK(crossing_at(loop, 1).t == 0.5);
    CHECK(crossing_at(loop, 1).sphere == k);
    CHECK(crossing_at(loop, 1).sign == 1);
    CHECK(std::holds_alternative<ExteriorStub>(loop.events[2]));
    validate_loop(loop, F);
  }
  // the ball chart is met only by its own generator
  const ChartMap G = ChartMap::ball_half_turn(2);
  CHECK(generator_loop(1, G, 3).events.size() == 3);
  CHECK(generator_loop(2, G, 3).events.size() == 7);
}

TEST_CASE("the torus generator loop emerges from the removed ball and runs outward") {
  const ChartMap F = ChartMap::torus_shear(1, 2);
  const TrackedLoop loop = generator_loop(1, F, 3, 64);
  REQUIRE(loop.events.size() == 4);
  CHECK(crossing_at(loop, 1).t == 0.25);
  CHECK(crossing_at(loop, 1).sphere == 1);
  CHECK(crossing_at(loop, 1).sign == 1);
  const PolylinePiece& p = polyline_at(loop, 2);
  CHECK(p.t0 == 0.25);
  CHECK(p.t1 == 0.75);
  REQUIRE(p.pts.size() == 64);
  CHECK((p.pts.front() - Eigen::Vector3d(1.0 / 3.0, 0.0, 0.0)).norm() == 0.0);
  CHECK((p.pts.back() - Eigen::Vector3d(1.0, 0.0, 0.0)).norm() == 0.0);
  validate_loop(loop, F);
}

TEST_CASE("the collar generator loop spans the shell radially") {
  const ChartMap T = ChartMap::sphere_twist(2);
  const TrackedLoop loop = generator_loop(2, T, 3, 32);
  REQUIRE(loop.events.size() == 4);
  const PolylinePiece& p = polyline_at(loop, 2);
  CHECK((p.pts.front() - Eigen::Vector3d(1.0, 0.0, 0.0)).norm() == 0.0);
  CHECK((p.pts.back() - Eigen::Vector3d(2.0, 0.0, 0.0)).norm() == 0.0);
  validate_loop(loop, T);
}

TEST_CASE("the ball generator loop descends, crosses once, and retraces mirrored") {
  const ChartMap G = ChartMap::ball_half_turn(1);
  const TrackedLoop loop = generator_loop(1, G, 2, 48);
  REQUIRE(loop.events.size() == 7);
  CHECK(std::holds_alternative<ExteriorStub>(loop.events[0]));
  CHECK(std::holds_alternative<CrossingEvent>(loop.events[3]));
  CHECK(crossing_at(loop, 3).t == 0.5);
  CHECK(crossing_at(loop, 3).sign == 1);

  const PolylinePiece& g1 = polyline_at(loop, 1);
  const PolylinePiece& g2a = polyline_at(loop, 2);
  const PolylinePiece& g2b = polyline_at(loop, 4);
  const PolylinePiece& g3 = polyline_at(loop, 5);

  CHECK((g1.pts.front() - Eigen::Vector3d(0.0, 0.0, 1.0)).norm() == 0.0);
  CHECK((g1.pts.back() - Eigen::Vector3d(0.0, 0.0, 1.0 / 3.0)).norm() == 0.0);
  // approach lands on the minus ball, continuation leaves the plus ball
  CHECK(G.ball_side(g2a.pts.back()) == BallSide::Minus);
  CHECK(G.ball_side(g2b.pts.front()) == BallSide::Plus);
  // the continuation is the exact mirrored reverse of the approach
  REQUIRE(g2b.pts.size() == g2a.pts.size());
  for (std::size_t m = 0; m < g2a.pts.size(); ++m) {
    const Eigen::Vector3d& a = g2a.pts[g2a.pts.size() - 1 - m];
    CHECK(g2b.pts[m].x() == -a.x());
    CHECK(g2b.pts[m].y() == -a.y());
    CHECK(g2b.pts[m].z() == a.z());
  }
  // the exit retraces the entry
  for (std::size_t m = 0; m < g1.pts.size(); ++m)
    CHECK((g3.pts[m] - g1.pts[g1.pts.size() - 1 - m]).norm() == 0.0);
  validate_loop(loop, G);
}

TEST_CASE("generator_loop validates its arguments") {
  const ChartMap F = ChartMap::torus_shear(1, 3);
  CHECK_THROWS_AS(generator_loop(0, F, 3), std::invalid_argument);
  CHECK_THROWS_AS(generator_loop(4, F, 3), std::invalid_argument);
  CHECK_THROWS_AS(generator_loop(1, F, 2), std::invalid_argument);  // map mentions a_3
  CHECK_THROWS_AS(generator_loop(1, F, 3, 1), std::invalid_argument);
}

TEST_CASE("image words read the pi_1 action of each chart map") {
  const ChartMap F = ChartMap::torus_shear(1, 2);
  CHECK(to_text(read_word(image_under(F, generator_loop(1, F, 3)))) == "a1 a2");
  CHECK(to_text(read_word(image_under(F, generator_loop(2, F, 3)))) == "a2");
  CHECK(to_text(read_word(image_under(F, generator_loop(3, F, 3)))) == "a3");

  const ChartMap G = ChartMap::ball_half_turn(1);
  const TrackedLoop img = image_under(G, generator_loop(1, G, 3));
  CHECK(to_text(read_word(img)) == "a1^-1");
  CHECK(count_crossings(img) == 1);
  validate_loop(img, G);
}

TEST_CASE("rho_of matches the nielsen generators across ranks") {
  for (int n : {2, 3}) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const NielsenAuto got = rho_of(ChartMap::torus_shear(i, j), n);
        CHECK(got.images == nielsen_generator(n, NielsenGen::right_mult(i, j)).images);
        CHECK(got.factorization.empty());  // read off geometry, not presumed
      }
    for (int j = 1; j <= n; ++j)
      CHECK(rho_of(ChartMap::ball_half_turn(j), n).images ==
            nielsen_generator(n, NielsenGen::invert(j)).images);
    for (int i = 1; i <= n; ++i)
      CHECK(is_identity(rho_of(ChartMap::sphere_twist(i), n)));
  }
}

TEST_CASE("theta-star crossings are inserted with the decrease-positive sign") {
  const ChartMap id = ChartMap::torus_shear(1, 2).with_zero_profile();
  // vertical path moving up through theta* = 1/2 at planar radius 0.9
  TrackedLoop up;
  up.rank = 2;
  // 32 vertices so no vertex lands exactly on theta*
  up.events = {ExteriorStub{0.0, 0.25},
               seg(0.25, 0.75, {0.9, 0.0, 0.45}, {0.9, 0.0, 0.55}, 32),
               ExteriorStub{0.75, 1.0}};
  // endpoints of this synthetic piece are interior, so only image_under it
  const TrackedLoop up_img = image_under(id, up);
  REQUIRE(count_crossings(up_img) == 1);
  const CrossingEvent up_c = crossing_at(up_img, 2);
  CHECK(up_c.sphere == 2);
  CHECK(up_c.sign == -1);
  CHECK(up_c.t == doctest::Approx(0.5).epsilon(1e-12));

  TrackedLoop down = up;
  auto& piece = std::get<PolylinePiece>(down.events[1]);
  std::reverse(piece.pts.begin(), piece.pts.end());
  const TrackedLoop down_img = image_under(id, down);
  REQUIRE(count_crossings(down_img) == 1);
  CHECK(crossing_at(down_img, 2).sign == 1);

  // wrap-around through theta = 0 must not register a theta* crossing
  TrackedLoop wrap;
  wrap.rank = 2;
  wrap.events = {ExteriorStub{0.0, 0.25},
                 seg(0.25, 0.75, {0.9, 0.0, 0.98}, {0.9, 0.0, 1.02}, 33),
                 ExteriorStub{0.75, 1.0}};
  auto& wp = std::get<PolylinePiece>(wrap.events[1]);
  for (Eigen::Vector3d& v : wp.pts) v.z() = wrap_unit(v.z());
  CHECK(count_crossings(image_under(id, wrap)) == 0);
}

TEST_CASE("image_under demands dense enough polylines") {
  const ChartMap id = ChartMap::torus_shear(1, 2).with_zero_profile();
  TrackedLoop sparse;
  sparse.rank = 2;
  sparse.events = {ExteriorStub{0.0, 0.25},
                   seg(0.25, 0.75, {0.9, 0.0, 0.30}, {0.9, 0.0, 0.42}, 2),
                   ExteriorStub{0.75, 1.0}};
  CHECK_THROWS_AS(image_under(id, sparse), ResampleNeeded);

  // a vertex sitting essentially on the crossing surface is also refused
  TrackedLoop grazing;
  grazing.rank = 2;
  grazing.events = {ExteriorStub{0.0, 0.25},
                    seg(0.25, 0.75, {0.9, 0.0, 0.5 + 1e-10}, {0.9, 0.0, 0.52}, 33),
                    ExteriorStub{0.75, 1.0}};
  CHECK_THROWS_AS(image_under(id, grazing), ResampleNeeded);

  // resampling doubles the interior vertex count and fixes the density
  const TrackedLoop doubled = resample_doubled(sparse);
  const auto& piece = std::get<PolylinePiece>(doubled.events[1]);
  CHECK(piece.pts.size() == 3);
  TrackedLoop dense = sparse;
  for (int k = 0; k < 3; ++k) dense = resample_doubled(dense);
  CHECK_NOTHROW(image_under(id, dense));
}

TEST_CASE("resampling is wrap-aware along the fibre") {
  TrackedLoop wrap;
  wrap.rank = 2;
  PolylinePiece p{0.25, 0.75, {{0.9, 0.0, 0.98}, {0.9, 0.0, 0.02}}};
  wrap.events = {ExteriorStub{0.0, 0.25}, p, ExteriorStub{0.75, 1.0}};
  const TrackedLoop r = resample_doubled(wrap);
  const auto& rp = std::get<PolylinePiece>(r.events[1]);
  REQUIRE(rp.pts.size() == 3);
  // the midpoint crosses theta = 0 rather than cutting through the chart
  const double mid = rp.pts[1].z();
  CHECK((mid >= 0.98 || mid <= 0.02));
}

TEST_CASE("read_word freely reduces the crossing sequence") {
  TrackedLoop loop;
  loop.rank = 2;
  loop.events = {ExteriorStub{0.0, 0.5}, CrossingEvent{0.2, 1, +1},
                 CrossingEvent{0.3, 1, -1}, CrossingEvent{0.4, 2, +1},
                 ExteriorStub{0.5, 1.0}};
  CHECK(to_text(read_word(loop)) == "a2");
}

TEST_CASE("loop_point interpolates polylines and skips the exterior") {
  const ChartMap F = ChartMap::torus_shear(1, 2);
  const TrackedLoop loop = generator_loop(1, F, 2, 64);
  CHECK_FALSE(loop_point(loop, F, 0.1).has_value());
  CHECK_FALSE(loop_point(loop, F, 0.9).has_value());
  const auto mid = loop_point(loop, F, 0.5);
  REQUIRE(mid.has_value());
  CHECK(mid->x() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(mid->y() == 0.0);
  const auto start = loop_point(loop, F, 0.25);
  REQUIRE(start.has_value());
  CHECK(start->x() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(loop_point(loop, F, 1.5), std::invalid_argument);
}

TEST_CASE("validate_loop rejects broken structures") {
  const ChartMap F = ChartMap::torus_shear(1, 2);
  TrackedLoop good = generator_loop(1, F, 2, 32);
  CHECK_NOTHROW(validate_loop(good, F));

  TrackedLoop gap = good;
  std::get<ExteriorStub>(gap.events[0]).t1 = 0.2;  // tiling hole before the crossing piece
  CHECK_THROWS_AS(validate_loop(gap, F), std::invalid_argument);

  TrackedLoop stray = good;
  std::get<PolylinePiece>(stray.events[2]).pts.back() = {0.7, 0.0, 0.25};  // interior endpoint
  CHECK_THROWS_AS(validate_loop(stray, F), std::invalid_argument);

  TrackedLoop outside = good;
  std::get<PolylinePiece>(outside.events[2]).pts[5] = {1.4, 0.0, 0.0};
  CHECK_THROWS_AS(validate_loop(outside, F), std::invalid_argument);

  TrackedLoop grazing = good;
  std::get<PolylinePiece>(grazing.events[2]).pts[5] = {0.8, 0.0, 0.5 + 1e-9};
  CHECK_THROWS_AS(validate_loop(grazing, F), std::invalid_argument);
}
