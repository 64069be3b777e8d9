#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "manet/mobility/gauss_markov.hpp"
#include "manet/mobility/manhattan.hpp"
#include "manet/mobility/random_waypoint.hpp"
#include "manet/mobility/rpgm.hpp"
#include "manet/mobility/trace.hpp"
#include "oracles.hpp"

using namespace manet;
using namespace manet::mobility;
using sim::RngStream;
using sim::StreamId;

namespace {

const Field kField{500.0, 500.0, 25.0};

void check_inside(const MobilityTrace& tr, RngStream& rng, int samples = 2000) {
  for (int i = 0; i < samples; ++i) {
    const auto node = static_cast<NodeId>(rng.below(tr.node_count()));
    const double t = rng.uniform() * tr.duration();
    const Position p = tr.position_at(node, t);
    REQUIRE(tr.field().contains(p));
  }
}

}  // namespace

TEST_SUITE("mobility") {

TEST_CASE("field validation") {
  CHECK_NOTHROW(kField.validate());
  CHECK_THROWS(Field{0.0, 10.0, 0.0}.validate());
  CHECK_THROWS(Field{100.0, 100.0, 50.0}.validate());
  CHECK_THROWS(Field{100.0, 100.0, -1.0}.validate());
}

TEST_CASE("trace_position: waypoint times and midpoints") {
  MobilityTrace tr(kField, 20.0, {{{0.0, {0, 0}, 0}, {10.0, {10, 0}, 1.0}}});
  CHECK(tr.position_at(0, 5.0) == Position{5, 0});
  CHECK(tr.position_at(0, 10.0) == Position{10, 0});
  CHECK(tr.position_at(0, 0.0) == Position{0, 0});
  CHECK(tr.position_at(0, 15.0) == Position{10, 0});
  CHECK_THROWS_AS((void)tr.position_at(0, 20.5), std::out_of_range);
  CHECK_THROWS_AS((void)tr.position_at(0, -1.0), std::out_of_range);
  CHECK_THROWS_AS((void)tr.position_at(1, 1.0), std::out_of_range);
}

TEST_CASE("trace invariants are enforced") {
  CHECK_THROWS(MobilityTrace(kField, 10.0, {{{1.0, {0, 0}, 0}}}));
  CHECK_THROWS(MobilityTrace(kField, 10.0, {{{0.0, {0, 0}, 0}, {0.0, {1, 0}, 1}}}));
  CHECK_THROWS(MobilityTrace(kField, 10.0, {{{0.0, {0, 0}, 0}, {11.0, {1, 0}, 1}}}));
  CHECK_THROWS(MobilityTrace(kField, 10.0, {{{0.0, {-1, 0}, 0}}}));
  CHECK_THROWS(MobilityTrace(kField, 10.0, {{}}));
  CHECK_THROWS(MobilityTrace(kField, 0.0, {{{0.0, {0, 0}, 0}}}));
}

TEST_CASE("make_trace cuts the straddling leg") {
  auto tr = make_trace(kField, 5.0, {{{0.0, {0, 0}, 0}, {10.0, {10, 0}, 1.0}}});
  const auto w = tr.waypoints(0);
  REQUIRE(w.size() == 2);
  CHECK(w[1].time == 5.0);
  CHECK(w[1].pos == Position{5, 0});
}

TEST_CASE("trace cursor agrees with position_at") {
  RngStream rng(11, StreamId::mobility);
  auto tr = rwp_generate(kField, {20.0, 2.0}, 10, 100.0, rng);
  TraceCursor cur(tr);
  for (double t = 0.0; t <= 100.0; t += 0.37) {
    for (NodeId n = 0; n < 10; ++n) CHECK(cur.position(n, t) == tr.position_at(n, t));
  }
  // Going backwards restarts the cursor.
  CHECK(cur.position(3, 1.0) == tr.position_at(3, 1.0));
}

TEST_CASE("rwp: speeds in (0, v_max] and exact pauses") {
  RngStream rng(1, StreamId::mobility);
  const RwpConfig cfg{20.0, 10.0};
  auto tr = rwp_generate(kField, cfg, 30, 500.0, rng);
  int pauses = 0;
  for (NodeId n = 0; n < 30; ++n) {
    const auto w = tr.waypoints(n);
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (w[k].pos == w[k - 1].pos) {
        // pause leg: ends exactly pause seconds after the arrival (unless cut)
        CHECK(w[k].speed == 0.0);
        if (w[k].time < tr.duration()) {
          CHECK(w[k].time - w[k - 1].time == doctest::Approx(10.0).epsilon(1e-12));
          ++pauses;
        }
      } else {
        CHECK(w[k].speed > 0.0);
        CHECK(w[k].speed <= 20.0);
      }
    }
  }
  CHECK(pauses > 100);
}

TEST_CASE("rwp: tiny duration keeps nodes near their start") {
  RngStream rng(2, StreamId::mobility);
  auto tr = rwp_generate(kField, {20.0, 10.0}, 20, 0.001, rng);
  for (NodeId n = 0; n < 20; ++n) {
    const Position start = tr.position_at(n, 0.0);
    CHECK(distance(start, tr.position_at(n, 0.001)) <= 20.0 * 0.001 + 1e-12);
  }
}

TEST_CASE("rwp: rejects bad config") {
  RngStream rng(2, StreamId::mobility);
  CHECK_THROWS(rwp_generate(kField, {0.0, 10.0}, 2, 10.0, rng));
  CHECK_THROWS(rwp_generate(kField, {-1.0, 10.0}, 2, 10.0, rng));
}

TEST_CASE("rpgm_member_velocity examples") {
  RpgmConfig cfg;
  cfg.sdr = 0.0;
  cfg.adr = 0.0;
  cfg.max_speed = 20.0;
  RngStream rng(1, StreamId::mobility);
  const Velocity v = rpgm_member_velocity({5.0, 1.0}, cfg, rng);
  CHECK(v.speed == 5.0);
  CHECK(v.direction == 1.0);

  cfg.sdr = 1.0;
  cfg.max_speed = 10.0;
  CHECK(rpgm_member_velocity({5.0, 1.0}, cfg, 0.5, 0.0).speed == 10.0);
  CHECK_THROWS(rpgm_member_velocity({11.0, 1.0}, cfg, 0.0, 0.0));
}

TEST_CASE("rpgm_member_velocity deviation bound over 1e5 draws") {
  RpgmConfig cfg;
  cfg.sdr = 0.1;
  cfg.adr = 0.1;
  cfg.max_speed = 20.0;
  RngStream rng(4, StreamId::mobility);
  for (int i = 0; i < 100000; ++i) {
    const Velocity leader{rng.uniform(0.0, 20.0), rng.uniform(0.0, kTwoPi)};
    const Velocity v = rpgm_member_velocity(leader, cfg, rng);
    REQUIRE(std::abs(v.speed - leader.speed) <= 0.1 * 20.0 + 1e-12);
    REQUIRE((v.speed >= 0.0 && v.speed <= 20.0));
    REQUIRE((v.direction >= 0.0 && v.direction < kTwoPi));
    const double dd = std::abs(std::remainder(v.direction - leader.direction, kTwoPi));
    REQUIRE(dd <= 0.1 * std::numbers::pi + 1e-12);
  }
}

TEST_CASE("rpgm: zero-deviation degeneracy") {
  RpgmConfig cfg;
  cfg.group_count = 1;
  cfg.sdr = 0.0;
  cfg.adr = 0.0;
  cfg.member_spread = 0.0;
  cfg.max_speed = 15.0;
  RngStream rng(8, StreamId::mobility);
  auto out = rpgm_generate(kField, cfg, 6, 100.0, rng);
  const auto& ref = out.references;
  for (NodeId n = 0; n < 6; ++n) {
    // Every member waypoint sits exactly on the reference path.
    for (const auto& w : out.nodes.waypoints(n)) CHECK(w.pos == ref.position_at(0, w.time));
    // Every reference corner appears among the member's waypoints.
    for (const auto& rw : ref.waypoints(0)) {
      if (rw.time > 100.0) continue;
      CHECK(out.nodes.position_at(n, rw.time) == rw.pos);
    }
    for (double t = 0.0; t <= 100.0; t += 0.173) {
      CHECK(distance(out.nodes.position_at(n, t), ref.position_at(0, t)) <= 1e-9);
    }
  }
}

TEST_CASE("rpgm: round-robin groups of equal size") {
  RngStream rng(3, StreamId::mobility);
  RpgmConfig cfg;
  cfg.group_count = 10;
  auto out = rpgm_generate(kField, cfg, 100, 20.0, rng);
  std::vector<int> count(10, 0);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(out.group_of[i] == i % 10);
    ++count[out.group_of[i]];
  }
  for (int c : count) CHECK(c == 10);
  CHECK_THROWS(rpgm_generate(kField, cfg, 5, 20.0, rng));
}

TEST_CASE("rpgm: member distance from leader grows with sdr") {
  auto max_spread = [](double ratio) {
    RpgmConfig cfg;
    cfg.group_count = 4;
    cfg.sdr = ratio;
    cfg.adr = ratio;
    cfg.max_speed = 10.0;
    cfg.member_spread = 20.0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RngStream rng(seed, StreamId::mobility);
      auto out = rpgm_generate(kField, cfg, 40, 100.0, rng);
      for (double t = 0.0; t <= 100.0; t += 1.0) {
        for (NodeId n = 0; n < 40; ++n) {
          const Position ref = out.references.position_at(static_cast<NodeId>(out.group_of[n]), t);
          worst = std::max(worst, distance(out.nodes.position_at(n, t), ref));
        }
      }
    }
    return worst;
  };
  const double small = max_spread(0.05);
  const double large = max_spread(0.2);
  CHECK(std::isfinite(small));
  CHECK(small < 500.0 * std::sqrt(2.0));
  CHECK(large > small);
}

TEST_CASE("gm_update examples") {
  GaussMarkovConfig cfg;
  cfg.alpha = 1.0;
  cfg.max_speed = 50.0;
  const Field open{1000.0, 1000.0, 0.0};
  GaussMarkovState st{7.0, 1.0, 1.0, {500, 500}};
  RngStream rng(1, StreamId::mobility);
  for (int i = 0; i < 1000; ++i) {
    st = gm_update(st, cfg, open, rng);
    REQUIRE(st.speed == 7.0);
    REQUIRE(st.direction == 1.0);
  }

  cfg.alpha = 0.0;
  cfg.mean_speed = 10.0;
  CHECK(gm_update({3.0, 0.5, 0.5, {500, 500}}, cfg, open, 0.0, 0.0).speed == 10.0);

  cfg.alpha = 0.5;
  cfg.mean_speed = 8.0;
  const double s = gm_update({4.0, 0.5, 0.5, {500, 500}}, cfg, open, 2.0, 0.0).speed;
  CHECK(s == doctest::Approx(0.5 * 4 + 0.5 * 8 + std::sqrt(0.75) * 2).epsilon(1e-12));
  CHECK(s == doctest::Approx(7.732).epsilon(1e-4));

  GaussMarkovConfig bad;
  CHECK_THROWS(bad.validate());
  bad.alpha = 1.5;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("gm_update: edge forcing aims the mean at the centre") {
  GaussMarkovConfig cfg;
  cfg.alpha = 0.0;
  GaussMarkovState st{5.0, 0.0, 0.0, {10, 250}};  // near the left wall
  const auto next = gm_update(st, cfg, kField, 0.0, 0.0);
  CHECK(next.mean_direction == doctest::Approx(0.0).epsilon(1e-12));
  st.pos = {490, 250};
  CHECK(gm_update(st, cfg, kField, 0.0, 0.0).direction == doctest::Approx(std::numbers::pi));
  st.pos = {250, 495};
  CHECK(gm_update(st, cfg, kField, 0.0, 0.0).direction == doctest::Approx(1.5 * std::numbers::pi));
}

TEST_CASE("gm_advance examples") {
  GaussMarkovConfig cfg;
  cfg.alpha = 0.5;
  cfg.update_interval = 1.0;
  const Field f{100.0, 100.0, 0.0};
  Position p = gm_advance({5.0, 0.0, 0.0, {0, 0}}, cfg, f);
  CHECK(p.x == doctest::Approx(5.0));
  CHECK(p.y == doctest::Approx(0.0));
  p = gm_advance({5.0, std::numbers::pi / 2, 0.0, {0, 0}}, cfg, f);
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(5.0));
  CHECK(gm_advance({0.0, 1.0, 0.0, {3, 4}}, cfg, f) == Position{3, 4});
  // Reflection off the right wall.
  p = gm_advance({10.0, 0.0, 0.0, {95, 50}}, cfg, f);
  CHECK(p.x == doctest::Approx(95.0));
  CHECK(p.y == doctest::Approx(50.0));
}

TEST_CASE("gm: alpha=0 speeds are uncorrelated") {
  GaussMarkovConfig cfg;
  cfg.alpha = 0.0;
  cfg.mean_speed = 10.0;
  cfg.sigma_speed = 2.0;
  cfg.max_speed = 50.0;
  RngStream rng(5, StreamId::mobility);
  GaussMarkovState st{10.0, 0.0, 0.0, {250, 250}};
  std::vector<double> speeds;
  for (int i = 0; i < 10000; ++i) {
    st = gm_update(st, cfg, kField, rng);
    speeds.push_back(st.speed);
  }
  CHECK(std::abs(oracle::lag1_autocorrelation(speeds)) <= 0.05);
}

TEST_CASE("gm: alpha=1 trace keeps one speed") {
  GaussMarkovConfig cfg;
  cfg.alpha = 1.0;
  cfg.mean_speed = 8.0;
  cfg.max_speed = 20.0;
  RngStream rng(6, StreamId::mobility);
  auto tr = gm_generate(kField, cfg, 10, 100.0, rng);
  for (NodeId n = 0; n < 10; ++n) {
    const auto w = tr.waypoints(n);
    for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k].speed == 8.0);
  }
}

TEST_CASE("manhattan_turn frequencies") {
  RngStream rng(9, StreamId::mobility);
  std::vector<double> counts(3, 0.0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) counts[static_cast<int>(manhattan_turn(rng))] += 1.0;
  CHECK(counts[0] / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(counts[0] / n - 0.5) <= 0.005);
  CHECK(std::abs(counts[1] / n - 0.25) <= 0.005);
  CHECK(std::abs(counts[2] / n - 0.25) <= 0.005);
  CHECK(oracle::chi_square(counts, {0.5 * n, 0.25 * n, 0.25 * n}) < oracle::chi_square_critical_99(2));

  RngStream a(10, StreamId::mobility);
  RngStream b(10, StreamId::mobility);
  for (int i = 0; i < 1000; ++i) CHECK(manhattan_turn(a) == manhattan_turn(b));
}

TEST_CASE("manhattan: positions stay on street lines") {
  const ManhattanConfig cfg;
  RngStream rng(12, StreamId::mobility);
  auto tr = manhattan_generate(kField, cfg, 40, 100.0, rng);
  std::vector<double> lines;
  for (std::size_t i = 0; i < 6; ++i) lines.push_back(500.0 * static_cast<double>(i) / 5.0);
  auto on_line = [&](double v) {
    return std::any_of(lines.begin(), lines.end(), [&](double l) { return std::abs(v - l) <= 1e-9; });
  };
  for (double t = 0.0; t <= 100.0; t += 0.25) {
    for (NodeId n = 0; n < 40; ++n) {
      const Position p = tr.position_at(n, t);
      REQUIRE((on_line(p.x) || on_line(p.y)));
    }
  }
  CHECK_THROWS(ManhattanConfig{1, 6}.validate());
}

TEST_CASE("manhattan: lone node moves at its desired speed") {
  ManhattanConfig cfg;
  cfg.v_max = 10.0;
  RngStream rng(13, StreamId::mobility);
  ManhattanWalker w(kField, cfg, ManhattanWalker::random_placement(kField, cfg, 1, rng));
  for (int i = 0; i < 200; ++i) {
    w.step(rng);
    REQUIRE(w.state(0).speed == w.state(0).desired);
  }
}

TEST_CASE("manhattan: follower is held behind a slow leader") {
  ManhattanConfig cfg;
  cfg.v_max = 20.0;
  std::vector<LaneState> lanes(2);
  lanes[0] = {Axis::horizontal, 2, 1, 0.0, 10.0, 10.0, true};   // follower
  lanes[1] = {Axis::horizontal, 2, 1, 30.0, 2.0, 2.0, true};    // leader
  ManhattanWalker w(kField, cfg, lanes);
  RngStream rng(14, StreamId::mobility);
  int same_lane_steps = 0;
  for (int i = 0; i < 200; ++i) {
    const auto before = w.state(0);
    const auto lead = w.state(1);
    w.step(rng);
    const bool shared = before.axis == lead.axis && before.street == lead.street &&
                        before.heading == lead.heading && lead.coord > before.coord;
    if (shared && i > 20) {
      ++same_lane_steps;
      CHECK(w.state(0).speed <= 2.0 + 1e-12);
    }
    CHECK(w.state(1).speed == 2.0);
  }
  CHECK(same_lane_steps > 0);
}

TEST_CASE("all generators stay inside the field and are deterministic") {
  RngStream probe(99, StreamId::traffic);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (int model = 0; model < 4; ++model) {
      auto gen = [&] {
        RngStream rng(seed, StreamId::mobility);
        switch (model) {
          case 0:
            return rwp_generate(kField, {25.0, 10.0}, 20, 100.0, rng);
          case 1: {
            RpgmConfig c;
            c.group_count = 4;
            c.max_speed = 25.0;
            return rpgm_generate(kField, c, 20, 100.0, rng).nodes;
          }
          case 2: {
            GaussMarkovConfig c;
            c.alpha = 0.75;
            c.mean_speed = 12.5;
            c.sigma_speed = 6.25;
            c.max_speed = 25.0;
            return gm_generate(kField, c, 20, 100.0, rng);
          }
          default: {
            ManhattanConfig c;
            c.v_max = 25.0;
            return manhattan_generate(kField, c, 20, 100.0, rng);
          }
        }
      };
      const MobilityTrace a = gen();
      const MobilityTrace b = gen();
      CHECK(a == b);
      check_inside(a, probe);
    }
  }
}

TEST_CASE("interpolation matches a kinematic replay") {
  RngStream probe(7, StreamId::traffic);
  for (int model = 0; model < 4; ++model) {
    RngStream rng(21, StreamId::mobility);
    MobilityTrace tr;
    if (model == 0) tr = rwp_generate(kField, {20.0, 5.0}, 15, 100.0, rng);
    if (model == 1) tr = rpgm_generate(kField, RpgmConfig{}, 15, 100.0, rng).nodes;
    if (model == 2) {
      GaussMarkovConfig c;
      c.alpha = 0.5;
      tr = gm_generate(kField, c, 15, 100.0, rng);
    }
    if (model == 3) tr = manhattan_generate(kField, ManhattanConfig{}, 15, 100.0, rng);
    for (int i = 0; i < 3000; ++i) {
      const auto n = static_cast<NodeId>(probe.below(15));
      const double t = probe.uniform() * 100.0;
      const Position want = oracle::kinematic_replay(tr.waypoints(n), t);
      REQUIRE(distance(tr.position_at(n, t), want) <= 1e-9);
    }
  }
}

}  // TEST_SUITE
