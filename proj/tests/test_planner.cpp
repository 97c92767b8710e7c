#include <doctest.h>

#include <cmath>
#include <random>

#include "fovloc/planner.hpp"
#include "oracles.hpp"

using namespace fovloc;

namespace {

GridBelief point_mass(double area, double cell, std::size_t idx) {
  std::vector<double> w(Grid(area, cell).n_cells(), 0.0);
  w[idx] = 1.0;
  return GridBelief::from_weights(area, cell, w);
}

}  // namespace

TEST_CASE("action sets enumerate directions outer, heading rates inner") {
  const auto a = fov_action_set();
  REQUIRE(a.size() == 24);
  CHECK(a[0] == Action{0.0, 5.0, -10.0});
  CHECK(a[1] == Action{0.0, 5.0, 0.0});
  CHECK(a[2] == Action{0.0, 5.0, 10.0});
  CHECK(a[3] == Action{45.0, 5.0, -10.0});
  CHECK(a[23] == Action{315.0, 5.0, 10.0});
  const auto v = velocity_action_set();
  REQUIRE(v.size() == 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i].velocity_dir_deg == 45.0 * i);
    CHECK(v[i].heading_rate_dps == 0.0);
  }
}

TEST_CASE("propagate") {
  const UavState x(100.0, 100.0, 0.0);
  const auto n = propagate(x, {0.0, 5.0, 10.0}, 1.0);
  CHECK(n.north_m() == doctest::Approx(105.0));
  CHECK(n.east_m() == doctest::Approx(100.0));
  CHECK(n.heading_deg() == doctest::Approx(10.0));
  const auto e = propagate(x, {90.0, 5.0, -10.0}, 2.0);
  CHECK(e.north_m() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(e.east_m() == doctest::Approx(110.0));
  CHECK(e.heading_deg() == doctest::Approx(340.0));
  CHECK_THROWS_AS(propagate(x, {0.0, 5.0, 0.0}, 0.0), std::invalid_argument);

  // linear in dt: two half steps equal one whole step
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> dt(0.01, 3.0);
  for (const auto& u : fov_action_set()) {
    const double h = dt(rng);
    const auto whole = propagate(x, u, 2.0 * h);
    const auto halves = propagate(propagate(x, u, h), u, h);
    REQUIRE(whole.north_m() == doctest::Approx(halves.north_m()).epsilon(1e-12));
    REQUIRE(whole.east_m() == doctest::Approx(halves.east_m()).epsilon(1e-12));
    REQUIRE(std::abs(wrap_angle(whole.heading_deg() - halves.heading_deg())) < 1e-9);
  }
}

TEST_CASE("clamping keeps the UAV inside the area") {
  const auto c = propagate_clamped(UavState(198.0, 1.0, 0.0), {315.0, 5.0, 0.0}, 1.0, 200.0);
  CHECK(c.north_m() == 200.0);
  CHECK(c.east_m() == 0.0);
  const auto in = clamp_to_area(UavState(50.0, 60.0, 10.0), 200.0);
  CHECK(in.north_m() == 50.0);
  CHECK(in.east_m() == 60.0);
  CHECK(in.heading_deg() == 10.0);
}

TEST_CASE("mutual information of simple beliefs") {
  const FovModel m(120.0, 0.1);
  const UavState x(100.0, 100.0, 0.0);
  CHECK(mutual_information(point_mass(200.0, 5.0, 0), m, x) == 0.0);

  // noiseless sensor, half the mass ahead and half behind: one full bit
  const Grid g(200.0, 5.0);
  std::vector<double> w(g.n_cells(), 0.0);
  w[g.index(30, 20)] = 0.5;
  w[g.index(5, 20)] = 0.5;
  const auto split = GridBelief::from_weights(200.0, 5.0, w);
  CHECK(mutual_information(split, FovModel(120.0, 0.0), x) == std::log(2.0));

  // all mass between the cones: readings are coin flips
  std::fill(w.begin(), w.end(), 0.0);
  w[g.index(20, 30)] = 0.5;
  w[g.index(20, 5)] = 0.5;
  CHECK(mutual_information(GridBelief::from_weights(200.0, 5.0, w), m, x) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("mutual information matches enumeration on small grids") {
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<int> side(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> alpha(5.0, 180.0);
  std::uniform_real_distribution<double> mu(0.0, 0.45);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = side(rng);
    const double area = 5.0 * n;
    const auto b = GridBelief::from_weights(area, 5.0, oracle::random_weights(n * n, rng));
    const FovModel m(alpha(rng), mu(rng));
    const UavState x(-10.0 + unit(rng) * (area + 20.0), -10.0 + unit(rng) * (area + 20.0), 360.0 * unit(rng));
    const double mi = mutual_information(b, m, x);
    REQUIRE(std::abs(mi - oracle::fov_information_by_enumeration(b, m, x)) < 1e-12);
    REQUIRE(mi >= 0.0);
    REQUIRE(mi <= std::log(2.0) + 1e-15);
  }
}

TEST_CASE("bearing information matches a direct sum over bins and cells") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double sigma : {5.0, 20.0}) {
    const BearingModel m(sigma, 0.0);
    for (int trial = 0; trial < 40; ++trial) {
      const auto b = GridBelief::from_weights(40.0, 5.0, oracle::random_weights(64, rng));
      // include positions exactly on a cell center
      const SourcePosition at = trial % 5 == 0 ? SourcePosition{12.5, 22.5}
                                               : SourcePosition{60.0 * unit(rng) - 10.0, 60.0 * unit(rng) - 10.0};
      const double info = bearing_mutual_information(b, m, at);
      REQUIRE(std::abs(info - oracle::bearing_information_by_enumeration(b, m, at)) < 1e-12);
      REQUIRE(info >= -1e-15);
    }
  }
}

TEST_CASE("greedy FOV scores match brute force and the argmax") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const FovModel m(120.0, 0.1);
  const auto actions = fov_action_set();
  for (int trial = 0; trial < 30; ++trial) {
    const auto b = GridBelief::from_weights(60.0, 5.0, oracle::random_weights(144, rng));
    const UavState x(60.0 * unit(rng), 60.0 * unit(rng), 360.0 * unit(rng));
    const auto scores = score_fov_actions(b, x, m, actions, 1.0, 60.0);
    REQUIRE(scores.size() == actions.size());
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const double oracle_score =
          oracle::fov_information_by_enumeration(b, m, propagate_clamped(x, actions[i], 1.0, 60.0));
      REQUIRE(std::abs(scores[i] - oracle_score) < 1e-12);
      if (scores[i] > best_score) {
        best_score = scores[i];
        best = i;
      }
    }
    const auto sel = greedy_select(b, x, m, actions, 1.0, 60.0);
    CHECK(sel.index == best);
    CHECK(sel.score == scores[best]);
  }
}

TEST_CASE("greedy selection tie-breaks to the first action") {
  const FovModel m(120.0, 0.1);
  const auto pm = point_mass(200.0, 5.0, 1234);
  const auto sel = greedy_select(pm, UavState(100.0, 100.0, 0.0), m, fov_action_set(), 1.0, 200.0);
  CHECK(sel.index == 0);
  CHECK(sel.score == 0.0);
  const auto bsel = greedy_select(pm, UavState(100.0, 100.0, 0.0), BearingModel(5.0, 0.0), velocity_action_set(),
                                  1.0, 200.0);
  CHECK(bsel.index == 0);
  const std::vector<double> s{0.1, 0.3, 0.3, 0.2};
  CHECK(argmax_first(s) == 1);
  // rounding-level differences do not override the fixed order
  const std::vector<double> noise{0.0, 3e-17, -1e-17, 1e-16};
  CHECK(argmax_first(noise) == 0);
  const std::vector<double> real{0.0, 1e-9};
  CHECK(argmax_first(real) == 1);
}

TEST_CASE("greedy selection only sees the normalized belief") {
  std::mt19937_64 rng(71);
  const FovModel m(120.0, 0.1);
  auto w = oracle::random_weights(400, rng);
  const auto a = GridBelief::from_weights(100.0, 5.0, w);
  for (double& v : w) v *= 37.5;
  const auto b = GridBelief::from_weights(100.0, 5.0, w);
  const UavState x(40.0, 60.0, 15.0);
  CHECK(greedy_select(a, x, m, fov_action_set(), 1.0, 100.0).index ==
        greedy_select(b, x, m, fov_action_set(), 1.0, 100.0).index);
}

TEST_CASE("belief north of a north-facing UAV") {
  // Mass in a band straight ahead; the best successor is checked against a
  // brute-force pass over all 24 actions.
  const Grid g(200.0, 5.0);
  std::vector<double> w(g.n_cells(), 0.0);
  for (std::size_t r = 25; r < 40; ++r) {
    for (std::size_t c = 0; c < 40; ++c) w[g.index(r, c)] = 1.0;
  }
  const auto b = GridBelief::from_weights(200.0, 5.0, w);
  const FovModel m(120.0, 0.1);
  const UavState x(100.0, 100.0, 0.0);
  const auto actions = fov_action_set();
  const auto sel = greedy_select(b, x, m, actions, 1.0, 200.0);
  double best = -1.0;
  for (const auto& u : actions) {
    best = std::max(best, oracle::fov_information_by_enumeration(b, m, propagate_clamped(x, u, 1.0, 200.0)));
  }
  CHECK(std::abs(sel.score - best) < 1e-12);
  CHECK(sel.score > 0.0);
}

TEST_CASE("random selection is uniform and reproducible") {
  const auto actions = fov_action_set();
  Rng rng(73);
  std::vector<int> counts(actions.size(), 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[random_select(actions, rng)];
  for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 24.0) < 0.005);

  Rng r1(5), r2(5);
  for (int i = 0; i < 100; ++i) REQUIRE(random_select(actions, r1) == random_select(actions, r2));
}

TEST_CASE("waypoint lattice") {
  const auto pts = waypoint_lattice(200.0);
  REQUIRE(pts.size() == 100);
  CHECK(pts[0].north_m == 10.0);
  CHECK(pts[0].east_m == 10.0);
  CHECK(pts[1].north_m == 10.0);
  CHECK(pts[1].east_m == 30.0);
  CHECK(pts[99].north_m == 190.0);
  CHECK(pts[99].east_m == 190.0);
}

TEST_CASE("rfb waypoint selection") {
  const BearingModel m(5.0, 24.0);
  const auto lattice = waypoint_lattice(200.0);
  CHECK_THROWS_AS(rfb_select_waypoint(GridBelief::uniform(200.0, 5.0), m, {}), std::invalid_argument);

  const auto pm = point_mass(200.0, 5.0, 500);
  const auto tie = rfb_select_waypoint(pm, m, lattice);
  CHECK(tie.index == 0);
  CHECK(tie.score == 0.0);

  // two cells far apart: the chosen waypoint sees them at the widest angle
  const Grid g(200.0, 5.0);
  std::vector<double> w(g.n_cells(), 0.0);
  const std::size_t ia = g.index(4, 4), ib = g.index(35, 35);
  w[ia] = w[ib] = 0.5;
  const auto two = GridBelief::from_weights(200.0, 5.0, w);
  const auto sel = rfb_select_waypoint(two, m, lattice);
  auto separation = [&](const SourcePosition& p) {
    const auto& a = g.center(ia);
    const auto& c = g.center(ib);
    return std::abs(wrap_angle(bearing_from_offset(a.north_m - p.north_m, a.east_m - p.east_m) -
                               bearing_from_offset(c.north_m - p.north_m, c.east_m - p.east_m)));
  };
  double worst = 1e9, best_score = -1.0;
  for (const auto& p : lattice) {
    worst = std::min(worst, separation(p));
    best_score = std::max(best_score, oracle::bearing_information_by_enumeration(two, m, p));
  }
  CHECK(separation(lattice[sel.index]) > worst);
  CHECK(std::abs(sel.score - best_score) < 1e-12);
  CHECK(sel.score == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}
