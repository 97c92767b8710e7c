#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fovloc/replay.hpp"
#include "fovloc/simulator.hpp"

using namespace fovloc;

namespace {

std::vector<LogRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_log(in, "mem");
}

// Record with the UAV at the origin heading north and the source at
// relative bearing `rel`.
LogRecord at_relative(double t, double rel, int z, std::string tag = {}) {
  return {t, 0.0, 0.0, 0.0, 10.0 * std::cos(rel * kDegToRad), 10.0 * std::sin(rel * kDegToRad), z, std::move(tag)};
}

const std::string kHeader = std::string(kLogHeader) + "\n";

}  // namespace

TEST_CASE("parsing well-formed logs") {
  const auto r = parse(kHeader + "0,1,2,3,4,5,1\n0.5,1,2,3,4,5,0\n1,1,2,3,4,5,1\n");
  REQUIRE(r.size() == 3);
  CHECK(r[1].t_s == 0.5);
  CHECK(r[2].src_east_m == 5.0);
  CHECK(r[1].z == 0);
  CHECK(parse(kHeader).empty());

  const auto tagged = parse(kHeader.substr(0, kHeader.size() - 1) + ",tag\n0,1,2,3,4,5,1,tx1\n");
  REQUIRE(tagged.size() == 1);
  CHECK(tagged[0].tag == "tx1");
}

TEST_CASE("parse errors name the line") {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const LogParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(kHeader + "0,1,2,3,4,5,1\n1,1,2,3,4,5,2\n").find("mem:3") != std::string::npos);
  CHECK(message(kHeader + "0,1,2,3,4,5\n").find("mem:2") != std::string::npos);
  CHECK(message(kHeader + "0,1,nan,3,4,5,1\n").find("mem:2") != std::string::npos);
  CHECK(message(kHeader + "0,1,abc,3,4,5,1\n").find("mem:2") != std::string::npos);
  CHECK(message(kHeader + "2,1,2,3,4,5,1\n1,1,2,3,4,5,1\n").find("mem:3") != std::string::npos);
  CHECK_FALSE(message("t,x\n0,1\n").empty());
  CHECK_FALSE(message("").empty());
}

TEST_CASE("loading from disk") {
  CHECK_THROWS_AS(load_log("/nonexistent/flight.csv"), std::runtime_error);
  const auto path = std::filesystem::temp_directory_path() / "fovloc_replay_test.csv";
  {
    std::ofstream os(path);
    os << kHeader << "0,0,0,0,10,0,1\n";
  }
  const auto r = load_log(path);
  REQUIRE(r.size() == 1);
  CHECK(classify(r[0], 120.0) == FovRegion::front_cone);
  std::filesystem::remove(path);
}

TEST_CASE("classification") {
  CHECK(classify(at_relative(0, 10.0, 1), 120.0) == FovRegion::front_cone);
  CHECK(classify(at_relative(0, 175.0, 1), 120.0) == FovRegion::rear_cone);
  CHECK(classify(at_relative(0, 90.0, 1), 120.0) == FovRegion::uncertainty);
  CHECK_THROWS_AS(classify(at_relative(0, 0.0, 1), 200.0), std::invalid_argument);
  CHECK_THROWS_AS(classify(at_relative(0, 0.0, 1), 0.0), std::invalid_argument);

  // agrees with the likelihood's branch on random records
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> pos(-50.0, 50.0), head(0.0, 360.0), alpha(1.0, 180.0);
  const double mu = 0.1;
  for (int i = 0; i < 5000; ++i) {
    const LogRecord rec{0.0, pos(rng), pos(rng), head(rng), pos(rng), pos(rng), 1, {}};
    const double a = alpha(rng);
    const double p1 = fov_likelihood(FovModel(a, mu), UavState(rec.uav_north_m, rec.uav_east_m, rec.heading_deg),
                                     {rec.src_north_m, rec.src_east_m}, 1);
    const FovRegion expect = p1 == 0.5 ? FovRegion::uncertainty : (p1 > 0.5 ? FovRegion::front_cone : FovRegion::rear_cone);
    REQUIRE(classify(rec, a) == expect);
  }
}

TEST_CASE("flight-log arithmetic fixtures") {
  std::vector<LogRecord> recs;
  double t = 0.0;
  for (int i = 0; i < 179; ++i) {
    const bool front = i % 2 == 0;
    const bool correct = i < 166;
    recs.push_back(at_relative(t++, front ? 5.0 : 185.0, (front == correct) ? 1 : 0));
  }
  for (int i = 0; i < 203; ++i) recs.push_back(at_relative(t++, i % 2 ? 90.0 : -90.0, i < 111 ? 1 : 0));
  const auto s = empirical_stats(recs, 120.0);
  CHECK(s.in_cone_total == 179);
  CHECK(s.in_cone_correct == 166);
  CHECK(s.uncertainty_total == 203);
  CHECK(s.uncertainty_z1 == 111);
  REQUIRE(s.mistake_rate_hat);
  REQUIRE(s.uncertainty_z1_frac);
  CHECK(*s.mistake_rate_hat == 13.0 / 179.0);
  CHECK(*s.mistake_rate_hat == doctest::Approx(0.0726).epsilon(1e-3));
  CHECK(*s.uncertainty_z1_frac == 111.0 / 203.0);
  CHECK(*s.uncertainty_z1_frac == doctest::Approx(0.5468).epsilon(1e-4));

  // permutation invariance
  std::mt19937_64 rng(83);
  std::shuffle(recs.begin(), recs.end(), rng);
  const auto p = empirical_stats(recs, 120.0);
  CHECK(p.in_cone_correct == 166);
  CHECK(p.uncertainty_z1 == 111);
}

TEST_CASE("missing regions are undefined, not zero") {
  const std::vector<LogRecord> only_front{at_relative(0, 0.0, 1)};
  const auto s = empirical_stats(only_front, 120.0);
  CHECK(s.mistake_rate_hat == 0.0);
  CHECK_FALSE(s.uncertainty_z1_frac.has_value());
  std::ostringstream os;
  write_stats_report(os, s, 120.0);
  CHECK(os.str().find("undefined") != std::string::npos);
  CHECK_THROWS_AS(empirical_stats(std::vector<LogRecord>{}, 120.0), std::invalid_argument);
}

TEST_CASE("per-tag statistics") {
  const std::vector<LogRecord> recs{at_relative(0, 0.0, 1, "a"), at_relative(1, 0.0, 0, "b"),
                                    at_relative(2, 90.0, 1, "a")};
  const auto by = empirical_stats_by_tag(recs, 120.0);
  REQUIRE(by.size() == 2);
  CHECK(by.at("a").in_cone_correct == 1);
  CHECK(by.at("a").uncertainty_total == 1);
  CHECK(by.at("b").in_cone_correct == 0);
}

TEST_CASE("sampler and estimator close the loop") {
  Rng rng(89);
  const FovModel m(120.0, 0.1);
  std::uniform_real_distribution<double> rel(-60.0, 60.0);
  std::vector<LogRecord> recs;
  for (int i = 0; i < 10000; ++i) {
    const double d = rel(rng) + (i % 2 ? 180.0 : 0.0);
    auto rec = at_relative(i, d, 0);
    rec.z = fov_sample(m, UavState(0.0, 0.0, 0.0), {rec.src_north_m, rec.src_east_m}, rng).z;
    recs.push_back(rec);
  }
  const auto s = empirical_stats(recs, 120.0);
  REQUIRE(s.in_cone_total == 10000);
  CHECK(std::abs(*s.mistake_rate_hat - 0.1) < 2.576 * std::sqrt(0.1 * 0.9 / 10000.0));
}

TEST_CASE("simulator trajectories replay to their own counts") {
  TrialConfig c;
  c.seed = 11;
  c.policy = Policy::random;
  c.timeout_s = 300.0;
  c.record_trajectory = true;
  const auto r = run_trial(c);
  std::ostringstream os;
  write_trajectory_csv(os, c, r);
  std::istringstream in(os.str());
  const auto recs = parse_log(in, "trajectory");
  REQUIRE(recs.size() == r.trajectory.size());

  std::size_t front = 0, front_z1 = 0, rear = 0, rear_z0 = 0, mid = 0, mid_z1 = 0;
  for (const auto& p : r.trajectory) {
    const int z = std::get<FovObservation>(p.obs).z;
    switch (classify_relative_bearing(relative_bearing_or_zero(p.state, r.source), 120.0)) {
      case FovRegion::front_cone: ++front; front_z1 += z; break;
      case FovRegion::rear_cone: ++rear; rear_z0 += 1 - z; break;
      case FovRegion::uncertainty: ++mid; mid_z1 += z; break;
    }
  }
  const auto s = empirical_stats(recs, 120.0);
  CHECK(s.in_cone_total == front + rear);
  CHECK(s.in_cone_correct == front_z1 + rear_z0);
  CHECK(s.uncertainty_total == mid);
  CHECK(s.uncertainty_z1 == mid_z1);
}

TEST_CASE("stats CSV") {
  std::vector<LogRecord> recs{at_relative(0, 0.0, 1), at_relative(1, 90.0, 0)};
  std::ostringstream os;
  write_stats_csv(os, empirical_stats(recs, 120.0));
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "in_cone_total,in_cone_correct,uncertainty_total,uncertainty_z1,mistake_rate_hat,uncertainty_z1_frac");
  CHECK(row == "1,1,1,0,0,0");
}
