#include <cmath>

#include "doctest.h"
#include "knight/diffusion.hpp"
#include "knight/errors.hpp"
#include "test_support.hpp"

using namespace knight;

namespace {

Network line3(double p01, double p12) {
  return make_network(3, {{0, 1}, {1, 2}}, {p01, p12}, {0, 0}, {0, 0});
}

}  // namespace

TEST_CASE("propagate walks rounds over live edges") {
  Network net = line3(1.0, 1.0);
  auto theta = AttackStrategy::of({0});
  LiveEdgeSample all_live{0, {1, 1}};

  OutbreakTrace t = propagate(net, theta, all_live);
  CHECK(t.infection_round == std::vector<int>{0, 1, 2});
  CHECK(t.total_infected == 3);
  CHECK(t.cumulative_by_round == std::vector<int>{1, 2, 3});

  LiveEdgeSample second_dead{0, {1, 0}};
  t = propagate(net, theta, second_dead);
  CHECK(t.infection_round == std::vector<int>{0, 1, -1});
  CHECK(t.total_infected == 2);
  CHECK(t.cumulative_by_round == std::vector<int>{1, 2});
}

TEST_CASE("sample_win applies the outbreak and timely-detection rules") {
  OutbreakTrace t;
  t.infection_round = {0, 1, 2, -1};
  t.total_infected = 3;
  t.cumulative_by_round = {1, 2, 3};

  // small outbreak wins for any monitors
  CHECK(sample_win(t, MonitorSet::of({}), 4, 1) == 1);
  // alpha reached, no monitor infected: loss
  CHECK(sample_win(t, MonitorSet::of({3}), 3, 4) == 0);
  // monitor first infected at round 1, cumulative 2 < beta=3: timely
  CHECK(sample_win(t, MonitorSet::of({1}), 3, 3) == 1);
  CHECK(sample_win(t, MonitorSet::of({1, 3}), 3, 3) == 1);
  // same monitor, beta=2: cumulative at detection is already 2
  CHECK(sample_win(t, MonitorSet::of({1}), 3, 2) == 0);
  // detection uses the earliest monitored round
  CHECK(sample_win(t, MonitorSet::of({1, 2}), 3, 3) == 1);
  CHECK(sample_win(t, MonitorSet::of({2}), 3, 3) == 0);
  // a monitored seed detects at round 0 with cumulative |seeds|
  CHECK(sample_win(t, MonitorSet::of({0}), 3, 2) == 1);
  CHECK(sample_win(t, MonitorSet::of({0}), 3, 1) == 0);  // beta=1: never timely
}

TEST_CASE("exact_rho matches hand computations") {
  // 0 -> 1 at 0.5: the only win against alpha=2, beta=2 is the dead edge
  Network two = make_network(2, {{0, 1}}, {0.5}, {0}, {0});
  CHECK(exact_rho(two, AttackStrategy::of({0}), MonitorSet::of({1}), 2, 2) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // beta=1 makes detection worthless; alpha=1 is always reached
  CHECK(exact_rho(two, AttackStrategy::of({0}), MonitorSet::of({0, 1}), 1, 1) ==
        0.0);
  // a monitored seed with beta=2 always detects in time
  CHECK(exact_rho(two, AttackStrategy::of({0}), MonitorSet::of({0}), 1, 2) ==
        1.0);

  // star 0 -> {1, 2}: node 1 only detects in time when node 2 stays clean
  double p = 0.3, q = 0.7;
  Network star = make_network(3, {{0, 1}, {0, 2}}, {p, q}, {0, 0}, {0, 0});
  auto theta = AttackStrategy::of({0});
  CHECK(exact_rho(star, theta, MonitorSet::of({1}), 2, 2) ==
        doctest::Approx((1 - p) * (1 - q)).epsilon(1e-12));
  CHECK(exact_rho(star, theta, MonitorSet::of({1}), 2, 3) ==
        doctest::Approx((1 - p) * (1 - q) + p * (1 - q)).epsilon(1e-12));
  CHECK(exact_rho(star, theta, MonitorSet::of({1, 2}), 2, 3) ==
        doctest::Approx(1.0 - p * q).epsilon(1e-12));
}

TEST_CASE("exact_rho honors overrides and the edge cap") {
  Network net = make_network(2, {{0, 1}}, {0.5}, {0.5}, {0.5});
  auto lo = AttackStrategy::of({0}, {{0, 0.0}});
  auto hi = AttackStrategy::of({0}, {{0, 1.0}});
  CHECK(exact_rho(net, lo, MonitorSet::of({}), 2, 1) == 1.0);
  CHECK(exact_rho(net, hi, MonitorSet::of({}), 2, 1) == 0.0);

  testing::SplitMix rng(3);
  Network big = testing::random_network(rng, 10, 21);
  CHECK_THROWS_AS(
      exact_rho(big, AttackStrategy::of({0}), MonitorSet::of({}), 2, 2),
      CapError);
}

TEST_CASE("draw_sample is a pure function of seed, theta and index") {
  testing::SplitMix rng(11);
  Network net = testing::random_network(rng, 8, 14, 0.3);
  GameConfig cfg;
  cfg.c1 = 2;
  cfg.c2 = 2;
  auto theta = testing::random_theta(rng, net, cfg);

  auto a = draw_sample(net, theta, 99, 5);
  auto b = draw_sample(net, theta, 99, 5);
  CHECK(a.live == b.live);

  int diff = 0;
  for (int i = 0; i < 50; ++i)
    if (draw_sample(net, theta, 99, i).live != a.live) ++diff;
  CHECK(diff > 0);  // other indices give other worlds

  // a different master seed reshuffles the stream
  int seed_diff = 0;
  for (int i = 0; i < 50; ++i)
    if (draw_sample(net, theta, 100, i).live !=
        draw_sample(net, theta, 99, i).live)
      ++seed_diff;
  CHECK(seed_diff > 0);
}

TEST_CASE("probability 0 and 1 edges are never and always live") {
  Network net = make_network(3, {{0, 1}, {0, 2}}, {0.5, 0.5}, {0.5, 0.5},
                             {0.5, 0.5});
  auto theta = AttackStrategy::of({0}, {{0, 0.0}, {1, 1.0}});
  for (int i = 0; i < 200; ++i) {
    auto s = draw_sample(net, theta, 1234, i);
    CHECK(s.live[0] == 0);
    CHECK(s.live[1] == 1);
  }
}

TEST_CASE("estimate_rho_n equals the naive sample loop") {
  testing::SplitMix rng(21);
  GameConfig cfg;
  cfg.alpha = 3;
  cfg.beta = 3;
  cfg.c1 = 2;
  cfg.c2 = 1;
  cfg.master_seed = 77;

  for (int trial = 0; trial < 5; ++trial) {
    Network net = testing::random_network(rng, 7, 12, 0.2);
    auto theta = testing::random_theta(rng, net, cfg);
    auto m = testing::random_monitors(rng, net.node_count, 2);

    int n = 200;
    long long wins = 0;
    for (int i = 0; i < n; ++i) {
      auto t = propagate(net, theta, draw_sample(net, theta, cfg.master_seed, i));
      wins += sample_win(t, m, cfg.alpha, cfg.beta);
    }
    UtilityEstimate est = estimate_rho_n(net, theta, m, cfg, n);
    CHECK(est.mean == double(wins) / n);
    CHECK(est.sample_count == n);
  }
}

TEST_CASE("estimates are bit-identical across worker counts") {
  testing::SplitMix rng(31);
  Network net = testing::random_network(rng, 12, 30, 0.2);
  GameConfig cfg;
  cfg.alpha = 4;
  cfg.beta = 3;
  cfg.c1 = 2;
  cfg.c2 = 1;
  cfg.master_seed = 5;
  cfg.sample_count = 3001;  // odd count exercises uneven chunking
  auto theta = testing::random_theta(rng, net, cfg);
  auto m = testing::random_monitors(rng, net.node_count, 3);

  cfg.workers = 1;
  double v1 = estimate_rho(net, theta, m, cfg).mean;
  cfg.workers = 2;
  double v2 = estimate_rho(net, theta, m, cfg).mean;
  cfg.workers = 8;
  double v8 = estimate_rho(net, theta, m, cfg).mean;
  CHECK(v1 == v2);
  CHECK(v1 == v8);

  auto b1 = draw_detector_batch(net, theta, cfg.alpha, cfg.beta,
                                cfg.master_seed, cfg.sample_count, 1);
  auto b8 = draw_detector_batch(net, theta, cfg.alpha, cfg.beta,
                                cfg.master_seed, cfg.sample_count, 8);
  CHECK(b1.auto_wins == b8.auto_wins);
  CHECK(b1.hopeless == b8.hopeless);
  CHECK(b1.detector_sets == b8.detector_sets);
  CHECK(b1.multiplicity == b8.multiplicity);
}

TEST_CASE("detector batches reproduce the estimator exactly") {
  testing::SplitMix rng(41);
  GameConfig cfg;
  cfg.c1 = 2;
  cfg.c2 = 1;
  cfg.master_seed = 9;

  for (int trial = 0; trial < 8; ++trial) {
    Network net = testing::random_network(rng, 8, 16, 0.25);
    cfg.alpha = int(rng.range(1, 4));
    cfg.beta = int(rng.range(1, 4));
    auto theta = testing::random_theta(rng, net, cfg);

    int n = 500;
    auto batch = draw_detector_batch(net, theta, cfg.alpha, cfg.beta,
                                     cfg.master_seed, n, 1);
    long long covered = 0;
    for (long long mult : batch.multiplicity) covered += mult;
    CHECK(batch.auto_wins + batch.hopeless + covered == n);
    for (const auto& d : batch.detector_sets) {
      CHECK(!d.empty());
      CHECK(std::is_sorted(d.begin(), d.end()));
    }

    for (int i = 0; i < 6; ++i) {
      auto m = testing::random_monitors(rng, net.node_count, int(rng.range(0, 3)));
      CHECK(double(batch_wins(batch, m)) / n ==
            estimate_rho_n(net, theta, m, cfg, n).mean);
    }
    CHECK(batch_wins(batch, MonitorSet::of({})) == batch.auto_wins);
  }
}

TEST_CASE("estimator stays near the exact value") {
  testing::SplitMix rng(51);
  GameConfig cfg;
  cfg.c1 = 2;
  cfg.c2 = 0;
  cfg.master_seed = 13;
  int misses = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Network net = testing::random_network(rng, 6, 9);
    cfg.alpha = int(rng.range(1, 3));
    cfg.beta = int(rng.range(1, 3));
    auto theta = testing::random_theta(rng, net, cfg);
    auto m = testing::random_monitors(rng, net.node_count, 2);

    double exact = exact_rho(net, theta, m, cfg.alpha, cfg.beta);
    auto est = estimate_rho_n(net, theta, m, cfg, 4000);
    if (std::fabs(est.mean - exact) > 3 * est.half_width) ++misses;
  }
  CHECK(misses == 0);  // 3x the 95% half-width, 10 tries: ~never
}

TEST_CASE("per-sample wins are monotone and submodular in the monitors") {
  testing::SplitMix rng(61);
  GameConfig cfg;
  cfg.c1 = 2;
  cfg.c2 = 1;
  cfg.master_seed = 17;

  for (int trial = 0; trial < 5; ++trial) {
    Network net = testing::random_network(rng, 6, 10, 0.2);
    cfg.alpha = int(rng.range(1, 4));
    cfg.beta = int(rng.range(1, 4));
    auto theta = testing::random_theta(rng, net, cfg);

    for (int i = 0; i < 30; ++i) {
      auto t = propagate(net, theta, draw_sample(net, theta, cfg.master_seed, i));

      std::vector<int> a, b;
      for (int v = 0; v < net.node_count; ++v) {
        double u = rng.unif();
        if (u < 0.25) a.push_back(v);
        if (u < 0.55) b.push_back(v);  // a is a subset of b
      }
      int extra_node = int(rng.range(0, net.node_count - 1));
      auto with = [&](std::vector<int> s, int extra) {
        s.push_back(extra);
        return MonitorSet::of(s);
      };
      int wa = sample_win(t, MonitorSet::of(a), cfg.alpha, cfg.beta);
      int wb = sample_win(t, MonitorSet::of(b), cfg.alpha, cfg.beta);
      int wav = sample_win(t, with(a, extra_node), cfg.alpha, cfg.beta);
      int wbv = sample_win(t, with(b, extra_node), cfg.alpha, cfg.beta);
      CHECK(wa <= wb);             // monotone
      CHECK(wav - wa >= wbv - wb); // diminishing returns
    }
  }
}

TEST_CASE("half-width and stream keys behave") {
  CHECK(hoeffding_half_width(10000) ==
        doctest::Approx(std::sqrt(std::log(40.0) / 20000.0)).epsilon(1e-12));
  CHECK(hoeffding_half_width(100) > hoeffding_half_width(1000));

  auto t1 = AttackStrategy::of({0});
  auto t2 = AttackStrategy::of({1});
  CHECK(theta_stream_key(5, t1) == theta_stream_key(5, t1));
  CHECK(theta_stream_key(5, t1) != theta_stream_key(5, t2));
  CHECK(theta_stream_key(5, t1) != theta_stream_key(6, t1));

  Network net = line3(0.5, 0.5);
  GameConfig cfg;
  CHECK_THROWS_AS(
      estimate_rho(net, AttackStrategy::of({0}), MonitorSet::of({9}), cfg),
      ValidationError);
}
