#include <set>

#include "doctest.h"
#include "knight/errors.hpp"
#include "knight/network.hpp"
#include "knight/strategy.hpp"
#include "test_support.hpp"

using namespace knight;

TEST_CASE("load_network parses comments, blank lines and optional probs") {
  std::string text =
      "# header comment\n"
      "\n"
      "10 20 0.5\n"
      "  # indented comment\n"
      "20 30\n"
      "10 30 1\n";
  Network net = load_network(text, ProbRule::constant(0.25), IntervalRule::none());

  CHECK(net.node_count == 3);
  REQUIRE(net.edge_count() == 3);
  // dense ids follow sorted original ids: 10->0, 20->1, 30->2
  CHECK(net.original_ids == std::vector<long long>{10, 20, 30});
  CHECK(net.edges[0] == std::pair<int, int>{0, 1});
  CHECK(net.edges[1] == std::pair<int, int>{1, 2});
  CHECK(net.edges[2] == std::pair<int, int>{0, 2});
  CHECK(net.base_prob[0] == 0.5);
  CHECK(net.base_prob[1] == 0.25);  // filled by the constant rule
  CHECK(net.base_prob[2] == 1.0);

  CHECK(net.adjacency[0] == std::vector<int>{0, 2});
  CHECK(net.reverse_adjacency[2] == std::vector<int>{1, 2});

  CHECK(id_map_csv(net) == "original_id,dense_id\n10,0\n20,1\n30,2\n");
}

TEST_CASE("load_network reports malformed input with line numbers") {
  auto load = [](const std::string& t) {
    return load_network(t, ProbRule::constant(0.1), IntervalRule::none());
  };

  CHECK_THROWS_AS(load(""), ParseError);
  CHECK_THROWS_AS(load("1\n"), ParseError);
  CHECK_THROWS_AS(load("1 2 0.5 junk\n"), ParseError);
  CHECK_THROWS_AS(load("a 2\n"), ParseError);
  CHECK_THROWS_AS(load("1 2 zz\n"), ParseError);
  CHECK_THROWS_AS(load("-1 2\n"), ParseError);
  CHECK_THROWS_AS(load("3 3\n"), ValidationError);
  CHECK_THROWS_AS(load("1 2 0.5\n1 2 0.6\n"), ValidationError);
  CHECK_THROWS_AS(load("1 2 1.5\n"), ValidationError);
  CHECK_THROWS_AS(load("1 2 -0.5\n"), ValidationError);

  try {
    load("1 2 0.5\n\n4 4\n");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("seeded uniform probabilities are deterministic per seed") {
  std::string text = "0 1\n1 2\n2 3\n3 4\n4 0\n";
  Network a = load_network(text, ProbRule::seeded_uniform(7), IntervalRule::none());
  Network b = load_network(text, ProbRule::seeded_uniform(7), IntervalRule::none());
  Network c = load_network(text, ProbRule::seeded_uniform(8), IntervalRule::none());

  CHECK(a == b);
  CHECK(a.base_prob != c.base_prob);
  for (double p : a.base_prob) CHECK((p > 0.0 && p < 1.0));
}

TEST_CASE("interval rules are clipped into [0,1] per edge") {
  Network net = load_network("0 1 0.05\n1 2 0.9\n", ProbRule::constant(0.1),
                             IntervalRule::symmetric(0.2));
  auto [lo0, hi0] = effective_interval(net, 0);
  CHECK(lo0 == 0.0);  // 0.05 - 0.2 clips to 0
  CHECK(hi0 == doctest::Approx(0.25).epsilon(1e-15));
  auto [lo1, hi1] = effective_interval(net, 1);
  CHECK(lo1 == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(hi1 == 1.0);  // 0.9 + 0.2 clips to 1
}

TEST_CASE("make_network validates and snaps near-bound values") {
  // value within 1e-12 of a bound snaps onto it
  Network net = make_network(2, {{0, 1}}, {1.0 + 5e-13}, {0.0}, {0.0});
  CHECK(net.base_prob[0] == 1.0);

  CHECK_THROWS_AS(make_network(0, {}, {}, {}, {}), ValidationError);
  CHECK_THROWS_AS(make_network(2, {{0, 1}}, {0.5, 0.5}, {0.0}, {0.0}),
                  ValidationError);
  CHECK_THROWS_AS(make_network(2, {{0, 2}}, {0.5}, {0.0}, {0.0}),
                  ValidationError);
  CHECK_THROWS_AS(make_network(2, {{1, 1}}, {0.5}, {0.0}, {0.0}),
                  ValidationError);
  CHECK_THROWS_AS(
      make_network(2, {{0, 1}, {0, 1}}, {0.5, 0.5}, {0, 0}, {0, 0}),
      ValidationError);
  CHECK_THROWS_AS(make_network(2, {{0, 1}}, {1.1}, {0.0}, {0.0}),
                  ValidationError);
  double nan = std::nan("");
  CHECK_THROWS_AS(make_network(2, {{0, 1}}, {nan}, {0.0}, {0.0}),
                  ValidationError);
  CHECK_THROWS_AS(make_network(2, {{0, 1}}, {0.5}, {-0.1}, {0.0}),
                  ValidationError);
  // offset pushing past a bound is rejected rather than silently clipped
  CHECK_THROWS_AS(make_network(2, {{0, 1}}, {0.3}, {0.4}, {0.0}),
                  ValidationError);
  CHECK_THROWS_AS(make_network(2, {{0, 1}}, {0.8}, {0.0}, {0.4}),
                  ValidationError);
}

TEST_CASE("edge list round-trips through to_edge_list") {
  testing::SplitMix rng(42);
  Network net = testing::random_network(rng, 8, 15);
  Network back =
      load_network(to_edge_list(net), ProbRule::constant(0.0), IntervalRule::none());
  CHECK(back.node_count == net.node_count);
  CHECK(back.edges == net.edges);
  CHECK(back.base_prob == net.base_prob);  // %.17g is exact for doubles
}

TEST_CASE("monitor sets canonicalize") {
  MonitorSet m = MonitorSet::of({3, 1, 3, 2});
  CHECK(m.monitors == std::vector<int>{1, 2, 3});
  CHECK(m.contains(2));
  CHECK(!m.contains(0));
  CHECK(m == MonitorSet::of({2, 3, 1}));
}

TEST_CASE("attack strategies canonicalize and reject conflicts") {
  AttackStrategy t = AttackStrategy::of({5, 1, 5}, {{3, 0.2}, {1, 0.4}, {3, 0.2}});
  CHECK(t.seeds == std::vector<int>{1, 5});
  REQUIRE(t.overrides.size() == 2);
  CHECK(t.overrides[0] == std::pair<int, double>{1, 0.4});
  CHECK(t.overrides[1] == std::pair<int, double>{3, 0.2});

  CHECK_THROWS_AS(AttackStrategy::of({1}, {{3, 0.2}, {3, 0.25}}),
                  ValidationError);
}

TEST_CASE("canonical_less is a strict total order") {
  auto a = AttackStrategy::of({1});
  auto b = AttackStrategy::of({1, 2});
  auto c = AttackStrategy::of({2});
  auto d = AttackStrategy::of({1}, {{0, 0.1}});
  auto e = AttackStrategy::of({1}, {{0, 0.2}});

  CHECK(canonical_less(a, b));   // prefix first
  CHECK(canonical_less(b, c));   // lexicographic on seeds
  CHECK(canonical_less(a, d));   // no overrides before overrides
  CHECK(canonical_less(d, e));   // then by override probability
  CHECK(!canonical_less(a, a));

  // antisymmetry on random pairs
  testing::SplitMix rng(7);
  Network net = testing::random_network(rng, 6, 10, 0.2);
  GameConfig cfg;
  cfg.c1 = 3;
  cfg.c2 = 2;
  for (int i = 0; i < 50; ++i) {
    auto x = testing::random_theta(rng, net, cfg);
    auto y = testing::random_theta(rng, net, cfg);
    if (x == y) {
      CHECK(!canonical_less(x, y));
      CHECK(!canonical_less(y, x));
    } else {
      CHECK(canonical_less(x, y) != canonical_less(y, x));
    }
  }
}

TEST_CASE("strategy hashes separate distinct strategies") {
  CHECK(strategy_hash(MonitorSet::of({0, 1})) ==
        strategy_hash(MonitorSet::of({1, 0})));
  CHECK(strategy_hash(MonitorSet::of({0, 1})) !=
        strategy_hash(MonitorSet::of({0, 2})));
  CHECK(strategy_hash(AttackStrategy::of({1})) !=
        strategy_hash(AttackStrategy::of({2})));
  CHECK(strategy_hash(AttackStrategy::of({1})) !=
        strategy_hash(AttackStrategy::of({1}, {{0, 0.5}})));
  CHECK(strategy_hash(AttackStrategy::of({1}, {{0, 0.5}})) !=
        strategy_hash(AttackStrategy::of({1}, {{0, 0.5000001}})));
}

TEST_CASE("validate_config rejects out-of-range parameters") {
  testing::SplitMix rng(1);
  Network net = testing::random_network(rng, 5, 8);
  GameConfig good;
  good.alpha = 2;
  good.beta = 2;
  good.k = 2;
  CHECK_NOTHROW(validate_config(good, net));

  auto broken = [&](auto mutate) {
    GameConfig c = good;
    mutate(c);
    CHECK_THROWS_AS(validate_config(c, net), ConfigError);
  };
  broken([](GameConfig& c) { c.alpha = 0; });
  broken([](GameConfig& c) { c.alpha = 6; });
  broken([](GameConfig& c) { c.beta = 0; });
  broken([](GameConfig& c) { c.beta = 6; });
  broken([](GameConfig& c) { c.k = 0; });
  broken([](GameConfig& c) { c.c1 = 0; });
  broken([](GameConfig& c) { c.c2 = -1; });
  broken([](GameConfig& c) { c.sample_count = 0; });
  broken([](GameConfig& c) { c.epsilon = 0.0; });
  broken([](GameConfig& c) { c.max_iterations = 0; });
  broken([](GameConfig& c) { c.workers = 0; });
}

TEST_CASE("strategy validation enforces budgets and canonical form") {
  Network net = make_network(4, {{0, 1}, {1, 2}, {2, 3}}, {0.5, 0.5, 0.5},
                             {0.2, 0.0, 0.2}, {0.2, 0.0, 0.2});
  GameConfig cfg;
  cfg.alpha = 2;
  cfg.beta = 2;
  cfg.c1 = 2;
  cfg.c2 = 1;

  CHECK_NOTHROW(validate_monitor_set(net, MonitorSet::of({0, 3}), 2));
  CHECK_THROWS_AS(validate_monitor_set(net, MonitorSet::of({0, 1, 2}), 2),
                  ValidationError);
  CHECK_THROWS_AS(validate_monitor_set(net, MonitorSet::of({7}), 2),
                  ValidationError);
  CHECK_THROWS_AS(validate_monitor_set(net, MonitorSet{{1, 1}}, 3),
                  ValidationError);

  CHECK_NOTHROW(
      validate_attack_strategy(net, AttackStrategy::of({0, 2}, {{0, 0.6}}), cfg));
  CHECK_THROWS_AS(validate_attack_strategy(net, AttackStrategy{{}, {}}, cfg),
                  ValidationError);
  CHECK_THROWS_AS(
      validate_attack_strategy(net, AttackStrategy::of({0, 1, 2}), cfg),
      ValidationError);
  CHECK_THROWS_AS(
      validate_attack_strategy(
          net, AttackStrategy::of({0}, {{0, 0.4}, {2, 0.4}}), cfg),
      ValidationError);
  CHECK_THROWS_AS(
      validate_attack_strategy(net, AttackStrategy::of({0}, {{9, 0.5}}), cfg),
      ValidationError);
  // override outside the edge's interval (edge 1 is not adjustable)
  CHECK_THROWS_AS(
      validate_attack_strategy(net, AttackStrategy::of({0}, {{1, 0.6}}), cfg),
      ValidationError);
  // exactly the base value is fine even on a degenerate interval
  CHECK_NOTHROW(
      validate_attack_strategy(net, AttackStrategy::of({0}, {{1, 0.5}}), cfg));
}

TEST_CASE("apply_strategy overrides probabilities without touching the net") {
  Network net = make_network(3, {{0, 1}, {1, 2}}, {0.5, 0.4}, {0.3, 0.0},
                             {0.3, 0.0});
  auto theta = AttackStrategy::of({0}, {{0, 0.8}});
  EffectiveProbs eff = apply_strategy(net, theta);
  CHECK(eff(0) == 0.8);
  CHECK(eff(1) == 0.4);
  CHECK(net.base_prob[0] == 0.5);

  CHECK_THROWS_AS(apply_strategy(net, AttackStrategy::of({0}, {{0, 0.9}})),
                  ValidationError);
  CHECK_THROWS_AS(apply_strategy(net, AttackStrategy::of({0}, {{5, 0.5}})),
                  ValidationError);

  // a value within 1e-12 outside the interval is accepted and clamped
  EffectiveProbs edge = apply_strategy(
      net, AttackStrategy{{0}, {{0, 0.8 + 5e-13}}});
  CHECK(edge(0) == 0.8);
}
