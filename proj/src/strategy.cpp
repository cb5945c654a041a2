#include "knight/strategy.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "knight/errors.hpp"
#include "knight/rng.hpp"

namespace knight {

MonitorSet MonitorSet::of(std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return {std::move(nodes)};
}

bool MonitorSet::contains(int v) const {
  return std::binary_search(monitors.begin(), monitors.end(), v);
}

AttackStrategy AttackStrategy::of(std::vector<int> seeds,
                                  std::vector<std::pair<int, double>> over) {
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  std::sort(over.begin(), over.end());
  over.erase(std::unique(over.begin(), over.end()), over.end());
  for (size_t i = 1; i < over.size(); ++i)
    if (over[i].first == over[i - 1].first)
      throw ValidationError("conflicting overrides for edge " +
                            std::to_string(over[i].first));
  return {std::move(seeds), std::move(over)};
}

bool canonical_less(const AttackStrategy& a, const AttackStrategy& b) {
  if (a.seeds != b.seeds) return a.seeds < b.seeds;
  return std::lexicographical_compare(
      a.overrides.begin(), a.overrides.end(), b.overrides.begin(),
      b.overrides.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

uint64_t strategy_hash(const MonitorSet& m) {
  uint64_t h = rng::mix64(0x6d6f6e69746f7273ull);
  for (int v : m.monitors) h = rng::combine(h, uint64_t(v));
  return h;
}

uint64_t strategy_hash(const AttackStrategy& theta) {
  uint64_t h = rng::mix64(0x61747461636b6572ull);
  h = rng::combine(h, theta.seeds.size());
  for (int v : theta.seeds) h = rng::combine(h, uint64_t(v));
  h = rng::combine(h, theta.overrides.size());
  for (const auto& [e, p] : theta.overrides) {
    h = rng::combine(h, uint64_t(e));
    h = rng::combine(h, std::bit_cast<uint64_t>(p));
  }
  return h;
}

void validate_config(const GameConfig& cfg, const Network& net) {
  auto bad = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.alpha < 1 || cfg.alpha > net.node_count)
    bad("alpha " + std::to_string(cfg.alpha) + " outside [1," +
        std::to_string(net.node_count) + "]");
  if (cfg.beta < 1 || cfg.beta > net.node_count)
    bad("beta " + std::to_string(cfg.beta) + " outside [1," +
        std::to_string(net.node_count) + "]");
  if (cfg.k < 1) bad("k must be positive");
  if (cfg.c1 < 1) bad("c1 must be positive");
  if (cfg.c2 < 0) bad("c2 must be nonnegative");
  if (cfg.sample_count < 1) bad("sample_count must be positive");
  if (!(cfg.epsilon > 0)) bad("epsilon must be positive");
  if (cfg.max_iterations < 1) bad("max_iterations must be positive");
  if (cfg.workers < 1) bad("workers must be positive");
  if (cfg.prescreen_samples < 1) bad("prescreen_samples must be positive");
  if (cfg.rescore_top < 1) bad("rescore_top must be positive");
  if (cfg.exhaustive_cap < 1) bad("exhaustive_cap must be positive");
  if (cfg.fallback_restarts < 1) bad("fallback_restarts must be positive");
  if (cfg.fallback_moves < 0) bad("fallback_moves must be nonnegative");
}

void validate_monitor_set(const Network& net, const MonitorSet& m, int k) {
  if (int(m.monitors.size()) > k)
    throw ValidationError("monitor set larger than budget k=" +
                          std::to_string(k));
  for (size_t i = 0; i < m.monitors.size(); ++i) {
    int v = m.monitors[i];
    if (v < 0 || v >= net.node_count)
      throw ValidationError("monitor node " + std::to_string(v) +
                            " out of range");
    if (i > 0 && m.monitors[i - 1] >= v)
      throw ValidationError("monitor set not in canonical form");
  }
}

void validate_attack_strategy(const Network& net, const AttackStrategy& theta,
                              const GameConfig& cfg) {
  if (theta.seeds.empty()) throw ValidationError("attack has no seeds");
  if (int(theta.seeds.size()) > cfg.c1)
    throw ValidationError("seed set larger than budget c1=" +
                          std::to_string(cfg.c1));
  if (int(theta.overrides.size()) > cfg.c2)
    throw ValidationError("override map larger than budget c2=" +
                          std::to_string(cfg.c2));
  for (size_t i = 0; i < theta.seeds.size(); ++i) {
    int v = theta.seeds[i];
    if (v < 0 || v >= net.node_count)
      throw ValidationError("seed node " + std::to_string(v) + " out of range");
    if (i > 0 && theta.seeds[i - 1] >= v)
      throw ValidationError("seed set not in canonical form");
  }
  int prev_edge = -1;
  for (const auto& [e, p] : theta.overrides) {
    if (e < 0 || e >= net.edge_count())
      throw ValidationError("override on nonexistent edge " +
                            std::to_string(e));
    if (e <= prev_edge)
      throw ValidationError("override map not in canonical form");
    prev_edge = e;
    auto [lo, hi] = effective_interval(net, e);
    if (!(p >= lo - 1e-12 && p <= hi + 1e-12))
      throw ValidationError("override " + std::to_string(p) + " on edge " +
                            std::to_string(e) + " outside [" +
                            std::to_string(lo) + "," + std::to_string(hi) +
                            "]");
  }
}

EffectiveProbs apply_strategy(const Network& net, const AttackStrategy& theta) {
  EffectiveProbs eff;
  eff.probs = net.base_prob;
  for (const auto& [e, p] : theta.overrides) {
    if (e < 0 || e >= net.edge_count())
      throw ValidationError("override on nonexistent edge " +
                            std::to_string(e));
    auto [lo, hi] = effective_interval(net, e);
    if (!(p >= lo - 1e-12 && p <= hi + 1e-12))
      throw ValidationError("override " + std::to_string(p) + " on edge " +
                            std::to_string(e) + " outside [" +
                            std::to_string(lo) + "," + std::to_string(hi) +
                            "]");
    eff.probs[e] = std::clamp(p, lo, hi);
  }
  return eff;
}

}  // namespace knight
