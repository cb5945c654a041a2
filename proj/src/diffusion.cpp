#include "knight/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "knight/errors.hpp"
#include "knight/rng.hpp"

namespace knight {

double hoeffding_half_width(int sample_count) {
  return std::sqrt(std::log(2.0 / 0.05) / (2.0 * sample_count));
}

uint64_t theta_stream_key(uint64_t master_seed, const AttackStrategy& theta) {
  return rng::combine(rng::mix64(master_seed), strategy_hash(theta));
}

LiveEdgeSample draw_sample(const Network& net, const AttackStrategy& theta,
                           uint64_t master_seed, long long sample_index) {
  EffectiveProbs probs = apply_strategy(net, theta);
  uint64_t key = theta_stream_key(master_seed, theta);
  LiveEdgeSample s;
  s.sample_index = sample_index;
  s.live.resize(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e)
    s.live[e] =
        rng::uniform01(key, uint64_t(sample_index), uint32_t(e)) < probs(e);
  return s;
}

OutbreakTrace propagate(const Network& net, const AttackStrategy& theta,
                        const LiveEdgeSample& sample) {
  OutbreakTrace t;
  t.infection_round.assign(net.node_count, -1);

  std::vector<int> frontier, next;
  for (int v : theta.seeds) {
    t.infection_round[v] = 0;
    frontier.push_back(v);
  }
  t.cumulative_by_round.push_back(int(frontier.size()));

  int round = 0;
  while (!frontier.empty()) {
    next.clear();
    ++round;
    for (int u : frontier) {
      for (int e : net.adjacency[u]) {
        if (!sample.live[e]) continue;
        int v = net.edges[e].second;
        if (t.infection_round[v] >= 0) continue;
        t.infection_round[v] = round;
        next.push_back(v);
      }
    }
    if (next.empty()) break;
    t.cumulative_by_round.push_back(t.cumulative_by_round.back() +
                                    int(next.size()));
    std::swap(frontier, next);
  }
  t.total_infected = t.cumulative_by_round.back();
  return t;
}

int sample_win(const OutbreakTrace& trace, const MonitorSet& monitors,
               int alpha, int beta) {
  if (trace.total_infected < alpha) return 1;
  int detect_round = -1;
  for (int v : monitors.monitors) {
    int r = trace.infection_round[v];
    if (r >= 0 && (detect_round < 0 || r < detect_round)) detect_round = r;
  }
  if (detect_round < 0) return 0;
  return trace.cumulative_by_round[detect_round] < beta ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Capped per-world evaluation.
//
// Everything below runs the same cascade as propagate but stops as soon as
// the win is decided: once the cumulative count reaches max(alpha, beta),
// detection can no longer be timely and the outbreak has already hit alpha,
// so the world is a loss for any remaining expansion. Coins are flipped
// lazily with the same per-edge streams draw_sample uses, which keeps every
// outcome bit-identical to the uncapped path.

namespace {

struct Scratch {
  std::vector<long long> stamp;
  long long gen = 0;
  std::vector<int> frontier, next;
  std::vector<int> detectors;
};

inline bool edge_fires(double p, uint64_t key, long long sample, int e) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return rng::uniform01(key, uint64_t(sample), uint32_t(e)) < p;
}

// Win predicate for a fixed monitor set, early-exiting on the first timely
// detection or on loss.
int capped_win(const Network& net, const std::vector<double>& probs,
               const std::vector<int>& seeds,
               const std::vector<char>& is_monitor, int alpha, int beta,
               uint64_t key, long long sample, Scratch& sc) {
  long long gen = ++sc.gen;
  sc.frontier.clear();
  bool hit = false;
  for (int v : seeds) {
    sc.stamp[v] = gen;
    sc.frontier.push_back(v);
    if (is_monitor[v]) hit = true;
  }
  long long cum = (long long)seeds.size();
  if (hit && cum < beta) return 1;
  long long cap = std::max(alpha, beta);
  if (cum >= cap) return 0;

  while (true) {
    sc.next.clear();
    hit = false;
    for (int u : sc.frontier) {
      for (int e : net.adjacency[u]) {
        int v = net.edges[e].second;
        if (sc.stamp[v] == gen) continue;
        if (!edge_fires(probs[e], key, sample, e)) continue;
        sc.stamp[v] = gen;
        sc.next.push_back(v);
        if (is_monitor[v]) hit = true;
      }
    }
    if (sc.next.empty()) return cum < alpha ? 1 : 0;
    cum += (long long)sc.next.size();
    if (hit && cum < beta) return 1;
    if (cum >= cap) return 0;
    std::swap(sc.frontier, sc.next);
  }
}

enum Outcome { kAuto, kHopeless, kDetectable };

// Like capped_win but monitor-agnostic: classifies the world and collects
// every node whose monitoring would have detected in time.
Outcome classify_world(const Network& net, const std::vector<double>& probs,
                       const std::vector<int>& seeds, int alpha, int beta,
                       uint64_t key, long long sample, Scratch& sc) {
  long long gen = ++sc.gen;
  sc.frontier.clear();
  sc.detectors.clear();
  for (int v : seeds) {
    sc.stamp[v] = gen;
    sc.frontier.push_back(v);
  }
  long long cum = (long long)seeds.size();
  if (cum < beta)
    sc.detectors.insert(sc.detectors.end(), seeds.begin(), seeds.end());
  long long cap = std::max(alpha, beta);

  while (cum < cap) {
    sc.next.clear();
    for (int u : sc.frontier) {
      for (int e : net.adjacency[u]) {
        int v = net.edges[e].second;
        if (sc.stamp[v] == gen) continue;
        if (!edge_fires(probs[e], key, sample, e)) continue;
        sc.stamp[v] = gen;
        sc.next.push_back(v);
      }
    }
    if (sc.next.empty()) {
      if (cum < alpha) return kAuto;
      break;
    }
    cum += (long long)sc.next.size();
    if (cum < beta)
      sc.detectors.insert(sc.detectors.end(), sc.next.begin(), sc.next.end());
    std::swap(sc.frontier, sc.next);
  }
  if (sc.detectors.empty()) return kHopeless;
  std::sort(sc.detectors.begin(), sc.detectors.end());
  return kDetectable;
}

}  // namespace

UtilityEstimate estimate_rho_n(const Network& net, const AttackStrategy& theta,
                               const MonitorSet& monitors,
                               const GameConfig& cfg, int sample_count) {
  if (sample_count < 1) throw ValidationError("sample count must be positive");
  EffectiveProbs probs = apply_strategy(net, theta);
  uint64_t key = theta_stream_key(cfg.master_seed, theta);

  std::vector<char> is_monitor(net.node_count, 0);
  for (int v : monitors.monitors) {
    if (v < 0 || v >= net.node_count)
      throw ValidationError("monitor node " + std::to_string(v) +
                            " out of range");
    is_monitor[v] = 1;
  }

  int workers = std::max(1, std::min(cfg.workers, sample_count));
  std::vector<long long> counts(workers, 0);
  auto work = [&](int w) {
    long long begin = (long long)sample_count * w / workers;
    long long end = (long long)sample_count * (w + 1) / workers;
    Scratch sc;
    sc.stamp.assign(net.node_count, 0);
    long long wins = 0;
    for (long long i = begin; i < end; ++i)
      wins += capped_win(net, probs.probs, theta.seeds, is_monitor, cfg.alpha,
                         cfg.beta, key, i, sc);
    counts[w] = wins;
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  long long total = 0;
  for (long long c : counts) total += c;

  UtilityEstimate est;
  est.sample_count = sample_count;
  est.mean = double(total) / double(sample_count);
  est.half_width = hoeffding_half_width(sample_count);
  return est;
}

UtilityEstimate estimate_rho(const Network& net, const AttackStrategy& theta,
                             const MonitorSet& monitors,
                             const GameConfig& cfg) {
  return estimate_rho_n(net, theta, monitors, cfg, cfg.sample_count);
}

double exact_rho(const Network& net, const AttackStrategy& theta,
                 const MonitorSet& monitors, int alpha, int beta) {
  int m = net.edge_count();
  if (m > 20)
    throw CapError("exact utility enumeration limited to 20 edges, got " +
                   std::to_string(m));
  EffectiveProbs probs = apply_strategy(net, theta);

  LiveEdgeSample world;
  world.live.assign(m, 0);
  double total = 0.0;
  for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
    double pr = 1.0;
    for (int e = 0; e < m; ++e) {
      bool live = (mask >> e) & 1;
      world.live[e] = live;
      pr *= live ? probs(e) : 1.0 - probs(e);
      if (pr == 0.0) break;
    }
    if (pr == 0.0) continue;
    OutbreakTrace t = propagate(net, theta, world);
    if (sample_win(t, monitors, alpha, beta)) total += pr;
  }
  return total;
}

DetectorBatch draw_detector_batch(const Network& net,
                                  const AttackStrategy& theta, int alpha,
                                  int beta, uint64_t master_seed,
                                  int sample_count, int workers) {
  if (sample_count < 1) throw ValidationError("sample count must be positive");
  EffectiveProbs probs = apply_strategy(net, theta);
  uint64_t key = theta_stream_key(master_seed, theta);

  struct PerSample {
    Outcome outcome;
    std::vector<int> detectors;
  };
  std::vector<PerSample> per(sample_count);

  int w_count = std::max(1, std::min(workers, sample_count));
  auto work = [&](int w) {
    long long begin = (long long)sample_count * w / w_count;
    long long end = (long long)sample_count * (w + 1) / w_count;
    Scratch sc;
    sc.stamp.assign(net.node_count, 0);
    for (long long i = begin; i < end; ++i) {
      per[i].outcome = classify_world(net, probs.probs, theta.seeds, alpha,
                                      beta, key, i, sc);
      if (per[i].outcome == kDetectable) per[i].detectors = sc.detectors;
    }
  };
  if (w_count == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < w_count; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  DetectorBatch batch;
  batch.sample_count = sample_count;
  std::map<std::vector<int>, size_t> index;
  for (int i = 0; i < sample_count; ++i) {
    switch (per[i].outcome) {
      case kAuto:
        ++batch.auto_wins;
        break;
      case kHopeless:
        ++batch.hopeless;
        break;
      case kDetectable: {
        auto [it, fresh] =
            index.try_emplace(std::move(per[i].detectors), index.size());
        if (fresh) {
          batch.detector_sets.push_back(it->first);
          batch.multiplicity.push_back(0);
        }
        ++batch.multiplicity[it->second];
        break;
      }
    }
  }
  return batch;
}

long long batch_wins(const DetectorBatch& batch, const MonitorSet& monitors) {
  long long wins = batch.auto_wins;
  for (size_t i = 0; i < batch.detector_sets.size(); ++i) {
    for (int v : batch.detector_sets[i]) {
      if (monitors.contains(v)) {
        wins += batch.multiplicity[i];
        break;
      }
    }
  }
  return wins;
}

}  // namespace knight
