#include "knight/attacker_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "knight/errors.hpp"
#include "knight/rng.hpp"

namespace knight {

namespace {

long long sat_add(long long a, long long b) {
  constexpr long long kMax = CandidateSpace::kUncountable;
  if (a > kMax - b) return kMax;
  return a + b;
}

long long sat_mul(long long a, long long b) {
  constexpr long long kMax = CandidateSpace::kUncountable;
  if (a == 0 || b == 0) return 0;
  if (a > kMax / b) return kMax;
  return a * b;
}

long long sat_choose(int n, int s) {
  long long c = 1;
  for (int i = 1; i <= s; ++i) {
    c = sat_mul(c, n - s + i);
    if (c == CandidateSpace::kUncountable) return c;
    c /= i;
  }
  return c;
}

// fn(combo) for every size-s ascending index combination of [0, n)
template <class F>
void combinations(int n, int s, F fn) {
  if (s > n) return;
  std::vector<int> combo(s);
  for (int i = 0; i < s; ++i) combo[i] = i;
  while (true) {
    fn(combo);
    int i = s - 1;
    while (i >= 0 && combo[i] == n - s + i) --i;
    if (i < 0) return;
    ++combo[i];
    for (int j = i + 1; j < s; ++j) combo[j] = combo[j - 1] + 1;
  }
}

void check_mix(const Network& net, const std::vector<MonitorSet>& support,
               const std::vector<double>& weights) {
  if (support.empty() || support.size() != weights.size())
    throw ValidationError("monitor mix needs matching sets and weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("negative mix weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("mix weights sum to " + std::to_string(total) +
                          ", expected 1");
  for (const auto& m : support)
    for (int v : m.monitors)
      if (v < 0 || v >= net.node_count)
        throw ValidationError("monitor node " + std::to_string(v) +
                              " out of range");
}

// Defender's expected utility against the mix, shared streams per theta.
double mix_value(const Network& net, const AttackStrategy& theta,
                 const std::vector<MonitorSet>& support,
                 const std::vector<double>& weights, const GameConfig& cfg,
                 int samples, int workers) {
  DetectorBatch b = draw_detector_batch(net, theta, cfg.alpha, cfg.beta,
                                        cfg.master_seed, samples, workers);
  double v = 0.0;
  for (size_t i = 0; i < support.size(); ++i)
    v += weights[i] * double(batch_wins(b, support[i]));
  return v / double(samples);
}

}  // namespace

CandidateSpace enumerate_candidates(const Network& net, const GameConfig& cfg,
                                    bool allow_fast_path) {
  CandidateSpace space;
  space.node_count = net.node_count;
  space.c1 = cfg.c1;
  space.c2 = cfg.c2;
  space.fast_path = allow_fast_path && cfg.alpha == 1;
  for (int e = 0; e < net.edge_count(); ++e) {
    auto [lo, hi] = effective_interval(net, e);
    if (hi > lo) {
      space.adjustable_edges.push_back(e);
      space.endpoints.push_back({lo, hi});
    }
  }

  int ne = int(space.adjustable_edges.size());
  long long edge_total = 0;
  for (int j = 0; j <= std::min(cfg.c2, ne); ++j) {
    long long two_j = j > 62 ? CandidateSpace::kUncountable : (1LL << j);
    long long assignments = space.fast_path
                                ? sat_choose(ne, j)
                                : sat_mul(sat_choose(ne, j), two_j);
    edge_total = sat_add(edge_total, assignments);
  }
  long long seed_total = 0;
  if (space.fast_path) {
    seed_total = net.node_count;
  } else {
    for (int s = 1; s <= std::min(cfg.c1, net.node_count); ++s)
      seed_total = sat_add(seed_total, sat_choose(net.node_count, s));
  }
  space.count = sat_mul(seed_total, edge_total);
  return space;
}

void CandidateSpace::for_each(
    const std::function<void(long long, const AttackStrategy&)>& fn) const {
  long long idx = 0;
  int ne = int(adjustable_edges.size());
  int max_j = std::min(c2, ne);

  auto emit_edges = [&](const std::vector<int>& seed_ids) {
    AttackStrategy theta;
    theta.seeds = seed_ids;
    for (int j = 0; j <= max_j; ++j) {
      combinations(ne, j, [&](const std::vector<int>& edge_pick) {
        if (fast_path) {
          theta.overrides.clear();
          for (int i : edge_pick)
            theta.overrides.push_back({adjustable_edges[i], endpoints[i].first});
          fn(idx++, theta);
          return;
        }
        for (uint64_t mask = 0; mask < (uint64_t(1) << j); ++mask) {
          theta.overrides.clear();
          for (int b = 0; b < j; ++b) {
            int i = edge_pick[b];
            double p = ((mask >> b) & 1) ? endpoints[i].second
                                         : endpoints[i].first;
            theta.overrides.push_back({adjustable_edges[i], p});
          }
          fn(idx++, theta);
        }
      });
    }
  };

  int max_s = fast_path ? 1 : std::min(c1, node_count);
  for (int s = 1; s <= max_s; ++s)
    combinations(node_count, s, [&](const std::vector<int>& seed_ids) {
      emit_edges(seed_ids);
    });
}

AttackerResponse attacker_best_response(const Network& net,
                                        const std::vector<MonitorSet>& support,
                                        const std::vector<double>& weights,
                                        const GameConfig& cfg) {
  check_mix(net, support, weights);
  CandidateSpace space = enumerate_candidates(net, cfg);
  if (space.count > cfg.exhaustive_cap)
    return local_search_fallback(net, support, weights, cfg);

  int n_pre = std::min(cfg.prescreen_samples, cfg.sample_count);
  size_t keep = size_t(std::min<long long>(cfg.rescore_top, space.count));

  // Stage 1: screen everything on the reduced batch, keeping the best
  // `keep` candidates under (value, enumeration index).
  struct Scored {
    double value;
    long long index;
    AttackStrategy theta;
  };
  auto worse = [](const Scored& a, const Scored& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.index < b.index;
  };
  std::priority_queue<Scored, std::vector<Scored>, decltype(worse)> top(worse);

  space.for_each([&](long long idx, const AttackStrategy& theta) {
    double v = mix_value(net, theta, support, weights, cfg, n_pre, 1);
    if (top.size() < keep) {
      top.push({v, idx, theta});
    } else if (v < top.top().value ||
               (v == top.top().value && idx < top.top().index)) {
      top.pop();
      top.push({v, idx, theta});
    }
  });

  AttackerResponse best;
  best.evaluated = space.count;
  bool first = true;
  while (!top.empty()) {
    Scored s = top.top();
    top.pop();
    double v = s.value;
    if (n_pre < cfg.sample_count) {
      v = mix_value(net, s.theta, support, weights, cfg, cfg.sample_count,
                    cfg.workers);
      ++best.evaluated;
    }
    if (first || v < best.value ||
        (v == best.value && canonical_less(s.theta, best.theta))) {
      best.theta = s.theta;
      best.value = v;
      first = false;
    }
  }
  return best;
}

AttackerResponse local_search_fallback(const Network& net,
                                       const std::vector<MonitorSet>& support,
                                       const std::vector<double>& weights,
                                       const GameConfig& cfg) {
  check_mix(net, support, weights);
  int n = net.node_count;
  int n_pre = std::min(cfg.prescreen_samples, cfg.sample_count);

  std::vector<int> adjustable;
  std::vector<std::pair<double, double>> ends;
  for (int e = 0; e < net.edge_count(); ++e) {
    auto [lo, hi] = effective_interval(net, e);
    if (hi > lo) {
      adjustable.push_back(e);
      ends.push_back({lo, hi});
    }
  }

  long long evaluated = 0;
  auto cmp = [](const AttackStrategy& a, const AttackStrategy& b) {
    return canonical_less(a, b);
  };
  std::map<AttackStrategy, double, decltype(cmp)> cache(cmp);
  auto eval = [&](const AttackStrategy& theta) {
    auto it = cache.find(theta);
    if (it != cache.end()) return it->second;
    double v = mix_value(net, theta, support, weights, cfg, n_pre, 1);
    ++evaluated;
    cache.emplace(theta, v);
    return v;
  };

  // The cheap exhaustive slice: every single-seed, no-override attack.
  AttackStrategy single_best;
  double single_val = 0.0;
  for (int v = 0; v < n; ++v) {
    AttackStrategy theta;
    theta.seeds = {v};
    double val = eval(theta);
    if (v == 0 || val < single_val) {
      single_best = theta;
      single_val = val;
    }
  }

  std::vector<AttackStrategy> pool;
  pool.push_back(single_best);

  rng::SplitMix gen(rng::mix64(cfg.master_seed ^ 0x66616c6c6261636bull));
  auto random_start = [&]() {
    AttackStrategy theta;
    int s = 1 + int(gen.range(0, std::min(cfg.c1, n) - 1));
    std::set<int> seeds;
    while (int(seeds.size()) < s) seeds.insert(int(gen.range(0, n - 1)));
    theta.seeds.assign(seeds.begin(), seeds.end());
    int max_j = std::min(cfg.c2, int(adjustable.size()));
    if (max_j > 0) {
      int j = int(gen.range(0, max_j));
      std::set<int> picks;
      while (int(picks.size()) < j)
        picks.insert(int(gen.range(0, int(adjustable.size()) - 1)));
      for (int i : picks) {
        bool hi = gen.next() & 1;
        theta.overrides.push_back(
            {adjustable[i], hi ? ends[i].second : ends[i].first});
      }
    }
    return theta;
  };

  for (int r = 0; r < cfg.fallback_restarts; ++r) {
    AttackStrategy cur = (r == 0) ? single_best : random_start();
    double cur_val = eval(cur);
    long long budget = cfg.fallback_moves;

    auto try_move = [&](const AttackStrategy& cand) {
      if (budget <= 0) return false;
      long long before = evaluated;
      double v = eval(cand);
      if (evaluated > before) --budget;  // cache hits are free
      if (v < cur_val) {
        cur = cand;
        cur_val = v;
        return true;
      }
      return false;
    };

    bool improved = true;
    while (improved && budget > 0) {
      improved = false;

      // swap one seed
      for (size_t i = 0; i < cur.seeds.size() && !improved; ++i) {
        for (int v = 0; v < n && !improved; ++v) {
          if (std::binary_search(cur.seeds.begin(), cur.seeds.end(), v))
            continue;
          AttackStrategy cand = cur;
          cand.seeds[i] = v;
          std::sort(cand.seeds.begin(), cand.seeds.end());
          improved = try_move(cand);
        }
      }
      // flip one override to the opposite endpoint
      for (size_t o = 0; o < cur.overrides.size() && !improved; ++o) {
        AttackStrategy cand = cur;
        auto pos = std::lower_bound(adjustable.begin(), adjustable.end(),
                                    cand.overrides[o].first);
        size_t i = size_t(pos - adjustable.begin());
        cand.overrides[o].second = (cand.overrides[o].second == ends[i].first)
                                       ? ends[i].second
                                       : ends[i].first;
        improved = try_move(cand);
      }
      // drop one override
      for (size_t o = 0; o < cur.overrides.size() && !improved; ++o) {
        AttackStrategy cand = cur;
        cand.overrides.erase(cand.overrides.begin() + o);
        improved = try_move(cand);
      }
      // add one override at either endpoint
      if (int(cur.overrides.size()) < cfg.c2) {
        for (size_t i = 0; i < adjustable.size() && !improved; ++i) {
          bool present = false;
          for (const auto& [e, p] : cur.overrides)
            if (e == adjustable[i]) present = true;
          if (present) continue;
          for (int endpoint = 0; endpoint < 2 && !improved; ++endpoint) {
            AttackStrategy cand = cur;
            cand.overrides.push_back(
                {adjustable[i],
                 endpoint ? ends[i].second : ends[i].first});
            std::sort(cand.overrides.begin(), cand.overrides.end());
            improved = try_move(cand);
          }
        }
      }
    }
    pool.push_back(cur);
  }

  // Rescore the distinct pool members at the full sample count.
  std::sort(pool.begin(), pool.end(), cmp);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  AttackerResponse best;
  best.used_fallback = true;
  bool first = true;
  for (const auto& theta : pool) {
    double v = n_pre < cfg.sample_count
                   ? mix_value(net, theta, support, weights, cfg,
                               cfg.sample_count, cfg.workers)
                   : eval(theta);
    ++evaluated;
    if (first || v < best.value ||
        (v == best.value && canonical_less(theta, best.theta))) {
      best.theta = theta;
      best.value = v;
      first = false;
    }
  }
  best.evaluated = evaluated;
  return best;
}

}  // namespace knight
