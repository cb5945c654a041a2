#include "knight/defender_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "knight/errors.hpp"

namespace knight {

OracleObjective build_oracle_objective(const Network& net,
                                       std::vector<AttackStrategy> thetas,
                                       std::vector<double> weights,
                                       const GameConfig& cfg,
                                       int sample_count) {
  if (thetas.empty() || thetas.size() != weights.size())
    throw ValidationError("objective needs matching thetas and weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("negative objective weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("objective weights sum to " + std::to_string(total) +
                          ", expected 1");
  for (double& w : weights) w /= total;

  int n = sample_count > 0 ? sample_count : cfg.sample_count;
  OracleObjective obj;
  obj.weights = std::move(weights);
  obj.batches.reserve(thetas.size());
  for (const auto& theta : thetas)
    obj.batches.push_back(draw_detector_batch(net, theta, cfg.alpha, cfg.beta,
                                              cfg.master_seed, n,
                                              cfg.workers));
  obj.thetas = std::move(thetas);
  return obj;
}

double objective_value(const OracleObjective& obj, const MonitorSet& m) {
  double v = 0.0;
  for (size_t t = 0; t < obj.thetas.size(); ++t)
    v += obj.weights[t] * double(batch_wins(obj.batches[t], m)) /
         double(obj.batches[t].sample_count);
  return v;
}

namespace {

// Coverage view of the objective: selecting node v newly covers every
// not-yet-covered detector set containing v. Marginal gains keep an integer
// core per theta so equal gains are exactly equal and tie-breaks by node id
// are meaningful.
struct CoverState {
  const OracleObjective* obj;
  int node_count;
  std::vector<double> scale;                       // weight / sample_count
  std::vector<std::vector<std::vector<int>>> inv;  // theta -> node -> sets
  std::vector<std::vector<char>> covered;          // theta -> set -> flag

  CoverState(const OracleObjective& o, int nodes) : obj(&o), node_count(nodes) {
    size_t nt = o.thetas.size();
    scale.resize(nt);
    inv.resize(nt);
    covered.resize(nt);
    for (size_t t = 0; t < nt; ++t) {
      scale[t] = o.weights[t] / double(o.batches[t].sample_count);
      inv[t].resize(nodes);
      const auto& sets = o.batches[t].detector_sets;
      covered[t].assign(sets.size(), 0);
      for (size_t i = 0; i < sets.size(); ++i)
        for (int v : sets[i]) inv[t][v].push_back(int(i));
    }
  }

  double gain(int v) const {
    double g = 0.0;
    for (size_t t = 0; t < inv.size(); ++t) {
      long long add = 0;
      for (int i : inv[t][v])
        if (!covered[t][i]) add += obj->batches[t].multiplicity[i];
      g += scale[t] * double(add);
    }
    return g;
  }

  void select(int v) {
    for (size_t t = 0; t < inv.size(); ++t)
      for (int i : inv[t][v]) covered[t][i] = 1;
  }
};

GreedyResult finish(const OracleObjective& obj, std::vector<int> order) {
  GreedyResult r;
  r.monitors = MonitorSet::of(order);
  r.order = std::move(order);
  r.value = objective_value(obj, r.monitors);
  return r;
}

void check_greedy_args(const OracleObjective& obj, int k) {
  if (k < 1) throw ValidationError("monitor budget k must be positive");
  if (obj.thetas.empty()) throw ValidationError("objective has no thetas");
}

long long choose_capped(int n, int k, long long cap) {
  long long c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;  // exact: product of i consecutive ints / i!
    if (c > cap) return cap + 1;
  }
  return c;
}

}  // namespace

GreedyResult greedy_monitor_selection(const Network& net,
                                      const OracleObjective& obj, int k,
                                      const GameConfig& cfg) {
  (void)cfg;
  check_greedy_args(obj, k);
  CoverState state(obj, net.node_count);
  int picks = std::min(k, net.node_count);

  struct Entry {
    double gain;
    int node;
    int round;  // selection round the gain was computed in
  };
  auto lower = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> queue(lower);
  for (int v = 0; v < net.node_count; ++v)
    queue.push({state.gain(v), v, 0});

  std::vector<int> order;
  for (int step = 0; step < picks; ++step) {
    while (true) {
      Entry top = queue.top();
      queue.pop();
      if (top.round == step) {
        order.push_back(top.node);
        state.select(top.node);
        break;
      }
      top.gain = state.gain(top.node);
      top.round = step;
      queue.push(top);
    }
  }
  return finish(obj, std::move(order));
}

GreedyResult naive_greedy_monitor_selection(const Network& net,
                                            const OracleObjective& obj, int k,
                                            const GameConfig& cfg) {
  (void)cfg;
  check_greedy_args(obj, k);
  CoverState state(obj, net.node_count);
  int picks = std::min(k, net.node_count);

  std::vector<char> taken(net.node_count, 0);
  std::vector<int> order;
  for (int step = 0; step < picks; ++step) {
    int best = -1;
    double best_gain = 0.0;
    for (int v = 0; v < net.node_count; ++v) {
      if (taken[v]) continue;
      double g = state.gain(v);
      if (best < 0 || g > best_gain) {
        best = v;
        best_gain = g;
      }
    }
    taken[best] = 1;
    order.push_back(best);
    state.select(best);
  }
  return finish(obj, std::move(order));
}

GreedyResult brute_force_monitor_selection(const Network& net,
                                           const OracleObjective& obj, int k,
                                           const GameConfig& cfg) {
  (void)cfg;
  check_greedy_args(obj, k);
  int n = net.node_count;
  int picks = std::min(k, n);
  if (choose_capped(n, picks, 1'000'000) > 1'000'000)
    throw CapError("monitor enumeration over C(" + std::to_string(n) + "," +
                   std::to_string(picks) + ") sets exceeds 1e6");

  std::vector<int> combo(picks);
  for (int i = 0; i < picks; ++i) combo[i] = i;

  GreedyResult best;
  bool first = true;
  while (true) {
    MonitorSet m{combo};
    double v = objective_value(obj, m);
    if (first || v > best.value) {
      best.monitors = m;
      best.order = combo;
      best.value = v;
      first = false;
    }
    // next combination in lexicographic order
    int i = picks - 1;
    while (i >= 0 && combo[i] == n - picks + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < picks; ++j) combo[j] = combo[j - 1] + 1;
  }
  return best;
}

}  // namespace knight
