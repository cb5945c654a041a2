#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace knight {

// How to fill in base probabilities for edge-list rows without a prob column.
struct ProbRule {
  enum class Kind { Constant, SeededUniform };
  Kind kind = Kind::Constant;
  double value = 0.1;     // Constant
  uint64_t seed = 0;      // SeededUniform, one draw per edge slot

  static ProbRule constant(double p) { return {Kind::Constant, p, 0}; }
  static ProbRule seeded_uniform(uint64_t seed) {
    return {Kind::SeededUniform, 0.0, seed};
  }
};

// Constant adjustment offsets applied around each edge's base probability.
// Offsets are clipped per edge so [p-lo, p+hi] stays inside [0,1].
struct IntervalRule {
  double lo = 0.0;
  double hi = 0.0;

  static IntervalRule none() { return {0.0, 0.0}; }
  static IntervalRule constant(double lo, double hi) { return {lo, hi}; }
  static IntervalRule symmetric(double w) { return {w, w}; }
};

// Immutable directed graph with per-edge base probabilities and adjustment
// intervals stored as offsets (lo below, hi above the base value).
// Node ids are dense 0..node_count-1; original file ids live in original_ids.
struct Network {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;        // (src, dst) in load order
  std::vector<double> base_prob;
  std::vector<double> interval_lo;               // nonnegative offset below
  std::vector<double> interval_hi;               // nonnegative offset above
  std::vector<std::vector<int>> adjacency;       // node -> out-edge ids
  std::vector<std::vector<int>> reverse_adjacency;  // node -> in-edge ids
  std::vector<long long> original_ids;           // dense id -> input id

  int edge_count() const { return int(edges.size()); }

  // Identity of the graph itself; the original-id sidecar and derived
  // adjacency are excluded (adjacency is a function of edges).
  bool operator==(const Network& o) const {
    return node_count == o.node_count && edges == o.edges &&
           base_prob == o.base_prob && interval_lo == o.interval_lo &&
           interval_hi == o.interval_hi;
  }
};

// Validates invariants (dense ids, no self-loops or duplicates, interval
// bounds within [0,1] up to 1e-12) and builds both adjacency indexes.
// Values within tolerance of a bound are snapped onto it.
Network make_network(int node_count, std::vector<std::pair<int, int>> edges,
                     std::vector<double> base_prob,
                     std::vector<double> interval_lo,
                     std::vector<double> interval_hi,
                     std::vector<long long> original_ids = {});

// Parses "src dst [prob]" rows ('#' comments, blank lines skipped), compacts
// arbitrary nonnegative ids to dense ones sorted by original id, applies the
// probability and interval rules, and validates the result.
Network load_network(const std::string& edge_list_text, const ProbRule& probs,
                     const IntervalRule& intervals);

Network load_network_file(const std::string& path, const ProbRule& probs,
                          const IntervalRule& intervals);

// The attacker-eligible probability range [base-lo, base+hi] of one edge.
std::pair<double, double> effective_interval(const Network& net, int e);

// "src dst prob" rows over dense ids, round-trip safe (%.17g probabilities).
std::string to_edge_list(const Network& net);

// Sidecar mapping, one "original_id,dense_id" row per node.
std::string id_map_csv(const Network& net);

}  // namespace knight
