#include "knight/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "knight/errors.hpp"
#include "knight/rng.hpp"

namespace knight {

namespace {

constexpr double kBoundTol = 1e-12;

double snap01(double x) {
  if (x < 0.0 && x >= -kBoundTol) return 0.0;
  if (x > 1.0 && x <= 1.0 + kBoundTol) return 1.0;
  return x;
}

std::string edge_name(const Network& net, int e) {
  const auto& [s, d] = net.edges[e];
  std::ostringstream os;
  os << "edge " << e << " (";
  if (!net.original_ids.empty())
    os << net.original_ids[s] << "->" << net.original_ids[d];
  else
    os << s << "->" << d;
  os << ")";
  return os.str();
}

}  // namespace

Network make_network(int node_count, std::vector<std::pair<int, int>> edges,
                     std::vector<double> base_prob,
                     std::vector<double> interval_lo,
                     std::vector<double> interval_hi,
                     std::vector<long long> original_ids) {
  if (node_count <= 0) throw ValidationError("network has no nodes");
  size_t m = edges.size();
  if (base_prob.size() != m || interval_lo.size() != m ||
      interval_hi.size() != m)
    throw ValidationError("edge attribute lists disagree on edge count");
  if (!original_ids.empty() && original_ids.size() != size_t(node_count))
    throw ValidationError("original id list does not cover all nodes");

  Network net;
  net.node_count = node_count;
  net.edges = std::move(edges);
  net.base_prob = std::move(base_prob);
  net.interval_lo = std::move(interval_lo);
  net.interval_hi = std::move(interval_hi);
  net.original_ids = std::move(original_ids);

  std::set<std::pair<int, int>> seen;
  for (size_t e = 0; e < m; ++e) {
    auto [s, d] = net.edges[e];
    if (s < 0 || s >= node_count || d < 0 || d >= node_count)
      throw ValidationError(edge_name(net, int(e)) + ": endpoint out of range");
    if (s == d) throw ValidationError(edge_name(net, int(e)) + ": self-loop");
    if (!seen.insert({s, d}).second)
      throw ValidationError(edge_name(net, int(e)) + ": duplicate edge");

    double p = snap01(net.base_prob[e]);
    double lo = net.interval_lo[e];
    double hi = net.interval_hi[e];
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError(edge_name(net, int(e)) + ": probability " +
                            std::to_string(net.base_prob[e]) +
                            " outside [0,1]");
    if (!(lo >= -kBoundTol) || !(hi >= -kBoundTol))
      throw ValidationError(edge_name(net, int(e)) + ": negative offset");
    lo = std::max(lo, 0.0);
    hi = std::max(hi, 0.0);
    if (!(p - lo >= -kBoundTol))
      throw ValidationError(edge_name(net, int(e)) +
                            ": lower bound below 0 (p-lo < 0)");
    if (!(p + hi <= 1.0 + kBoundTol))
      throw ValidationError(edge_name(net, int(e)) +
                            ": upper bound above 1 (p+hi > 1)");
    net.base_prob[e] = p;
    net.interval_lo[e] = std::min(lo, p);
    net.interval_hi[e] = std::min(hi, 1.0 - p);
  }

  net.adjacency.assign(node_count, {});
  net.reverse_adjacency.assign(node_count, {});
  for (size_t e = 0; e < m; ++e) {
    net.adjacency[net.edges[e].first].push_back(int(e));
    net.reverse_adjacency[net.edges[e].second].push_back(int(e));
  }
  return net;
}

namespace {

struct RawEdge {
  long long src, dst;
  double prob;
  bool has_prob;
  int line;
};

long long parse_id(std::string_view tok, int line, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0)
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" +
                     std::string(tok) + "'");
  return v;
}

double parse_prob(const std::string& tok, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw ParseError("line " + std::to_string(line) + ": bad probability '" +
                     tok + "'");
  return v;
}

}  // namespace

Network load_network(const std::string& edge_list_text, const ProbRule& probs,
                     const IntervalRule& intervals) {
  std::vector<RawEdge> raw;
  std::set<long long> ids;

  std::istringstream in(edge_list_text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream row(line);
    std::string a, b, c, extra;
    row >> a >> b >> c >> extra;
    if (b.empty())
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'src dst [prob]'");
    if (!extra.empty())
      throw ParseError("line " + std::to_string(lineno) +
                       ": trailing tokens after '" + c + "'");

    RawEdge e;
    e.src = parse_id(a, lineno, "source id");
    e.dst = parse_id(b, lineno, "destination id");
    e.has_prob = !c.empty();
    e.prob = e.has_prob ? parse_prob(c, lineno) : 0.0;
    e.line = lineno;
    if (e.src == e.dst)
      throw ValidationError("line " + std::to_string(lineno) + ": self-loop " +
                            std::to_string(e.src) + "->" +
                            std::to_string(e.dst));
    raw.push_back(e);
    ids.insert(e.src);
    ids.insert(e.dst);
  }
  if (raw.empty()) throw ParseError("edge list contains no edges");

  // Dense ids ordered by original id, so the compaction is independent of
  // the order edges appear in the file.
  std::map<long long, int> dense;
  std::vector<long long> original;
  for (long long id : ids) {
    dense[id] = int(original.size());
    original.push_back(id);
  }

  std::set<std::pair<long long, long long>> seen;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> p, lo, hi;
  for (size_t e = 0; e < raw.size(); ++e) {
    if (!seen.insert({raw[e].src, raw[e].dst}).second)
      throw ValidationError("line " + std::to_string(raw[e].line) +
                            ": duplicate edge " + std::to_string(raw[e].src) +
                            "->" + std::to_string(raw[e].dst));
    edges.push_back({dense[raw[e].src], dense[raw[e].dst]});
    double pe;
    if (raw[e].has_prob)
      pe = raw[e].prob;
    else if (probs.kind == ProbRule::Kind::Constant)
      pe = probs.value;
    else
      pe = rng::uniform01(rng::mix64(probs.seed), e, 0x62617365u);
    if (!(pe >= -kBoundTol && pe <= 1.0 + kBoundTol))
      throw ValidationError("line " + std::to_string(raw[e].line) + ": edge " +
                            std::to_string(raw[e].src) + "->" +
                            std::to_string(raw[e].dst) + " probability " +
                            std::to_string(pe) + " outside [0,1]");
    pe = std::clamp(pe, 0.0, 1.0);
    p.push_back(pe);
    lo.push_back(std::min(std::max(intervals.lo, 0.0), pe));
    hi.push_back(std::min(std::max(intervals.hi, 0.0), 1.0 - pe));
  }

  int nodes = int(original.size());
  return make_network(nodes, std::move(edges), std::move(p), std::move(lo),
                      std::move(hi), std::move(original));
}

Network load_network_file(const std::string& path, const ProbRule& probs,
                          const IntervalRule& intervals) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_network(buf.str(), probs, intervals);
}

std::pair<double, double> effective_interval(const Network& net, int e) {
  if (e < 0 || e >= net.edge_count())
    throw ValidationError("edge id " + std::to_string(e) + " out of range");
  return {net.base_prob[e] - net.interval_lo[e],
          net.base_prob[e] + net.interval_hi[e]};
}

std::string to_edge_list(const Network& net) {
  std::string out;
  char buf[64];
  for (int e = 0; e < net.edge_count(); ++e) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", net.edges[e].first,
                  net.edges[e].second, net.base_prob[e]);
    out += buf;
  }
  return out;
}

std::string id_map_csv(const Network& net) {
  std::string out = "original_id,dense_id\n";
  for (int v = 0; v < net.node_count; ++v) {
    long long orig = net.original_ids.empty() ? v : net.original_ids[v];
    out += std::to_string(orig) + "," + std::to_string(v) + "\n";
  }
  return out;
}

}  // namespace knight
