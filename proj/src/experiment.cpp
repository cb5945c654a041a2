#include "knight/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "knight/double_oracle.hpp"
#include "knight/errors.hpp"

namespace knight {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

long long parse_int(const std::string& tok, const std::string& what) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw ConfigError("bad " + what + " value '" + tok + "'");
  return v;
}

double parse_float(const std::string& tok, const std::string& what) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || !std::isfinite(v))
    throw ConfigError("bad " + what + " value '" + tok + "'");
  return v;
}

std::string stem_suffix(const std::string& out, const std::string& suffix) {
  std::string base = out;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0)
    base.resize(base.size() - 4);
  return base + suffix + ".csv";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write output file: " + path);
  f << content;
}

}  // namespace

int resolve_fractional(const std::string& token, int n) {
  if (token.find('.') != std::string::npos) {
    double f = parse_float(token, "fraction");
    if (!(f > 0.0 && f <= 1.0))
      throw ConfigError("fraction " + token + " outside (0,1]");
    return int(std::max(1L, std::lround(f * n)));
  }
  long long v = parse_int(token, "sweep");
  if (v < 1 || v > n)
    throw ConfigError("value " + token + " outside [1," + std::to_string(n) +
                      "]");
  return int(v);
}

ExperimentSpec parse_experiment_config(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));

    if (key == "graph") {
      spec.graph_path = value;
    } else if (key == "alpha") {
      spec.alpha = split_list(value);
    } else if (key == "beta") {
      spec.beta = split_list(value);
    } else if (key == "k") {
      spec.k = split_list(value);
    } else if (key == "c1") {
      spec.base.c1 = int(parse_int(value, key));
    } else if (key == "c2") {
      spec.base.c2 = int(parse_int(value, key));
    } else if (key == "samples") {
      spec.base.sample_count = int(parse_int(value, key));
    } else if (key == "epsilon") {
      spec.base.epsilon = parse_float(value, key);
    } else if (key == "seed") {
      spec.base.master_seed = uint64_t(parse_int(value, key));
    } else if (key == "max_iters") {
      spec.base.max_iterations = int(parse_int(value, key));
    } else if (key == "reps") {
      spec.repetitions = int(parse_int(value, key));
    } else if (key == "out") {
      spec.out_path = value;
    } else if (key == "workers") {
      spec.base.workers = int(parse_int(value, key));
    } else if (key == "prob") {
      spec.prob_constant = value == "uniform" ? -1.0 : parse_float(value, key);
    } else if (key == "interval") {
      spec.interval_width = parse_float(value, key);
    } else if (key == "timing") {
      spec.timing = value == "1" || value == "true";
    } else if (key == "exhaustive_cap") {
      spec.base.exhaustive_cap = parse_int(value, key);
    } else if (key == "prescreen_samples") {
      spec.base.prescreen_samples = int(parse_int(value, key));
    } else if (key == "rescore_top") {
      spec.base.rescore_top = int(parse_int(value, key));
    } else if (key == "fallback_restarts") {
      spec.base.fallback_restarts = int(parse_int(value, key));
    } else if (key == "fallback_moves") {
      spec.base.fallback_moves = int(parse_int(value, key));
    } else {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  return spec;
}

ExperimentSpec load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string plot_path(const std::string& out_path) {
  return stem_suffix(out_path, "_plot");
}

std::string progress_path(const std::string& out_path, int alpha, int beta,
                          int k) {
  return stem_suffix(out_path, "_progress_a" + std::to_string(alpha) + "_b" +
                                   std::to_string(beta) + "_k" +
                                   std::to_string(k));
}

void run_experiment(const ExperimentSpec& spec) {
  if (spec.repetitions < 1) throw ConfigError("repetitions must be positive");
  if (spec.graph_path.empty()) throw ConfigError("no graph file given");

  ProbRule probs = spec.prob_constant >= 0.0
                       ? ProbRule::constant(spec.prob_constant)
                       : ProbRule::seeded_uniform(spec.base.master_seed);
  Network net = load_network_file(spec.graph_path, probs,
                                  IntervalRule::symmetric(spec.interval_width));

  auto resolve = [&](const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw ConfigError("empty sweep list");
    std::vector<int> out;
    for (const auto& t : tokens) out.push_back(resolve_fractional(t, net.node_count));
    return out;
  };
  std::vector<int> alphas = resolve(spec.alpha);
  std::vector<int> betas = resolve(spec.beta);
  std::vector<int> ks = resolve(spec.k);

  std::string results = "alpha,beta,k,rep,defender_value,iterations,gap,wall_ms\n";
  std::map<std::tuple<int, int, int>, double> cell_mean;
  char buf[256];

  for (int a : alphas) {
    for (int b : betas) {
      for (int k : ks) {
        std::string progress = "rep,iter,U,do_value,ao_value,gap,m_count,theta_count\n";
        double sum_v = 0.0, sum_iter = 0.0, sum_gap = 0.0, sum_wall = 0.0;

        for (int rep = 0; rep < spec.repetitions; ++rep) {
          GameConfig cfg = spec.base;
          cfg.alpha = a;
          cfg.beta = b;
          cfg.k = k;
          cfg.master_seed = spec.base.master_seed + uint64_t(rep);

          std::ostringstream captured;
          auto t0 = std::chrono::steady_clock::now();
          EquilibriumResult res = run_knight(net, cfg, {}, &captured);
          auto t1 = std::chrono::steady_clock::now();
          long long wall =
              spec.timing
                  ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 -
                                                                          t0)
                        .count()
                  : 0;

          std::istringstream lines(captured.str());
          std::string line;
          while (std::getline(lines, line)) {
            if (!line.empty() && line[0] == '#')
              progress += line + "\n";
            else
              progress += std::to_string(rep) + "," + line + "\n";
          }

          std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.10g,%d,%.10g,%lld\n",
                        a, b, k, rep, res.value, res.iterations, res.gap,
                        wall);
          results += buf;
          if (!res.converged) {
            std::snprintf(buf, sizeof buf,
                          "# nonconverged alpha=%d beta=%d k=%d rep=%d "
                          "gap=%.10g\n",
                          a, b, k, rep, res.gap);
            results += buf;
          }
          sum_v += res.value;
          sum_iter += res.iterations;
          sum_gap += res.gap;
          sum_wall += double(wall);
        }

        double r = spec.repetitions;
        std::snprintf(buf, sizeof buf, "%d,%d,%d,mean,%.10g,%.10g,%.10g,%.10g\n",
                      a, b, k, sum_v / r, sum_iter / r, sum_gap / r,
                      sum_wall / r);
        results += buf;
        cell_mean[{a, b, k}] = sum_v / r;
        write_file(progress_path(spec.out_path, a, b, k), progress);
      }
    }
  }

  std::string plot = "alpha,k,beta,mean_value\n";
  for (int a : alphas)
    for (int k : ks)
      for (int b : betas) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.10g\n", a, k, b,
                      cell_mean[{a, b, k}]);
        plot += buf;
      }

  write_file(spec.out_path, results);
  write_file(plot_path(spec.out_path), plot);
}

}  // namespace knight
