#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrga/alloc_probe.hpp"
#include "lrga/attention.hpp"
#include "lrga/checks.hpp"
#include "lrga/error.hpp"
#include "lrga/graph_io.hpp"
#include "lrga/learn.hpp"
#include "lrga/report.hpp"
#include "lrga/rgnn.hpp"
#include "lrga/wl.hpp"

#ifndef LRGA_BUILD_ID
#define LRGA_BUILD_ID "unknown"
#endif

namespace lrga::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
};

/// Columnar result rendered as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  std::string csv() const {
    std::ostringstream s;
    for (std::size_t c = 0; c < columns.size(); ++c) s << (c ? "," : "") << columns[c];
    s << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) s << ',';
        const json& v = row[c];
        if (v.is_null()) continue;
        if (v.is_number_float()) {
          s << format_double(v.get<double>());
        } else if (v.is_string()) {
          s << v.get<std::string>();
        } else {
          s << v.dump();
        }
      }
      s << '\n';
    }
    return s.str();
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

struct Outcome {
  int code = kOk;
  std::string report;
  json parameters = json::object();
  std::vector<std::uint64_t> seeds;
  json summary;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string resolve_output(const Common& c, const std::string& command) {
  if (!c.out.empty()) return c.out;
  const char* dir = std::getenv(kOutDirEnv);
  if (dir != nullptr && *dir != '\0') return std::string(dir) + "/" + command + "." + c.format;
  return {};
}

int publish(const std::string& command, const Common& common, const Outcome& o, double seconds,
            std::ostream& out, std::ostream& err) {
  const std::string path = resolve_output(common, command);
  json manifest = {{"command", command},
                   {"parameters", o.parameters},
                   {"seeds", o.seeds},
                   {"build", LRGA_BUILD_ID},
                   {"rng", std::string(kRngAlgorithm)},
                   {"timing", {{"wall_seconds", seconds}}},
                   {"format", common.format},
                   {"exit_code", o.code},
                   {"outputs", json::array()}};
  if (!o.summary.is_null()) manifest["summary"] = o.summary;
  if (path.empty()) {
    out << o.report;
    err << dump_json(manifest) << '\n';
  } else {
    write_text_file(path, o.report);
    manifest["outputs"].push_back(path);
    write_text_file(path + ".manifest.json", dump_json(manifest) + "\n");
  }
  return o.code;
}

std::string render(const Table& t, const Common& c, json extra = json()) {
  if (c.format == "csv") return t.csv();
  json doc = extra.is_null() ? json::object() : std::move(extra);
  doc["rows"] = t.to_json();
  return dump_json(doc) + "\n";
}

json histogram_json(const Histogram& h) {
  json arr = json::array();
  for (const auto& [color, count] : h) arr.push_back({color, count});
  return arr;
}

// ---------------------------------------------------------------- iso

struct IsoArgs {
  std::vector<std::string> files;
  std::string algorithm = "fwl2";
};

Outcome cmd_iso(const IsoArgs& a, const Common& c) {
  std::vector<std::pair<std::string, Graph>> graphs;
  for (const auto& file : a.files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + file + "'");
    std::vector<Graph> gs;
    try {
      gs = read_graph6(in);
    } catch (const ParseError& e) {
      throw UsageError(file + ": " + e.what());
    }
    if (gs.empty()) throw UsageError(file + ": no graph6 records");
    for (std::size_t k = 0; k < gs.size(); ++k) {
      graphs.emplace_back(gs.size() == 1 ? file : file + "#" + std::to_string(k), std::move(gs[k]));
    }
  }
  if (graphs.size() < 2) throw UsageError("iso needs at least two graphs");
  const WlAlgorithm alg = a.algorithm == "wl1" ? WlAlgorithm::wl1 : WlAlgorithm::fwl2;

  json jgraphs = json::array();
  for (const auto& [name, g] : graphs) {
    json hist = json::array();
    const auto history = alg == WlAlgorithm::wl1 ? wl1_refine(g).history : fwl2_refine(g).history;
    for (const auto& h : history) hist.push_back(histogram_json(h));
    jgraphs.push_back({{"name", name},
                       {"n", g.size()},
                       {"edges", g.edge_count()},
                       {"graph6", encode_graph6(g)},
                       {"histograms", hist}});
  }

  Table t{{"i", "j", "verdict", "witness_round", "rounds"}, {}};
  json verdicts = json::array();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      const IsoVerdict v = iso_test(graphs[i].second, graphs[j].second, alg);
      const std::string word = v.distinguished() ? "distinguished" : "indistinguishable";
      row.push_back(word);
      t.rows.push_back({i, j, word, v.witness_round ? json(*v.witness_round) : json(), v.rounds});
    }
    verdicts.push_back(std::move(row));
  }

  Outcome o;
  o.parameters = {{"files", a.files}, {"algorithm", a.algorithm}};
  if (c.format == "csv") {
    o.report = t.csv();
  } else {
    json doc = {{"algorithm", a.algorithm}, {"graphs", jgraphs}, {"verdicts", verdicts},
                {"pairs", t.to_json()}};
    o.report = dump_json(doc) + "\n";
  }
  return o;
}

// ---------------------------------------------------------------- kernel-check

struct KernelArgs {
  KernelCheckConfig cfg;
  bool perturb = false;
};

Outcome cmd_kernel_check(KernelArgs a, const Common& c) {
  a.cfg.seed = c.seed;
  if (a.perturb) a.cfg.perturbation = 1e-5;
  const auto checks = run_kernel_suite(a.cfg);

  Table t{{"name", "cases", "max_error", "tolerance", "passed"}, {}};
  bool ok = true;
  for (const auto& chk : checks) {
    ok = ok && chk.passed();
    t.rows.push_back({chk.name, chk.cases, chk.max_error, chk.tolerance, chk.passed()});
  }
  Outcome o;
  o.code = ok ? kOk : kViolation;
  o.seeds = {c.seed};
  o.parameters = {{"kernel_cases", a.cfg.kernel_cases},
                  {"kernel_max_degree", a.cfg.kernel_max_degree},
                  {"kernel_max_block_dim", a.cfg.kernel_max_block_dim},
                  {"lemma_points", a.cfg.lemma_points},
                  {"graph_cases", a.cfg.graph_cases},
                  {"graph_max_nodes", a.cfg.graph_max_nodes},
                  {"head_degree", a.cfg.head_degree},
                  {"perturbation", a.cfg.perturbation}};
  o.report = render(t, c, {{"passed", ok}, {"seed", c.seed}});
  return o;
}

// ---------------------------------------------------------------- lrga-bench

struct BenchArgs {
  std::vector<std::size_t> n_list{1000, 2000, 5000, 10000, 20000};
  std::size_t kappa = 32;
  std::size_t d_in = 32;
  std::size_t reps = 5;
};

template <class F>
double median_seconds(std::size_t reps, F&& f) {
  std::vector<double> times;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return median(times);
}

Outcome cmd_lrga_bench(const BenchArgs& a, const Common& c) {
  if (a.n_list.empty() || a.kappa == 0 || a.d_in == 0 || a.reps == 0) {
    throw UsageError("lrga-bench needs a non-empty --n list and positive sizes");
  }
  for (std::size_t k = 1; k < a.n_list.size(); ++k) {
    if (a.n_list[k] <= a.n_list[k - 1]) throw UsageError("--n must be strictly ascending");
  }
  const LrgaParams params = LrgaParams::random(a.d_in, a.kappa, derive_seed(c.seed, 1));
  Table t{{"n", "kappa", "d_in", "median_seconds", "aux_bytes", "aux_budget_bytes",
           "dense_seconds", "dense_max_rel_diff"},
          {}};
  bool ok = true;
  for (const std::size_t n : a.n_list) {
    const Matrix x = sample_features(n, RandomFeatureConfig::gaussian(a.d_in, 1.0, derive_seed(c.seed, n)));
    const double secs = median_seconds(a.reps, [&] { (void)lrga_forward(x, params); });

    std::size_t aux = 0;
    {
      alloc_probe::Scope scope;
      const Matrix y = lrga_forward(x, params);
      const std::size_t output = static_cast<std::size_t>(y.size()) * sizeof(double);
      aux = scope.peak_delta() > output ? scope.peak_delta() - output : 0;
    }
    const std::size_t budget = 64 * n * a.kappa;
    ok = ok && aux <= budget;

    json dense_secs, dense_diff;
    if (n <= kDenseOracleMaxNodes) {
      dense_secs = median_seconds(a.reps, [&] { (void)dense_attention_oracle(x, params); });
      const Matrix fact = lrga_forward(x, params);
      const Matrix dense = dense_attention_oracle(x, params);
      const double diff =
          (fact - dense).cwiseAbs().maxCoeff() / std::max(1.0, dense.cwiseAbs().maxCoeff());
      dense_diff = diff;
      ok = ok && diff <= 1e-9;
    }
    t.rows.push_back({n, a.kappa, a.d_in, secs, aux, budget, dense_secs, dense_diff});
  }
  Outcome o;
  o.code = ok ? kOk : kViolation;
  o.seeds = {c.seed};
  o.parameters = {{"n", a.n_list}, {"kappa", a.kappa}, {"d_in", a.d_in}, {"reps", a.reps}};
  o.report = render(t, c);
  return o;
}

// ---------------------------------------------------------------- factorize

struct FactorizeArgs {
  std::size_t n = 50;
  std::vector<std::size_t> d_list{100, 1000, 10000};
  std::string dist = "uniform";
  double bound = 2.0;
  double variance = 0.0;  // 0: 1/d
  std::size_t trials = 20;
  double edge_p = 0.5;
};

Outcome cmd_factorize(const FactorizeArgs& a, const Common& c) {
  if (a.n == 0 || a.d_list.empty() || a.trials == 0) {
    throw UsageError("factorize needs n >= 1, a non-empty --d list and trials >= 1");
  }
  if (!(a.edge_p >= 0.0 && a.edge_p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
  const Graph g = random_graph(a.n, a.edge_p, derive_seed(c.seed, 0xFFFF'FFFFULL));
  Table t{{"n", "d", "seed", "gram_dev", "adj_dev"}, {}};
  json per_d = json::array();
  std::vector<double> medians;
  for (const std::size_t d : a.d_list) {
    std::vector<double> gram, adj;
    std::size_t within = 0;
    for (std::size_t trial = 0; trial < a.trials; ++trial) {
      const std::uint64_t s = derive_seed(c.seed, trial);
      const RandomFeatureConfig cfg =
          a.dist == "uniform"
              ? RandomFeatureConfig::uniform(d, a.bound, derive_seed(s, d))
              : RandomFeatureConfig::gaussian(
                    d, a.variance > 0.0 ? a.variance : 1.0 / static_cast<double>(d),
                    derive_seed(s, d));
      const FactorizationError e =
          factorization_error(g.adjacency(), standardize(sample_features(a.n, cfg), cfg));
      gram.push_back(e.gram_dev);
      adj.push_back(e.adj_dev);
      if (e.gram_dev <= 0.1) ++within;
      t.rows.push_back({a.n, d, s, e.gram_dev, e.adj_dev});
    }
    medians.push_back(median(gram));
    per_d.push_back({{"d", d},
                     {"median_gram_dev", medians.back()},
                     {"median_adj_dev", median(adj)},
                     {"trials_gram_dev_le_0.1", within}});
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < medians.size(); ++k) decreasing = decreasing && medians[k] < medians[k - 1];

  Outcome o;
  o.code = decreasing ? kOk : kViolation;
  o.seeds = {c.seed};
  o.parameters = {{"n", a.n},         {"d", a.d_list},   {"dist", a.dist},
                  {"bound", a.bound}, {"variance", a.variance > 0.0 ? json(a.variance) : json("1/d")},
                  {"trials", a.trials}, {"p", a.edge_p}, {"standardized", true}};
  o.summary = {{"per_d", per_d}, {"median_gram_dev_decreasing", decreasing}};
  o.report = render(t, c, {{"summary", o.summary}});
  return o;
}

// ---------------------------------------------------------------- learn

struct LearnArgs {
  std::vector<unsigned> delta;
  std::vector<std::size_t> m_grid{50, 200, 1000};
  std::size_t seeds = 10;
  std::size_t width = 512;
  double lr = 0.005;
  std::size_t steps = 2000;
  std::size_t batch = 0;
  double init_scale = 1.0;
  bool no_append_one = false;
};

Outcome cmd_learn(const LearnArgs& a, const Common& c) {
  if (a.seeds == 0 || a.m_grid.empty()) throw UsageError("learn needs seeds >= 1 and an m grid");
  const MonomialTask task{MultiIndex(a.delta), !a.no_append_one};
  TrainConfig cfg;
  cfg.learning_rate = a.lr;
  cfg.steps = a.steps;
  if (a.batch > 0) cfg.batch = a.batch;
  cfg.curve_stride = std::max<std::size_t>(1, a.steps / 20);
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < a.seeds; ++k) seeds.push_back(c.seed + k);

  Outcome o;
  o.seeds = seeds;
  o.parameters = {{"delta", a.delta},   {"m_grid", a.m_grid}, {"width", a.width},
                  {"learning_rate", a.lr}, {"steps", a.steps}, {"batch", a.batch ? json(a.batch) : json("full")},
                  {"init_scale", a.init_scale}, {"init_scheme", kMlpInitScheme},
                  {"append_one", task.append_one}, {"lr_schedule", "constant"}};

  if (a.steps == 0) {
    Table t{{"m", "median_initial_train_mse", "median_test_mse"}, {}};
    for (const std::size_t m : a.m_grid) {
      std::vector<double> init, test;
      for (const auto s : seeds) {
        TrainConfig one = cfg;
        one.seed = s;
        const TrainResult r = train_monomial(task, m, a.width, one, a.init_scale);
        init.push_back(r.initial_train_mse);
        test.push_back(r.test_mse);
      }
      t.rows.push_back({m, median(init), median(test)});
    }
    o.summary = {{"initial_loss_only", true}};
    o.report = render(t, c, {{"summary", o.summary}});
    return o;
  }

  const ComplexityTable table =
      sample_complexity_experiment(task, a.m_grid, seeds, a.width, cfg, a.init_scale);
  Table t{{"m", "median_test_mse", "median_train_mse", "diverged", "bound"}, {}};
  for (const auto& r : table.rows) {
    t.rows.push_back({r.m, r.median_test_mse, r.median_train_mse, r.diverged, r.bound});
  }
  o.code = table.monotone ? kOk : kViolation;
  o.summary = {{"inversions", table.inversions}, {"monotone", table.monotone},
               {"per_seed_test_mse", table.per_seed}};
  o.report = render(t, c, {{"summary", o.summary}});
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-rank global attention and Weisfeiler-Lehman toolkit", "lrga"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "base seed");
    sub->add_option("--out", common.out, "report path (default: stdout or $LRGA_OUT_DIR)");
    sub->add_option("--format", common.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  IsoArgs iso_args;
  auto* iso = app.add_subcommand("iso", "pairwise isomorphism screening of graph6 files");
  iso->add_option("files", iso_args.files, "graph6 files")->required();
  iso->add_option("--algorithm", iso_args.algorithm, "wl1 or fwl2")
      ->check(CLI::IsMember({"wl1", "fwl2"}));

  KernelArgs kernel_args;
  auto* kernel = app.add_subcommand("kernel-check", "kernel, lemma and matrix-form identity suite");
  kernel->add_option("--cases", kernel_args.cfg.kernel_cases, "kernel identity cases");
  kernel->add_option("--max-degree", kernel_args.cfg.kernel_max_degree, "max |beta|");
  kernel->add_option("--max-block-dim", kernel_args.cfg.kernel_max_block_dim, "max block width");
  kernel->add_option("--lemma-points", kernel_args.cfg.lemma_points, "points per monomial");
  kernel->add_option("--graph-cases", kernel_args.cfg.graph_cases, "random graphs per suite");
  kernel->add_option("--max-nodes", kernel_args.cfg.graph_max_nodes, "largest random graph");
  kernel->add_option("--head-degree", kernel_args.cfg.head_degree, "2-FWL head degree bound");
  kernel->add_flag("--perturb", kernel_args.perturb, "offset computed values (negative control)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("lrga-bench", "LRGA forward timings and auxiliary memory");
  bench->add_option("--n", bench_args.n_list, "ascending node counts")->delimiter(',');
  bench->add_option("--kappa", bench_args.kappa, "attention rank");
  bench->add_option("--d-in", bench_args.d_in, "input width");
  bench->add_option("--reps", bench_args.reps, "repetitions per n (median)");

  FactorizeArgs fact_args;
  auto* fact = app.add_subcommand("factorize", "random-feature Gram concentration sweep");
  fact->add_option("--n", fact_args.n, "nodes");
  fact->add_option("--d", fact_args.d_list, "feature dimensions")->delimiter(',');
  fact->add_option("--dist", fact_args.dist, "uniform or gaussian")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  fact->add_option("--bound", fact_args.bound, "uniform support width M");
  fact->add_option("--variance", fact_args.variance, "gaussian variance (default 1/d)");
  fact->add_option("--trials", fact_args.trials, "trials per d");
  fact->add_option("--p", fact_args.edge_p, "edge probability of the random graph");

  LearnArgs learn_args;
  auto* learn = app.add_subcommand("learn", "monomial learnability sweep");
  learn->add_option("--delta", learn_args.delta, "monomial exponents, e.g. 2 or 1,1")
      ->delimiter(',')
      ->required();
  learn->add_option("--m-grid", learn_args.m_grid, "ascending sample sizes")->delimiter(',');
  learn->add_option("--seeds", learn_args.seeds, "seeds per m (seed, seed+1, ...)");
  learn->add_option("--width", learn_args.width, "hidden width h");
  learn->add_option("--lr", learn_args.lr, "learning rate");
  learn->add_option("--steps", learn_args.steps, "gradient steps (0: initial loss only)");
  learn->add_option("--batch", learn_args.batch, "minibatch size (0: full batch)");
  learn->add_option("--init-scale", learn_args.init_scale, "first-layer init scale");
  learn->add_flag("--no-append-one", learn_args.no_append_one, "omit the constant input");

  const std::vector<std::pair<CLI::App*, std::string>> subs{
      {iso, "json"}, {kernel, "json"}, {bench, "csv"}, {fact, "csv"}, {learn, "csv"}};
  for (const auto& sub : subs) add_common(sub.first);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lrga: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  if (chosen->count("--format") == 0) {
    for (const auto& [sub, fmt] : subs) {
      if (sub == chosen) common.format = fmt;
    }
  }

  const auto t0 = Clock::now();
  try {
    Outcome o;
    if (chosen == iso) {
      o = cmd_iso(iso_args, common);
    } else if (chosen == kernel) {
      o = cmd_kernel_check(kernel_args, common);
    } else if (chosen == bench) {
      o = cmd_lrga_bench(bench_args, common);
    } else if (chosen == fact) {
      o = cmd_factorize(fact_args, common);
    } else {
      o = cmd_learn(learn_args, common);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return publish(command, common, o, secs, out, err);
  } catch (const UsageError& e) {
    err << "lrga " << command << ": " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "lrga " << command << ": invalid input: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "lrga " << command << ": " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace lrga::cli
