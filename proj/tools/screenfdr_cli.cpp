// Copyright 2026 The screenfdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "screenfdr.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure : std::runtime_error {
  sfdr_status status;
  RuntimeFailure(sfdr_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(sfdr_status s, const std::string& what) {
  if (s != SFDR_OK) throw RuntimeFailure(s, what + ": " + sfdr_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Matrix = std::unique_ptr<sfdr_matrix, Deleter<sfdr_matrix, sfdr_matrix_free>>;
using Models = std::unique_ptr<sfdr_models, Deleter<sfdr_models, sfdr_models_free>>;
using Clustering = std::unique_ptr<sfdr_clustering, Deleter<sfdr_clustering, sfdr_clustering_free>>;
using Table = std::unique_ptr<sfdr_fdr_table, Deleter<sfdr_fdr_table, sfdr_fdr_table_free>>;
using Baseline = std::unique_ptr<sfdr_baseline, Deleter<sfdr_baseline, sfdr_baseline_free>>;
using Sim = std::unique_ptr<sfdr_sim, Deleter<sfdr_sim, sfdr_sim_free>>;
using Truth = std::unique_ptr<sfdr_truth, Deleter<sfdr_truth, sfdr_truth_free>>;

// Owns a string returned by the library.
std::string take_string(char* s) {
  std::string out = s ? s : "";
  sfdr_string_free(s);
  return out;
}

struct KRange {
  int lo = 0;
  int hi = 0;
};

KRange parse_k(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || v < 1) {
      throw CLI::ValidationError("--k", "expected a positive integer or a range like 2..5, got '" + text + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  KRange k;
  if (dots == std::string::npos) {
    k.lo = k.hi = to_int(text);
  } else {
    k.lo = to_int(text.substr(0, dots));
    k.hi = to_int(text.substr(dots + 2));
  }
  if (k.hi < k.lo) throw CLI::ValidationError("--k", "range '" + text + "' is empty");
  return k;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure(SFDR_ERR_IO, "cannot write '" + path + "'");
  out << text;
  if (!out) throw RuntimeFailure(SFDR_ERR_IO, "failed writing '" + path + "'");
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects everything needed for the run manifest written next to each output.
class Run {
 public:
  Run(std::string subcommand, std::vector<std::string> argv)
      : subcommand_(std::move(subcommand)), argv_(std::move(argv)),
        start_(std::chrono::steady_clock::now()), started_utc_(utc_now()) {}

  void set_config(Json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed, bool generated) {
    seed_ = seed;
    seed_generated_ = generated;
  }
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void note(const std::string& key, Json value) { extra_[key] = std::move(value); }

  void write_manifests(unsigned threads) const {
    Json m;
    m["tool"] = "screenfdr";
    m["version"] = sfdr_version();
    m["subcommand"] = subcommand_;
    m["argv"] = argv_;
    m["config"] = config_;
    if (seed_) {
      m["seed"] = *seed_;
      m["seed_source"] = seed_generated_ ? "generated" : "explicit";
    }
    m["threads"] = threads;
    m["outputs"] = outputs_;
    for (const auto& [k, v] : extra_.items()) m[k] = v;
    m["started_utc"] = started_utc_;
    m["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::string text = m.dump(2) + "\n";
    for (const auto& out : outputs_) write_text(out + ".manifest.json", text);
  }

 private:
  std::string subcommand_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  std::string started_utc_;
  Json config_ = Json::object();
  Json extra_ = Json::object();
  std::optional<std::uint64_t> seed_;
  bool seed_generated_ = false;
  std::vector<std::string> outputs_;
};

// Every option's effective value, for the manifest.
Json options_json(const CLI::App* app) {
  Json j = Json::object();
  for (const CLI::Option* o : app->get_options()) {
    const std::string name = o->get_single_name();
    if (name.empty() || name == "help") continue;
    if (o->count() > 0) {
      const auto& r = o->results();
      j[name] = r.size() == 1 ? Json(r.front()) : Json(r);
    } else if (!o->get_default_str().empty()) {
      j[name] = o->get_default_str();
    } else if (o->get_type_size_max() == 0) {
      j[name] = false;
    }
  }
  return j;
}

// ---- shared option groups ---------------------------------------------------

struct InputArgs {
  std::string input;
  std::string scale = "pvalue";
  std::string tail = "one_sided";
  CLI::Option* tail_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--input,-i", input, "Gene x study matrix (TSV)")->required();
    app->add_option("--scale", scale, "Input scale")
        ->check(CLI::IsMember({"pvalue", "zscore"}))
        ->capture_default_str();
    tail_opt = app->add_option("--tail", tail, "p-value to z-score convention (p-value input only)")
                   ->check(CLI::IsMember({"one_sided", "two_sided_abs"}))
                   ->capture_default_str();
  }

  void validate() const {
    if (scale == "zscore" && tail_opt->count() > 0) {
      throw CLI::ValidationError("--tail", "--tail only applies to p-value input, not --scale zscore");
    }
  }

  sfdr_scale scale_enum() const { return scale == "zscore" ? SFDR_SCALE_ZSCORE : SFDR_SCALE_PVALUE; }
  sfdr_tail tail_enum() const {
    return tail == "two_sided_abs" ? SFDR_TAIL_TWO_SIDED_ABS : SFDR_TAIL_ONE_SIDED;
  }

  Matrix load_raw() const {
    sfdr_matrix* m = nullptr;
    check(sfdr_matrix_load(input.c_str(), scale_enum(), &m), "loading '" + input + "'");
    return Matrix(m);
  }

  Matrix load_z() const {
    Matrix raw = load_raw();
    if (scale == "zscore") return raw;
    sfdr_matrix* z = nullptr;
    check(sfdr_matrix_to_zscores(raw.get(), tail_enum(), &z), "converting p-values to z-scores");
    return Matrix(z);
  }
};

struct FitArgs {
  std::string null_mode = "theoretical";
  int max_iter = 1000;
  double tol = 1e-8;

  void add(CLI::App* app) {
    sfdr_normix_options d;
    sfdr_normix_options_default(&d);
    max_iter = d.max_iter;
    tol = d.rel_tol;
    app->add_option("--null-mode", null_mode, "Null density of the two-groups fit")
        ->check(CLI::IsMember({"theoretical", "empirical"}))
        ->capture_default_str();
    app->add_option("--fit-max-iter", max_iter, "Two-groups EM iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--fit-tol", tol, "Two-groups EM relative tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  Models fit(const sfdr_matrix* z) const {
    sfdr_normix_options o;
    sfdr_normix_options_default(&o);
    o.null_mode = null_mode == "empirical" ? SFDR_NULL_EMPIRICAL : SFDR_NULL_THEORETICAL;
    o.max_iter = max_iter;
    o.rel_tol = tol;
    sfdr_models* m = nullptr;
    check(sfdr_models_fit(z, &o, &m), "fitting two-groups models");
    return Models(m);
  }
};

// Loads --models when given, otherwise fits them on z.
struct ModelArgs {
  std::string path;
  FitArgs fit;

  void add(CLI::App* app) {
    app->add_option("--models", path, "Fitted models JSON (fitted on the fly when absent)");
    fit.add(app);
  }

  Models get(const sfdr_matrix* z) const {
    if (path.empty()) return fit.fit(z);
    sfdr_models* m = nullptr;
    check(sfdr_models_load(path.c_str(), &m), "loading models '" + path + "'");
    return Models(m);
  }
};

struct SeedArg {
  std::uint64_t value = 0;
  CLI::Option* opt = nullptr;

  void add(CLI::App* app) {
    opt = app->add_option("--seed", value, "Random seed (generated and recorded when absent)");
  }

  std::uint64_t resolve(Run& run) {
    const bool generated = opt->count() == 0;
    if (generated) {
      std::random_device rd;
      value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    run.set_seed(value, generated);
    return value;
  }
};

struct ClusterArgs {
  int bootstrap = 100;
  double threshold = 0.1;
  int restarts = 10;

  void add(CLI::App* app) {
    sfdr_cluster_options d;
    sfdr_cluster_options_default(&d);
    bootstrap = d.bootstrap;
    threshold = d.edge_threshold;
    restarts = d.restarts;
    app->add_option("--bootstrap", bootstrap, "Bootstrap replicates per study pair")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--threshold", threshold, "Correlation edge threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--restarts", restarts, "Community-detection restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  sfdr_cluster_options options(std::uint64_t seed) const {
    sfdr_cluster_options o;
    sfdr_cluster_options_default(&o);
    o.bootstrap = bootstrap;
    o.edge_threshold = threshold;
    o.restarts = restarts;
    o.seed = seed;
    return o;
  }
};

struct EmArgs {
  std::size_t nh = 512;
  bool order_by_power = false;
  int max_iter = 500;
  double tol = 1e-8;

  void add(CLI::App* app) {
    sfdr_screen_options d;
    sfdr_screen_options_default(&d);
    nh = d.n_h;
    max_iter = d.em_max_iter;
    tol = d.em_rel_tol;
    app->add_option("--nh", nh, "Configuration capacity of the restricted EM (power of two)")
        ->capture_default_str();
    app->add_flag("--order-by-power", order_by_power,
                  "Absorb studies by decreasing estimated power");
    app->add_option("--em-max-iter", max_iter, "Configuration EM iteration cap")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--em-tol", tol, "Configuration EM relative tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  void apply(sfdr_screen_options& o) const {
    o.n_h = nh;
    o.order_by_power = order_by_power ? 1 : 0;
    o.em_max_iter = max_iter;
    o.em_rel_tol = tol;
  }
};

// Optional gene list at a single k, for the evaluate subcommand.
struct SelectArgs {
  std::string path;
  int k = 0;

  void add(CLI::App* app) {
    app->add_option("--selected", path, "Write genes selected at --select-k to this file");
    app->add_option("--select-k", k, "k used for --selected (default: largest k)")
        ->check(CLI::PositiveNumber);
  }
};

void save_table(const sfdr_fdr_table* t, const std::string& path, Run& run) {
  check(sfdr_fdr_table_save(t, path.c_str()), "writing '" + path + "'");
  run.add_output(path);
}

void save_selection(const sfdr_fdr_table* t, const SelectArgs& sel, double cutoff, KRange k,
                    Run& run) {
  if (sel.path.empty()) return;
  const int kk = sel.k > 0 ? sel.k : k.hi;
  if (kk < k.lo || kk > k.hi) {
    throw CLI::ValidationError("--select-k", "must lie inside the --k range");
  }
  std::size_t count = 0;
  check(sfdr_fdr_table_select(t, kk, cutoff, nullptr, 0, &count), "selecting genes");
  std::vector<std::size_t> idx(count);
  check(sfdr_fdr_table_select(t, kk, cutoff, idx.data(), idx.size(), &count), "selecting genes");
  std::string text;
  for (std::size_t i : idx) {
    text += sfdr_fdr_table_gene_id(t, i);
    text += '\n';
  }
  write_text(sel.path, text);
  run.add_output(sel.path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure(SFDR_ERR_IO, "cannot open '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || std::isspace(static_cast<unsigned char>(line.back())))) {
      line.pop_back();
    }
    if (!line.empty() && line.front() != '#') out.push_back(line);
  }
  return out;
}

std::string upper_env(const std::string& name) {
  std::string s = "SCREENFDR_";
  for (char c : name) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void attach_env(CLI::App* app) {
  for (CLI::Option* o : app->get_options()) {
    const std::string name = o->get_single_name();
    if (name.empty() || name == "help" || name == "version") continue;
    // --m and --M would otherwise share SCREENFDR_M.
    o->envname(name == "M" ? std::string("SCREENFDR_BLOCKS") : upper_env(name));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"screenfdr: replicability analysis across many studies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sfdr_version()));
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->envname("SCREENFDR_THREADS");

  std::vector<std::string> args(argv, argv + argc);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit per-study two-groups models");
  InputArgs fit_in;
  FitArgs fit_args;
  std::string fit_out = "models.json";
  fit_in.add(fit);
  fit_args.add(fit);
  fit->add_option("--out,-o", fit_out, "Models JSON")->capture_default_str();

  // screen
  auto* scr = app.add_subcommand("screen", "SCREEN: cluster studies, restricted EM, merge");
  InputArgs scr_in;
  ModelArgs scr_models;
  ClusterArgs scr_cluster;
  EmArgs scr_em;
  SeedArg scr_seed;
  SelectArgs scr_sel;
  std::string scr_k, scr_clusters, scr_out = "fdr.tsv", scr_report = "report.json";
  double scr_cutoff = 0.2;
  scr_in.add(scr);
  scr->add_option("--k", scr_k, "k or inclusive range a..b")->required();
  scr_models.add(scr);
  scr->add_option("--clusters", scr_clusters, "Use this clustering JSON instead of estimating one");
  scr_cluster.add(scr);
  scr_em.add(scr);
  scr_seed.add(scr);
  scr->add_option("--cutoff", scr_cutoff, "fdr selection cutoff")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  scr->add_option("--out,-o", scr_out, "fdr table (TSV)")->capture_default_str();
  scr->add_option("--report", scr_report, "Run report JSON")->capture_default_str();
  scr_sel.add(scr);

  // screen-ind
  auto* ind = app.add_subcommand("screen-ind", "fdr_k under study independence");
  InputArgs ind_in;
  ModelArgs ind_models;
  SelectArgs ind_sel;
  std::string ind_k, ind_out = "fdr.tsv";
  double ind_cutoff = 0.2;
  ind_in.add(ind);
  ind->add_option("--k", ind_k, "k or inclusive range a..b")->required();
  ind_models.add(ind);
  ind->add_option("--cutoff", ind_cutoff, "fdr selection cutoff")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ind->add_option("--out,-o", ind_out, "fdr table (TSV)")->capture_default_str();
  ind_sel.add(ind);

  // repfdr-ub
  auto* ub = app.add_subcommand("repfdr-ub", "Upper bound on fdr_k from one restricted EM");
  InputArgs ub_in;
  ModelArgs ub_models;
  EmArgs ub_em;
  SelectArgs ub_sel;
  std::string ub_k, ub_out = "fdr_ub.tsv", ub_report;
  double ub_cutoff = 0.2;
  ub_in.add(ub);
  ub->add_option("--k", ub_k, "k or inclusive range a..b")->required();
  ub_models.add(ub);
  ub_em.add(ub);
  ub->add_option("--cutoff", ub_cutoff, "fdr selection cutoff")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ub->add_option("--out,-o", ub_out, "Bound table (TSV)")->capture_default_str();
  ub->add_option("--report", ub_report, "Report JSON with the configuration state");
  ub_sel.add(ub);

  // baselines
  auto* base = app.add_subcommand("baselines", "Fisher, BH-count or Exp-count");
  InputArgs base_in;
  ModelArgs base_models;
  std::string base_method, base_out = "baseline.tsv";
  double base_level = 0.0;
  base_in.add(base);
  base->add_option("--method", base_method, "Baseline method")
      ->required()
      ->check(CLI::IsMember({"fisher", "bh-count", "exp-count"}));
  base->add_option("--level", base_level, "q-value level (default 0.1)")->check(CLI::Range(0.0, 1.0));
  base_models.add(base);
  base->add_option("--out,-o", base_out, "Result table (TSV)")->capture_default_str();

  // cluster
  auto* clu = app.add_subcommand("cluster", "Estimate study correlations and clusters");
  InputArgs clu_in;
  ModelArgs clu_models;
  ClusterArgs clu_args;
  SeedArg clu_seed;
  std::string clu_out = "clusters.json";
  clu_in.add(clu);
  clu_models.add(clu);
  clu_args.add(clu);
  clu_seed.add(clu);
  clu->add_option("--out,-o", clu_out, "Clustering JSON")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a benchmark instance with ground truth");
  std::string sim_scenario, sim_out_p = "P.tsv", sim_out_truth = "H.tsv";
  std::size_t sim_n = 5000, sim_m = 20, sim_clusters = 1;
  double sim_x = 0.0, sim_r = 0.8;
  SeedArg sim_seed;
  sim->add_option("--scenario", sim_scenario, "s1, s2 or dense")
      ->required()
      ->check(CLI::IsMember({"s1", "s2", "dense"}));
  sim->add_option("--n", sim_n, "Genes")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--m", sim_m, "Studies (dense: fixed at 30)")->check(CLI::PositiveNumber)->capture_default_str();
  auto* sim_x_opt = sim->add_option("--x", sim_x, "Beta shape of non-null p-values (s1: 1000, s2: 100)")
                        ->check(CLI::PositiveNumber);
  sim->add_option("--M", sim_clusters, "Study blocks (s2)")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--r", sim_r, "Within-block correlation")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sim_seed.add(sim);
  sim->add_option("--out-p", sim_out_p, "Simulated statistics (TSV)")->capture_default_str();
  sim->add_option("--out-truth", sim_out_truth, "Truth matrix (TSV)")->capture_default_str();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a gene selection against the truth");
  std::string ev_selected, ev_truth, ev_out;
  int ev_k = 0;
  ev->add_option("--selected", ev_selected, "Selected gene ids, one per line")->required();
  ev->add_option("--truth", ev_truth, "Truth matrix from simulate")->required();
  ev->add_option("--k", ev_k, "Replicability level")->required()->check(CLI::PositiveNumber);
  ev->add_option("--out,-o", ev_out, "Write the score JSON here as well as to stdout");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the simulation benchmark over several seeds");
  std::string bench_scenario, bench_methods, bench_k = "2..5", bench_out = "scores.csv";
  std::string bench_null = "theoretical";
  std::size_t bench_n = 5000, bench_m = 20, bench_clusters = 1, bench_seeds = 10, bench_nh = 512;
  double bench_x = 0.0, bench_r = 0.8, bench_cutoff = 0.2, bench_threshold = 0.1;
  int bench_bootstrap = 100;
  std::uint64_t bench_seed0 = 1;
  bench->add_option("--scenario", bench_scenario, "s1, s2 or dense")
      ->required()
      ->check(CLI::IsMember({"s1", "s2", "dense"}));
  bench->add_option("--n", bench_n, "Genes")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--m", bench_m, "Studies")->check(CLI::PositiveNumber)->capture_default_str();
  auto* bench_x_opt = bench->add_option("--x", bench_x, "Beta shape (s1: 1000, s2: 100)")->check(CLI::PositiveNumber);
  bench->add_option("--M", bench_clusters, "Study blocks (s2)")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--r", bench_r, "Within-block correlation")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench->add_option("--seeds", bench_seeds, "Number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--seed", bench_seed0, "First seed; runs use seed, seed+1, ...")->capture_default_str();
  bench->add_option("--methods", bench_methods, "Comma-separated subset (default: all six)");
  bench->add_option("--k", bench_k, "k or inclusive range a..b")->capture_default_str();
  bench->add_option("--cutoff", bench_cutoff, "fdr selection cutoff")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench->add_option("--nh", bench_nh, "Configuration capacity")->capture_default_str();
  bench->add_option("--bootstrap", bench_bootstrap, "Bootstrap replicates")->check(CLI::NonNegativeNumber)->capture_default_str();
  bench->add_option("--threshold", bench_threshold, "Correlation edge threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench->add_option("--null-mode", bench_null, "Null density of the two-groups fit")
      ->check(CLI::IsMember({"theoretical", "empirical"}))
      ->capture_default_str();
  bench->add_option("--out,-o", bench_out, "Scores CSV")->capture_default_str();

  for (CLI::App* sub : app.get_subcommands({})) attach_env(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : (code == 0 ? kExitOk : kExitUsage);
  }

  CLI::App* active = app.get_subcommands().front();
  Run run(active->get_name(), args);
  sfdr_set_threads(threads);
  const unsigned effective_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());

  try {
    if (active == fit) {
      fit_in.validate();
      run.set_config(options_json(fit));
      Matrix z = fit_in.load_z();
      Models models = fit_args.fit(z.get());
      check(sfdr_models_save(models.get(), fit_out.c_str()), "writing '" + fit_out + "'");
      run.add_output(fit_out);
    } else if (active == scr) {
      scr_in.validate();
      const KRange k = parse_k(scr_k);
      run.set_config(options_json(scr));
      const std::uint64_t seed = scr_seed.resolve(run);
      Matrix z = scr_in.load_z();
      Models models = scr_models.get(z.get());
      Clustering given;
      if (!scr_clusters.empty()) {
        sfdr_clustering* c = nullptr;
        check(sfdr_clustering_load(scr_clusters.c_str(), &c), "loading clusters '" + scr_clusters + "'");
        given.reset(c);
      }
      sfdr_screen_options o;
      sfdr_screen_options_default(&o);
      o.k_min = k.lo;
      o.k_max = k.hi;
      o.cutoff = scr_cutoff;
      scr_em.apply(o);
      o.cluster = scr_cluster.options(seed);
      sfdr_fdr_table* t = nullptr;
      char* report = nullptr;
      check(sfdr_screen(z.get(), models.get(), given.get(), &o, &t, &report), "screen");
      Table table(t);
      std::string text = take_string(report);
      save_table(table.get(), scr_out, run);
      if (!scr_report.empty()) {
        Json rep = Json::parse(text);
        rep["manifest"] = scr_out + ".manifest.json";
        write_text(scr_report, rep.dump(2) + "\n");
        run.add_output(scr_report);
      }
      save_selection(table.get(), scr_sel, scr_cutoff, k, run);
    } else if (active == ind) {
      ind_in.validate();
      const KRange k = parse_k(ind_k);
      run.set_config(options_json(ind));
      Matrix z = ind_in.load_z();
      Models models = ind_models.get(z.get());
      sfdr_fdr_table* t = nullptr;
      check(sfdr_screen_ind(z.get(), models.get(), k.lo, k.hi, &t), "screen-ind");
      Table table(t);
      save_table(table.get(), ind_out, run);
      save_selection(table.get(), ind_sel, ind_cutoff, k, run);
    } else if (active == ub) {
      ub_in.validate();
      const KRange k = parse_k(ub_k);
      run.set_config(options_json(ub));
      Matrix z = ub_in.load_z();
      Models models = ub_models.get(z.get());
      sfdr_screen_options o;
      sfdr_screen_options_default(&o);
      o.k_min = k.lo;
      o.k_max = k.hi;
      o.cutoff = ub_cutoff;
      ub_em.apply(o);
      sfdr_fdr_table* t = nullptr;
      char* report = nullptr;
      check(sfdr_repfdr_ub(z.get(), models.get(), &o, &t, ub_report.empty() ? nullptr : &report),
            "repfdr-ub");
      Table table(t);
      save_table(table.get(), ub_out, run);
      if (!ub_report.empty()) {
        Json rep = Json::parse(take_string(report));
        rep["manifest"] = ub_out + ".manifest.json";
        write_text(ub_report, rep.dump(2) + "\n");
        run.add_output(ub_report);
      }
      save_selection(table.get(), ub_sel, ub_cutoff, k, run);
    } else if (active == base) {
      base_in.validate();
      run.set_config(options_json(base));
      sfdr_baseline_method method = SFDR_BASELINE_FISHER;
      if (base_method == "bh-count") method = SFDR_BASELINE_BH_COUNT;
      if (base_method == "exp-count") method = SFDR_BASELINE_EXP_COUNT;
      Matrix data;
      Models models;
      if (method == SFDR_BASELINE_EXP_COUNT) {
        data = base_in.load_z();
        models = base_models.get(data.get());
      } else {
        data = base_in.load_raw();
        if (base_in.scale == "zscore") {
          sfdr_matrix* p = nullptr;
          check(sfdr_matrix_to_pvalues(data.get(), SFDR_TAIL_TWO_SIDED_ABS, &p), "converting z-scores");
          data.reset(p);
          run.note("zscore_to_pvalue", "two_sided_abs");
        }
      }
      sfdr_baseline* b = nullptr;
      check(sfdr_baseline_run(data.get(), models.get(), method, base_level, &b), base_method);
      Baseline result(b);
      check(sfdr_baseline_save(result.get(), base_out.c_str()), "writing '" + base_out + "'");
      run.add_output(base_out);
    } else if (active == clu) {
      clu_in.validate();
      run.set_config(options_json(clu));
      const std::uint64_t seed = clu_seed.resolve(run);
      Matrix z = clu_in.load_z();
      Models models = clu_models.get(z.get());
      const sfdr_cluster_options o = clu_args.options(seed);
      sfdr_clustering* c = nullptr;
      check(sfdr_cluster_studies(z.get(), models.get(), &o, &c), "clustering studies");
      Clustering clustering(c);
      check(sfdr_clustering_save(clustering.get(), clu_out.c_str()), "writing '" + clu_out + "'");
      run.add_output(clu_out);
    } else if (active == sim) {
      run.set_config(options_json(sim));
      sfdr_sim_options o;
      sfdr_sim_options_default(&o);
      o.scenario = sim_scenario.c_str();
      o.n = sim_n;
      o.m = sim_m;
      o.x = sim_x_opt->count() ? sim_x : (sim_scenario == "s2" ? 100.0 : 1000.0);
      o.clusters = sim_clusters;
      o.r = sim_r;
      o.seed = sim_seed.resolve(run);
      sfdr_sim* s = nullptr;
      check(sfdr_simulate(&o, &s), "simulate");
      Sim instance(s);
      sfdr_matrix* d = nullptr;
      check(sfdr_sim_data(instance.get(), &d), "simulate");
      Matrix data(d);
      check(sfdr_matrix_save(data.get(), sim_out_p.c_str()), "writing '" + sim_out_p + "'");
      run.add_output(sim_out_p);
      check(sfdr_sim_save_truth(instance.get(), sim_out_truth.c_str()), "writing '" + sim_out_truth + "'");
      run.add_output(sim_out_truth);
      run.note("x", o.x);
    } else if (active == ev) {
      run.set_config(options_json(ev));
      sfdr_truth* tr = nullptr;
      check(sfdr_truth_load(ev_truth.c_str(), &tr), "loading truth '" + ev_truth + "'");
      Truth truth(tr);
      const auto genes = read_lines(ev_selected);
      std::vector<const char*> ptrs;
      for (const auto& g : genes) ptrs.push_back(g.c_str());
      sfdr_eval_score score{};
      check(sfdr_truth_evaluate(truth.get(), ptrs.data(), ptrs.size(), ev_k, &score), "evaluate");
      Json j;
      j["k"] = score.k;
      j["jaccard"] = score.jaccard;
      j["fdp"] = score.fdp;
      j["n_selected"] = score.n_selected;
      std::cout << j.dump() << '\n';
      if (!ev_out.empty()) {
        write_text(ev_out, j.dump(2) + "\n");
        run.add_output(ev_out);
      }
    } else if (active == bench) {
      const KRange k = parse_k(bench_k);
      run.set_config(options_json(bench));
      sfdr_bench_options o;
      sfdr_bench_options_default(&o);
      o.sim.scenario = bench_scenario.c_str();
      o.sim.n = bench_n;
      o.sim.m = bench_m;
      o.sim.x = bench_x_opt->count() ? bench_x : (bench_scenario == "s2" ? 100.0 : 1000.0);
      o.sim.clusters = bench_clusters;
      o.sim.r = bench_r;
      std::vector<std::uint64_t> seeds(bench_seeds);
      for (std::size_t i = 0; i < bench_seeds; ++i) seeds[i] = bench_seed0 + i;
      o.seeds = seeds.data();
      o.n_seeds = seeds.size();
      o.methods = bench_methods.empty() ? nullptr : bench_methods.c_str();
      o.k_min = k.lo;
      o.k_max = k.hi;
      o.cutoff = bench_cutoff;
      o.n_h = bench_nh;
      o.bootstrap = bench_bootstrap;
      o.edge_threshold = bench_threshold;
      o.null_mode = bench_null == "empirical" ? SFDR_NULL_EMPIRICAL : SFDR_NULL_THEORETICAL;
      run.set_seed(bench_seed0, false);
      run.note("seeds", seeds);
      char* csv = nullptr;
      check(sfdr_bench_run(&o, &csv), "bench");
      write_text(bench_out, take_string(csv));
      run.add_output(bench_out);
    }
    run.write_manifests(effective_threads);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << "run '" << argv[0] << " " << active->get_name()
              << " --help' for usage\n";
    return kExitUsage;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error [" << sfdr_status_name(e.status) << "]: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error [SFDR_ERR_INTERNAL]: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
