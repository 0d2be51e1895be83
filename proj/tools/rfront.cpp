// rfront: command-line front end. Each subcommand runs one stage; `run`
// executes the whole pipeline from a key=value configuration.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rfront/citation_graph.hpp"
#include "rfront/corpus.hpp"
#include "rfront/dynamics.hpp"
#include "rfront/kernels.hpp"
#include "rfront/layout.hpp"
#include "rfront/modularity.hpp"
#include "rfront/pipeline.hpp"
#include "rfront/powerlaw.hpp"
#include "rfront/synth.hpp"
#include "rfront/terms.hpp"

namespace {

using namespace rfront;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitStage = 4;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  body(out);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

// Input shared by every stage that starts from records.
struct Source {
  std::string input;
  std::string format = "lines";

  void attach(CLI::App* cmd) {
    cmd->add_option("-i,--input", input, "record file")->required();
    cmd->add_option("-f,--format", format, "tagged or lines")->capture_default_str();
  }
  Corpus load() const { return resolve_citations(read_records_file(input, parse_format(format))); }
};

struct CoreOpts {
  std::size_t k_min = 0;
  void attach(CLI::App* cmd) {
    cmd->add_option("--k_min", k_min, "minimum indegree for the core sub-network")->required();
  }
  CitationGraph build(const CitationGraph& graph) const {
    return extract_core(largest_component(graph).giant, k_min);
  }
};

Partition load_partition(const std::string& path, const UGraph& g) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open partition '" + path + "'");
  return read_partition_csv(in, g);
}

Stopwords load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open stopword file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_stopwords(ss.str());
}

std::vector<SynthFront> parse_fronts(const std::string& text) {
  // size:first-last[,size:first-last...]
  std::vector<SynthFront> fronts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    SynthFront f;
    int size = 0;
    if (std::sscanf(item.c_str(), "%d:%d-%d", &size, &f.first_year, &f.last_year) != 3 || size < 1)
      throw UsageError("bad front '" + item + "', expected size:first-last");
    f.size = static_cast<std::size_t>(size);
    f.theme_terms = default_theme_terms(fronts.size());
    fronts.push_back(std::move(f));
  }
  return fronts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Research-front detection in citation networks"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: runtime default)");

  std::function<void()> action;

  // ingest
  Source ingest_src;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "parse records, resolve citations, write the lines format");
  ingest_src.attach(ingest);
  ingest->add_option("-o,--output", ingest_out, "output record file (default stdout)");
  ingest->callback([&] {
    action = [&] {
      Corpus c = ingest_src.load();
      emit(ingest_out, [&](std::ostream& out) { write_lines(out, c.records); });
      std::cerr << c.records.size() << " records, " << c.links.size() << " links, " << c.unresolved_count
                << " unresolved references\n";
    };
  });

  // stats
  Source stats_src;
  std::string stats_out, stats_hist;
  auto* stats = app.add_subcommand("stats", "corpus and graph statistics");
  stats_src.attach(stats);
  stats->add_option("-o,--output", stats_out, "report file (default stdout)");
  stats->add_option("--histogram", stats_hist, "also write the giant component's indegree histogram CSV");
  stats->callback([&] {
    action = [&] {
      Corpus c = stats_src.load();
      auto g = build_graph(c);
      auto giant = largest_component(g).giant;
      emit(stats_out, [&](std::ostream& out) { write_corpus_stats(out, c, g, giant); });
      if (!stats_hist.empty())
        emit(stats_hist, [&](std::ostream& out) { write_histogram_csv(out, indegree_histogram(giant)); });
    };
  });

  // fit
  Source fit_src;
  std::string fit_out, fit_csv;
  auto* fit = app.add_subcommand("fit", "power-law fit of the giant component's indegree distribution");
  fit_src.attach(fit);
  fit->add_option("-o,--output", fit_out, "fit JSON (default stdout)");
  fit->add_option("--csv", fit_csv, "observed and fitted counts per degree");
  fit->callback([&] {
    action = [&] {
      auto hist = indegree_histogram(largest_component(build_graph(fit_src.load())).giant);
      auto f = fit_power_law(hist);
      emit(fit_out, [&](std::ostream& out) { write_fit_json(out, f); });
      if (!fit_csv.empty()) emit(fit_csv, [&](std::ostream& out) { write_fit_csv(out, hist, f); });
    };
  });

  // core
  Source core_src;
  CoreOpts core_opts;
  std::string core_out, core_fmt = "json";
  auto* core = app.add_subcommand("core", "high-indegree core of the giant component");
  core_src.attach(core);
  core_opts.attach(core);
  core->add_option("-o,--output", core_out, "graph file (default stdout)");
  core->add_option("--graph_format", core_fmt, "graphml, dot or json")->capture_default_str();
  core->callback([&] {
    action = [&] {
      auto fmt = parse_graph_format(core_fmt);
      auto g = core_opts.build(build_graph(core_src.load()));
      emit(core_out, [&](std::ostream& out) { export_graph(out, g, nullptr, nullptr, fmt); });
    };
  });

  // cluster
  Source cl_src;
  CoreOpts cl_core;
  std::size_t cl_min_edges = 100;
  std::string cl_out, cl_json;
  auto* cluster = app.add_subcommand("cluster", "greedy modularity clustering of the core");
  cl_src.attach(cluster);
  cl_core.attach(cluster);
  cluster->add_option("--min_internal_edges", cl_min_edges, "fronts with fewer internal edges become noise")
      ->capture_default_str();
  cluster->add_option("-o,--output", cl_out, "partition CSV (default stdout)");
  cluster->add_option("--json", cl_json, "also write the partition as JSON");
  cluster->callback([&] {
    action = [&] {
      auto g = project_undirected(cl_core.build(build_graph(cl_src.load())));
      if (g.edge_count() == 0) throw std::runtime_error("empty core: no citations among the selected papers");
      auto p = filter_small(g, cluster_cnm(g), cl_min_edges);
      emit(cl_out, [&](std::ostream& out) { write_partition_csv(out, p); });
      if (!cl_json.empty()) emit(cl_json, [&](std::ostream& out) { write_partition_json(out, p); });
      std::cerr << p.fronts.size() << " fronts, Q = " << p.q << ", " << p.noise_count() << " noise nodes\n";
    };
  });

  // subcluster
  Source sub_src;
  CoreOpts sub_core;
  std::string sub_part, sub_front, sub_out;
  auto* subcl = app.add_subcommand("subcluster", "split one front into sub-fronts");
  sub_src.attach(subcl);
  sub_core.attach(subcl);
  subcl->add_option("--partition", sub_part, "partition CSV from `cluster`")->required();
  subcl->add_option("--front", sub_front, "label of the front to split")->required();
  subcl->add_option("-o,--output", sub_out, "sub-front partition CSV (default stdout)");
  subcl->callback([&] {
    action = [&] {
      auto g = project_undirected(sub_core.build(build_graph(sub_src.load())));
      auto p = load_partition(sub_part, g);
      auto s = subcluster(g, p, sub_front);
      emit(sub_out, [&](std::ostream& out) { write_partition_csv(out, s); });
    };
  });

  // quotient
  Source q_src;
  CoreOpts q_core;
  std::string q_part, q_out;
  std::size_t q_min_weight = 500;
  bool q_fallback = true;
  auto* quot = app.add_subcommand("quotient", "front-level graph of summed inter-citations");
  q_src.attach(quot);
  q_core.attach(quot);
  quot->add_option("--partition", q_part, "partition CSV from `cluster`")->required();
  quot->add_option("--min_weight", q_min_weight, "retain edges with at least this many inter-citations")
      ->capture_default_str();
  quot->add_option("--fallback", q_fallback, "keep each front's heaviest edge when none passes min_weight")
      ->capture_default_str();
  quot->add_option("-o,--output", q_out, "quotient JSON (default stdout)");
  quot->callback([&] {
    action = [&] {
      auto core_graph = q_core.build(build_graph(q_src.load()));
      auto p = load_partition(q_part, project_undirected(core_graph));
      auto qg = quotient(core_graph, p, q_min_weight, q_fallback);
      emit(q_out, [&](std::ostream& out) { write_quotient_json(out, qg, p); });
    };
  });

  // dynamics
  Source dyn_src;
  CoreOpts dyn_core;
  std::string dyn_part, dyn_out, dyn_peaks, dyn_periods = "1990-1991,1996-1998,2004-2007";
  auto* dyn = app.add_subcommand("dynamics", "papers per year and peak periods for each front");
  dyn_src.attach(dyn);
  dyn_core.attach(dyn);
  dyn->add_option("--partition", dyn_part, "partition CSV from `cluster`")->required();
  dyn->add_option("--periods", dyn_periods, "peak periods")->capture_default_str();
  dyn->add_option("-o,--output", dyn_out, "year x front CSV (default stdout)");
  dyn->add_option("--peaks", dyn_peaks, "also write the peak report JSON");
  dyn->callback([&] {
    action = [&] {
      auto periods = parse_periods(dyn_periods);
      Corpus c = dyn_src.load();
      auto p = load_partition(dyn_part, project_undirected(dyn_core.build(build_graph(c))));
      auto d = yearly_counts(c, p);
      emit(dyn_out, [&](std::ostream& out) { write_dynamics_csv(out, d, p); });
      if (!dyn_peaks.empty()) emit(dyn_peaks, [&](std::ostream& out) { write_peaks_json(out, d, p, periods); });
    };
  });

  // terms
  Source t_src;
  CoreOpts t_core;
  std::string t_part, t_out, t_json, t_cited, t_stop, t_stat = "llr";
  std::size_t t_top_k = 10, t_top_n = 5;
  auto* terms = app.add_subcommand("terms", "distinctive abstract terms and most cited papers per front");
  t_src.attach(terms);
  t_core.attach(terms);
  terms->add_option("--partition", t_part, "partition CSV from `cluster`")->required();
  terms->add_option("--top_k", t_top_k, "terms per front")->capture_default_str();
  terms->add_option("--top_n", t_top_n, "most cited papers per front")->capture_default_str();
  terms->add_option("--statistic", t_stat, "llr or chi2")->capture_default_str();
  terms->add_option("--stopwords", t_stop, "stopword file replacing the bundled list");
  terms->add_option("-o,--output", t_out, "terms CSV (default stdout)");
  terms->add_option("--json", t_json, "also write the terms as JSON");
  terms->add_option("--top_cited", t_cited, "also write the most cited papers CSV");
  terms->callback([&] {
    action = [&] {
      if (t_stat != "llr" && t_stat != "chi2") throw UsageError("statistic must be llr or chi2");
      Corpus c = t_src.load();
      auto graph = build_graph(c);
      auto giant = largest_component(graph).giant;
      auto p = load_partition(t_part, project_undirected(extract_core(giant, t_core.k_min)));
      Stopwords stop;
      TermOptions opt;
      opt.top_k = t_top_k;
      opt.statistic = t_stat == "chi2" ? TermStatistic::chi2 : TermStatistic::llr;
      if (!t_stop.empty()) {
        stop = load_stopwords(t_stop);
        opt.stopwords = &stop;
      }
      std::vector<int> skipped;
      auto scores = score_terms(c, p, opt, &skipped);
      for (int f : skipped) std::cerr << "warning: front " << f << " has no abstract tokens\n";
      emit(t_out, [&](std::ostream& out) { write_terms_csv(out, scores, p); });
      if (!t_json.empty()) emit(t_json, [&](std::ostream& out) { write_terms_json(out, scores, p); });
      if (!t_cited.empty())
        emit(t_cited, [&](std::ostream& out) { write_top_cited_csv(out, giant, c, p, t_top_n); });
    };
  });

  // layout
  Source l_src;
  CoreOpts l_core;
  std::string l_part, l_out, l_fmt = "graphml";
  LayoutOptions l_opt;
  l_opt.iterations = 300;
  auto* layout = app.add_subcommand("layout", "force-directed layout of the core");
  l_src.attach(layout);
  l_core.attach(layout);
  layout->add_option("--partition", l_part, "partition CSV; adds a front attribute");
  layout->add_option("--seed", l_opt.seed, "layout seed")->capture_default_str();
  layout->add_option("--iterations", l_opt.iterations, "layout iterations")->capture_default_str();
  layout->add_option("--graph_format", l_fmt, "graphml, dot or json")->capture_default_str();
  layout->add_option("-o,--output", l_out, "graph file (default stdout)");
  layout->callback([&] {
    action = [&] {
      auto fmt = parse_graph_format(l_fmt);
      if (l_opt.iterations < 1) throw UsageError("iterations must be at least 1");
      auto g = l_core.build(build_graph(l_src.load()));
      std::optional<Partition> p;
      if (!l_part.empty()) p = load_partition(l_part, project_undirected(g));
      auto lay = layout_force(g, l_opt);
      emit(l_out, [&](std::ostream& out) { export_graph(out, g, &lay, p ? &*p : nullptr, fmt); });
    };
  });

  // synth
  SynthConfig s_cfg = three_front_config();
  std::string s_fronts, s_out, s_truth, s_fmt = "lines";
  auto* synth = app.add_subcommand("synth", "generate a corpus with planted fronts");
  synth->add_option("--fronts", s_fronts, "size:first-last,... (default 300:1985-1992,250:1993-2000,200:2001-2008)");
  synth->add_option("--seed", s_cfg.seed, "generator seed")->capture_default_str();
  synth->add_option("--p_in", s_cfg.p_in, "same-front citation weight")->capture_default_str();
  synth->add_option("--p_out", s_cfg.p_out, "cross-front citation weight")->capture_default_str();
  synth->add_option("--pa_strength", s_cfg.pa_strength, "preferential attachment exponent")->capture_default_str();
  synth->add_option("--refs_per_paper", s_cfg.refs_per_paper, "mean references per paper")->capture_default_str();
  synth->add_option("--theme_fraction", s_cfg.theme_fraction, "share of abstract words drawn from the theme")
      ->capture_default_str();
  synth->add_option("-f,--format", s_fmt, "tagged or lines")->capture_default_str();
  synth->add_option("-o,--output", s_out, "record file (default stdout)");
  synth->add_option("--truth", s_truth, "planted labels CSV");
  synth->callback([&] {
    action = [&] {
      if (!s_fronts.empty()) s_cfg.fronts = parse_fronts(s_fronts);
      const auto fmt = parse_format(s_fmt);
      try {
        validate(s_cfg);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      auto [records, truth] = generate_records(s_cfg);
      emit(s_out, [&](std::ostream& out) {
        if (fmt == RecordFormat::tagged)
          write_tagged(out, records);
        else
          write_lines(out, records);
      });
      if (!s_truth.empty()) emit(s_truth, [&](std::ostream& out) { write_ground_truth_csv(out, truth); });
    };
  });

  // run
  std::string r_config;
  std::map<std::string, std::string> r_flags;
  auto* run = app.add_subcommand("run", "full pipeline; flags override keys from --config");
  run->add_option("-c,--config", r_config, "key=value configuration file");
  for (const auto& [key, desc] : config_keys()) {
    if (key == "threads") continue;  // global --threads
    run->add_option_function<std::string>(
        "--" + key, [&r_flags, k = key](const std::string& v) { r_flags[k] = v; }, desc);
  }
  run->callback([&] {
    action = [&] {
      PipelineConfig cfg;
      try {
        if (!r_config.empty()) cfg = read_config_file(r_config);
        for (const auto& [k, v] : r_flags) set_config_value(cfg, k, v);
        if (app.get_option("--threads")->count()) cfg.threads = threads;
        validate(cfg);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      auto res = run_pipeline(cfg);
      for (const auto& a : res.artifacts) std::cout << a.sha256 << "  " << a.file << '\n';
      std::cout << "manifest: " << res.manifest.string() << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (threads < 0) throw UsageError("--threads must be non-negative");
    set_threads(threads);
    action();
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.data_error() ? kExitData : kExitStage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
}
