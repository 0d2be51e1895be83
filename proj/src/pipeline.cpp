#include "rfront/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "rfront/citation_graph.hpp"
#include "rfront/kernels.hpp"
#include "rfront/layout.hpp"
#include "rfront/modularity.hpp"
#include "rfront/powerlaw.hpp"
#include "rfront/terms.hpp"

namespace rfront {

namespace fs = std::filesystem;

namespace {

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("'" + key + "' needs a non-negative integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "off" || value == "no" || value == "0") return false;
  throw std::invalid_argument("'" + key + "' needs a boolean, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"input", "input record file"},
      {"format", "input format: tagged or lines"},
      {"k_min", "minimum indegree for the core sub-network"},
      {"min_internal_edges", "fronts with fewer internal edges become noise"},
      {"min_weight", "quotient edges need at least this many inter-citations"},
      {"fallback", "keep each front's heaviest quotient edge when none passes min_weight"},
      {"periods", "peak periods, e.g. 1990-1991,1996-1998,2004-2007"},
      {"top_k", "distinctive terms reported per front"},
      {"top_n", "most cited papers reported per front"},
      {"seed", "layout seed"},
      {"iterations", "layout iterations"},
      {"out_dir", "output directory"},
      {"threads", "worker threads (0: runtime default)"},
      {"stopwords", "stopword file replacing the bundled list"},
      {"statistic", "term statistic: llr or chi2"},
  };
  return keys;
}

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "input") cfg.input = value;
  else if (key == "format") cfg.format = value;
  else if (key == "k_min") cfg.k_min = parse_size(key, value);
  else if (key == "min_internal_edges") cfg.min_internal_edges = parse_size(key, value);
  else if (key == "min_weight") cfg.min_weight = parse_size(key, value);
  else if (key == "fallback") cfg.fallback = parse_bool(key, value);
  else if (key == "periods") cfg.periods = value;
  else if (key == "top_k") cfg.top_k = parse_size(key, value);
  else if (key == "top_n") cfg.top_n = parse_size(key, value);
  else if (key == "seed") cfg.seed = parse_size(key, value);
  else if (key == "iterations") cfg.iterations = parse_size(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "threads") cfg.threads = static_cast<int>(parse_size(key, value));
  else if (key == "stopwords") cfg.stopwords = value;
  else if (key == "statistic") cfg.statistic = value;
  else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

PipelineConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key=value");
    set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw std::invalid_argument("no input file given");
  parse_format(cfg.format);
  if (cfg.top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  if (cfg.top_n < 1) throw std::invalid_argument("top_n must be at least 1");
  if (cfg.iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (cfg.statistic != "llr" && cfg.statistic != "chi2")
    throw std::invalid_argument("statistic must be llr or chi2");
  if (cfg.out_dir.empty()) throw std::invalid_argument("no output directory given");
  // peak_summary rejects overlapping periods; check before any stage runs
  auto periods = parse_periods(cfg.periods);
  FrontDynamics none;
  peak_summary(none, periods);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

namespace {

class Bundle {
 public:
  explicit Bundle(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& kind, const std::string& file,
             const std::function<void(std::ostream&)>& body) {
    std::ostringstream ss;
    body(ss);
    const std::string data = ss.str();
    const fs::path path = dir_ / file;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    out << data;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    artifacts_.push_back({kind, file, sha256_hex(data), data.size()});
  }

  void remove_all() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  const std::vector<Artifact>& artifacts() const { return artifacts_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  std::vector<Artifact> artifacts_;
};

}  // namespace

void write_corpus_stats(std::ostream& out, const Corpus& corpus, const CitationGraph& graph,
                        const CitationGraph& giant) {
  const auto& st = corpus.stats;
  out << "records: " << corpus.records.size() << '\n'
      << "records_without_year: "
      << std::count_if(corpus.records.begin(), corpus.records.end(), [](const RawRecord& r) { return !r.year; })
      << '\n'
      << "cited_refs: " << st.total_refs << '\n'
      << "resolved_links: " << corpus.links.size() << '\n'
      << "duplicate_refs: " << st.duplicate << '\n'
      << "self_refs: " << st.self << '\n'
      << "unresolved_refs: " << corpus.unresolved_count << '\n'
      << "  no_key: " << st.no_key << '\n'
      << "  unmatched: " << st.unmatched << '\n'
      << "  ambiguous: " << st.ambiguous << '\n'
      << "[full graph]\n";
  write_stats_report(out, graph_stats(graph));
  out << "[giant component]\n";
  write_stats_report(out, graph_stats(giant));
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  set_threads(cfg.threads);
  const auto periods = parse_periods(cfg.periods);

  Stopwords custom_stop;
  if (!cfg.stopwords.empty()) {
    std::ifstream in(cfg.stopwords);
    if (!in) throw std::invalid_argument("cannot open stopword file '" + cfg.stopwords + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    custom_stop = parse_stopwords(ss.str());
  }

  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StageError("setup", "cannot create '" + dir.string() + "': " + ec.message());

  Bundle bundle(dir);
  std::string stage;
  try {
    stage = "ingest";
    Corpus corpus = resolve_citations(read_records_file(cfg.input, parse_format(cfg.format)));

    stage = "graph";
    const CitationGraph graph = build_graph(corpus);
    const ComponentResult comp = largest_component(graph);
    const CitationGraph& giant = comp.giant;
    bundle.write("stats", "stats.txt", [&](std::ostream& out) { write_corpus_stats(out, corpus, graph, giant); });

    stage = "histogram";
    const DegreeHistogram hist = indegree_histogram(giant);
    bundle.write("histogram", "indegree_histogram.csv",
                 [&](std::ostream& out) { write_histogram_csv(out, hist); });

    stage = "fit";
    const PowerLawFit fit = fit_power_law(hist);
    bundle.write("fit", "powerlaw_fit.json", [&](std::ostream& out) { write_fit_json(out, fit); });
    bundle.write("fit", "powerlaw_fit.csv", [&](std::ostream& out) { write_fit_csv(out, hist, fit); });

    stage = "core";
    const CitationGraph core = extract_core(giant, cfg.k_min);
    bundle.write("core", "core_graph.json",
                 [&](std::ostream& out) { export_graph(out, core, nullptr, nullptr, GraphFormat::json); });

    stage = "clustering";
    if (core.edge_count() == 0)
      throw std::invalid_argument("empty core: no citations among papers with indegree >= " +
                                  std::to_string(cfg.k_min));
    const UGraph ucore = project_undirected(core);
    const Partition partition = filter_small(ucore, cluster_cnm(ucore), cfg.min_internal_edges);
    if (partition.fronts.empty())
      throw std::invalid_argument("no front reaches " + std::to_string(cfg.min_internal_edges) +
                                  " internal edges");
    bundle.write("partition", "partition.csv", [&](std::ostream& out) { write_partition_csv(out, partition); });
    bundle.write("partition", "partition.json",
                 [&](std::ostream& out) { write_partition_json(out, partition); });

    stage = "quotient";
    const QuotientGraph qg = quotient(core, partition, cfg.min_weight, cfg.fallback);
    bundle.write("quotient", "quotient.json",
                 [&](std::ostream& out) { write_quotient_json(out, qg, partition); });

    stage = "dynamics";
    const FrontDynamics dyn = yearly_counts(corpus, partition);
    bundle.write("dynamics", "dynamics.csv", [&](std::ostream& out) { write_dynamics_csv(out, dyn, partition); });
    bundle.write("dynamics", "peaks.json",
                 [&](std::ostream& out) { write_peaks_json(out, dyn, partition, periods); });

    stage = "terms";
    TermOptions topt;
    topt.top_k = cfg.top_k;
    topt.statistic = cfg.statistic == "chi2" ? TermStatistic::chi2 : TermStatistic::llr;
    if (!cfg.stopwords.empty()) topt.stopwords = &custom_stop;
    const auto terms = score_terms(corpus, partition, topt);
    bundle.write("terms", "terms.csv", [&](std::ostream& out) { write_terms_csv(out, terms, partition); });
    bundle.write("terms", "terms.json", [&](std::ostream& out) { write_terms_json(out, terms, partition); });

    stage = "top_cited";
    bundle.write("top_cited", "top_cited.csv",
                 [&](std::ostream& out) { write_top_cited_csv(out, giant, corpus, partition, cfg.top_n); });

    stage = "layout";
    LayoutOptions lopt;
    lopt.seed = cfg.seed;
    lopt.iterations = cfg.iterations;
    const LayoutResult layout = layout_force(core, lopt);
    bundle.write("layout", "layout.graphml", [&](std::ostream& out) {
      export_graph(out, core, &layout, &partition, GraphFormat::graphml);
    });

    stage = "manifest";
    PipelineResult result;
    result.artifacts = bundle.artifacts();
    result.manifest = dir / "manifest.json";
    nlohmann::ordered_json doc;
    doc["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& a : result.artifacts)
      doc["artifacts"].push_back({{"kind", a.kind}, {"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    std::ofstream out(result.manifest, std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write manifest");
    return result;
  } catch (const DataError& e) {
    bundle.remove_all();
    throw StageError(stage, e.what(), true);
  } catch (const std::exception& e) {
    bundle.remove_all();
    std::error_code ignore;
    fs::remove(dir / "manifest.json", ignore);
    throw StageError(stage, e.what());
  }
}

}  // namespace rfront
