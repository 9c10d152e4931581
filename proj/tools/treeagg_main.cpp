#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treeagg/treeagg.hpp"

namespace {

using nlohmann::json;

constexpr int kExitFormat = 2;     // I/O and format problems
constexpr int kExitAlignment = 3;  // inputs parse but do not line up

struct NamedInput {
  std::string name;
  std::string path;
};

std::vector<NamedInput> parse_named_inputs(const std::vector<std::string>& raw) {
  std::vector<NamedInput> inputs;
  inputs.reserve(raw.size());
  for (const std::string& item : raw) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
      treeagg::raise(treeagg::ErrorCode::invalid_argument,
                     "--input expects NAME=PATH, got '" + item + "'");
    inputs.push_back(NamedInput{item.substr(0, eq), item.substr(eq + 1)});
  }
  return inputs;
}

treeagg::CorpusLoadResult load_inputs(const std::vector<std::string>& raw, bool skip_misaligned,
                                      bool strip_suffixes) {
  const std::vector<NamedInput> inputs = parse_named_inputs(raw);
  std::vector<std::string> paths;
  std::vector<std::string> names;
  for (const NamedInput& input : inputs) {
    names.push_back(input.name);
    paths.push_back(input.path);
  }
  treeagg::CorpusLoadOptions options;
  options.skip_misaligned = skip_misaligned;
  options.read.strip_label_suffixes = strip_suffixes;
  return treeagg::load_corpus(paths, names, options);
}

json agreement_json(const treeagg::AgreementStats& stats) {
  return json{{"pct_all_agree", stats.pct_all_agree},
              {"pct_partial_agree", stats.pct_partial_agree},
              {"pct_none_agree", stats.pct_none_agree},
              {"sentences_all", stats.sentences_all},
              {"sentences_partial", stats.sentences_partial},
              {"sentences_none", stats.sentences_none},
              {"sentences", stats.sentence_count}};
}

json skipped_json(const std::vector<treeagg::SkippedSentence>& skipped) {
  json list = json::array();
  for (const treeagg::SkippedSentence& s : skipped)
    list.push_back(json{{"sentence_id", s.sentence_id}, {"parser", s.parser}, {"reason", s.reason}});
  return list;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) treeagg::raise(treeagg::ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) treeagg::raise(treeagg::ErrorCode::io_error, "write to '" + path + "' failed");
}

treeagg::DriverConfig read_driver_config(const std::string& path) {
  treeagg::DriverConfig config;
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) treeagg::raise(treeagg::ErrorCode::io_error, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    treeagg::raise(treeagg::ErrorCode::io_error, path + ": " + e.what());
  }
  config.max_iters = j.value("max_iters", config.max_iters);
  config.convergence_tol = j.value("convergence_tol", config.convergence_tol);
  config.distance_smoothing = j.value("distance_smoothing", config.distance_smoothing);
  config.include_preterminals = j.value("include_preterminals", config.include_preterminals);
  config.tie_rel_tol = j.value("tie_tolerance", config.tie_rel_tol);
  return config;
}

int run_aggregate(const std::vector<std::string>& raw_inputs, const std::string& output_path,
                  const std::string& report_path, const std::string& method_name,
                  double gc_threshold, const std::string& config_path, bool skip_misaligned,
                  bool strip_suffixes, int threads) {
  if (raw_inputs.size() < 2)
    treeagg::raise(treeagg::ErrorCode::invalid_argument, "aggregate needs at least two --input files");
  treeagg::CorpusLoadResult loaded = load_inputs(raw_inputs, skip_misaligned, strip_suffixes);
  if (loaded.corpus.sentence_count() == 0)
    treeagg::raise(treeagg::ErrorCode::empty_corpus, "no aligned sentences left to aggregate");

  treeagg::DriverConfig config = read_driver_config(config_path);
  config.threads = threads;

  json report;
  report["schema_version"] = 1;
  report["method"] = method_name;
  report["parsers"] = loaded.corpus.parser_names;
  report["agreement"] = agreement_json(treeagg::agreement_stats(loaded.corpus));
  report["skipped"] = skipped_json(loaded.skipped);

  std::vector<treeagg::ParseTree> trees;
  if (method_name == "cptam") {
    treeagg::AggregationResult result = treeagg::run_cptam(loaded.corpus, config);
    trees = std::move(result.trees);
    report["weights"] =
        json{{"structure", result.weights.structure}, {"label", result.weights.label}};
    report["objective_trace"] = result.objective_trace;
    report["label_objective_trace"] = result.label_objective_trace;
    report["iterations"] = result.iterations();
    report["structure_iterations"] = result.structure_iterations;
    report["label_iterations"] = result.label_iterations;
    report["converged"] = result.structure_converged && result.label_converged;
  } else {
    treeagg::ConsensusMethod method = treeagg::ConsensusMethod::mrc;
    if (method_name == "mrc")
      method = treeagg::ConsensusMethod::mrc;
    else if (method_name == "gc")
      method = treeagg::ConsensusMethod::gc;
    else if (method_name == "sc")
      method = treeagg::ConsensusMethod::sc;
    else if (method_name == "cptam-w")
      method = treeagg::ConsensusMethod::cptam_w;
    else
      treeagg::raise(treeagg::ErrorCode::invalid_argument, "unknown method '" + method_name + "'");
    treeagg::AggregateOptions options{config.include_preterminals, config.tie_rel_tol};
    treeagg::BaselineResult result =
        treeagg::run_baseline(loaded.corpus, method, gc_threshold, options, threads);
    trees = std::move(result.trees);
    const std::vector<double> uniform(loaded.corpus.parser_count(), 1.0);
    report["weights"] = json{{"structure", uniform}, {"label", uniform}};
    report["objective_trace"] = json::array();
    report["label_objective_trace"] = json::array();
    report["iterations"] = 0;
    report["structure_iterations"] = 0;
    report["label_iterations"] = 0;
    report["converged"] = true;
  }

  treeagg::write_bracketed_file(output_path, trees);
  if (!report_path.empty()) write_text_file(report_path, report.dump(2) + "\n");
  return 0;
}

json eval_json(const treeagg::EvalReport& report) {
  json j{{"precision", report.precision}, {"recall", report.recall},   {"f1", report.f1},
         {"correct", report.correct},     {"predicted", report.predicted}, {"gold", report.gold}};
  if (report.rf_total) j["rf_total"] = *report.rf_total;
  return j;
}

std::string eval_table(const treeagg::EvalReport& report) {
  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& value) {
    out << name;
    for (std::size_t i = name.size(); i < 12; ++i) out << ' ';
    out << value << '\n';
  };
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.4f", report.precision);
  row("precision", buffer);
  std::snprintf(buffer, sizeof buffer, "%.4f", report.recall);
  row("recall", buffer);
  std::snprintf(buffer, sizeof buffer, "%.4f", report.f1);
  row("f1", buffer);
  row("correct", std::to_string(report.correct));
  row("predicted", std::to_string(report.predicted));
  row("gold", std::to_string(report.gold));
  if (report.rf_total) row("rf_total", std::to_string(*report.rf_total));
  return out.str();
}

int run_evaluate(const std::string& pred_path, const std::string& gold_path, bool structure_only,
                 const std::string& format, bool strip_suffixes) {
  treeagg::CorpusLoadOptions options;
  options.read.strip_label_suffixes = strip_suffixes;
  std::vector<treeagg::ParseTree> pred = treeagg::read_bracketed_file(pred_path, options);
  std::vector<treeagg::ParseTree> gold = treeagg::read_bracketed_file(gold_path, options);
  const treeagg::EvalReport report =
      structure_only ? treeagg::eval_structure(pred, gold) : treeagg::eval_labeled(pred, gold);
  if (format == "table")
    std::cout << eval_table(report);
  else
    std::cout << eval_json(report).dump(2) << "\n";
  return 0;
}

int run_agreement(const std::vector<std::string>& raw_inputs, bool skip_misaligned,
                  bool strip_suffixes) {
  if (raw_inputs.size() < 2)
    treeagg::raise(treeagg::ErrorCode::invalid_argument, "agreement needs at least two --input files");
  treeagg::CorpusLoadResult loaded = load_inputs(raw_inputs, skip_misaligned, strip_suffixes);
  json out = agreement_json(treeagg::agreement_stats(loaded.corpus));
  if (!loaded.skipped.empty()) out["skipped"] = skipped_json(loaded.skipped);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_gen_fixture(std::uint64_t seed, int sentences, int min_tokens, int max_tokens,
                    const std::vector<double>& noise, const std::string& out_dir) {
  treeagg::FixtureConfig config;
  config.seed = seed;
  config.sentences = sentences;
  config.min_tokens = min_tokens;
  config.max_tokens = max_tokens;
  config.noise_rates = noise;
  treeagg::Fixture fixture = treeagg::generate_corpus(config);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    treeagg::raise(treeagg::ErrorCode::io_error, "cannot create '" + out_dir + "': " + ec.message());

  const std::string gold_path = out_dir + "/gold.txt";
  treeagg::write_bracketed_file(gold_path, fixture.gold);
  json files;
  files["gold"] = gold_path;
  files["parsers"] = json::array();
  for (std::size_t k = 0; k < fixture.corpus.parser_count(); ++k) {
    std::vector<treeagg::ParseTree> trees;
    trees.reserve(fixture.corpus.sentence_count());
    for (const treeagg::SentenceBundle& bundle : fixture.corpus.bundles)
      trees.push_back(bundle.trees[k]);
    const std::string path = out_dir + "/" + fixture.corpus.parser_names[k] + ".txt";
    treeagg::write_bracketed_file(path, trees);
    files["parsers"].push_back(path);
  }
  files["sentences"] = sentences;
  std::cout << files.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregates constituency parse trees from multiple parsers and evaluates the results"};
  app.require_subcommand(1);

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "Aggregate per-parser tree files");
  std::vector<std::string> agg_inputs;
  std::string agg_output;
  std::string agg_report;
  std::string agg_method = "cptam";
  std::string agg_config;
  double agg_gc_threshold = 0.2;
  bool agg_skip = false;
  bool agg_strip = false;
  int agg_threads = 0;
  aggregate->add_option("--input", agg_inputs, "Parser input as NAME=PATH (repeat, at least two)")
      ->required();
  aggregate->add_option("--output", agg_output, "Output file, one aggregated tree per line")
      ->required();
  aggregate->add_option("--report", agg_report, "JSON report path (weights, trace, agreement)");
  aggregate->add_option("--method", agg_method, "cptam|cptam-w|mrc|gc|sc")
      ->check(CLI::IsMember({"cptam", "cptam-w", "mrc", "gc", "sc"}));
  aggregate->add_option("--gc-threshold", agg_gc_threshold, "Support threshold for --method gc");
  aggregate->add_option("--config", agg_config, "JSON file with driver settings");
  aggregate->add_flag("--skip-misaligned", agg_skip, "Drop misaligned sentences and report them");
  aggregate->add_flag("--strip-label-suffixes", agg_strip,
                      "Cut label suffixes at the first '-' or '='");
  aggregate->add_option("--threads", agg_threads, "Worker threads (0 = all cores)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted trees against gold trees");
  std::string eval_pred;
  std::string eval_gold;
  bool eval_structure_only = false;
  bool eval_strip = false;
  std::string eval_format = "json";
  evaluate->add_option("--pred", eval_pred, "Predicted trees, one per line")->required();
  evaluate->add_option("--gold", eval_gold, "Gold trees, one per line")->required();
  evaluate->add_flag("--structure-only", eval_structure_only,
                     "Score bare spans and report the total tree distance");
  evaluate->add_flag("--strip-label-suffixes", eval_strip,
                     "Cut label suffixes at the first '-' or '='");
  evaluate->add_option("--format", eval_format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));

  // agreement
  auto* agreement = app.add_subcommand("agreement", "Inter-parser structural agreement statistics");
  std::vector<std::string> agr_inputs;
  bool agr_skip = false;
  bool agr_strip = false;
  agreement->add_option("--input", agr_inputs, "Parser input as NAME=PATH (repeat, at least two)")
      ->required();
  agreement->add_flag("--skip-misaligned", agr_skip, "Drop misaligned sentences");
  agreement->add_flag("--strip-label-suffixes", agr_strip,
                      "Cut label suffixes at the first '-' or '='");

  // gen-fixture
  auto* gen = app.add_subcommand("gen-fixture", "Write a synthetic gold + noisy-parser corpus");
  std::uint64_t gen_seed = 1;
  int gen_sentences = 100;
  int gen_min_tokens = 3;
  int gen_max_tokens = 12;
  std::vector<double> gen_noise;
  std::string gen_out_dir;
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--sentences", gen_sentences, "Number of sentences");
  gen->add_option("--min-tokens", gen_min_tokens, "Shortest sentence length");
  gen->add_option("--max-tokens", gen_max_tokens, "Longest sentence length");
  gen->add_option("--noise", gen_noise, "Per-parser corruption rate in [0,1) (repeat)")
      ->required();
  gen->add_option("--out-dir", gen_out_dir, "Directory for gold.txt and parser files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (aggregate->parsed())
      return run_aggregate(agg_inputs, agg_output, agg_report, agg_method, agg_gc_threshold,
                           agg_config, agg_skip, agg_strip, agg_threads);
    if (evaluate->parsed())
      return run_evaluate(eval_pred, eval_gold, eval_structure_only, eval_format, eval_strip);
    if (agreement->parsed()) return run_agreement(agr_inputs, agr_skip, agr_strip);
    if (gen->parsed())
      return run_gen_fixture(gen_seed, gen_sentences, gen_min_tokens, gen_max_tokens, gen_noise,
                             gen_out_dir);
  } catch (const treeagg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_alignment() ? kExitAlignment : kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  return 0;
}
