// clonebench command-line driver: dataset construction, detector runs,
// temperature sweeps, complexity measurement and stratified error analysis.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "clonebench/chat_client.hpp"
#include "clonebench/complexity.hpp"
#include "clonebench/corpus.hpp"
#include "clonebench/detector.hpp"
#include "clonebench/error.hpp"
#include "clonebench/evaluation.hpp"
#include "clonebench/llm_detector.hpp"
#include "clonebench/metrics.hpp"
#include "clonebench/response_cache.hpp"
#include "clonebench/sampler.hpp"
#include "clonebench/stratify.hpp"
#include "clonebench/text.hpp"

namespace fs = std::filesystem;
using namespace clonebench;

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
  if (!out) throw Error("write failed: " + file.string());
}

void require_file(const fs::path& file, const std::string& what) {
  if (!fs::is_regular_file(file)) throw Error(what + " not found: " + file.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

// build-dataset ---------------------------------------------------------------

struct BuildOptions {
  std::string corpus;
  std::string langs = "java,java";
  std::size_t problems = 100;
  std::size_t positives = 500;
  std::size_t negatives = 500;
  std::uint64_t seed = 0;
  std::string pin_manifest;
  std::string out;
};

int cmd_build_dataset(const BuildOptions& o) {
  const std::vector<Language> langs = parse_language_list(o.langs);
  if (langs.size() != 2) throw Error("--langs takes exactly two languages, e.g. java,ruby");

  SamplingSpec spec;
  spec.n_problems = o.problems;
  spec.n_positive = o.positives;
  spec.n_negative = o.negatives;
  spec.lang_a = langs[0];
  spec.lang_b = langs[1];
  spec.seed = o.seed;
  if (!o.pin_manifest.empty()) {
    require_file(o.pin_manifest, "manifest");
    spec.pinned_problems = read_manifest_problems(o.pin_manifest);
    spec.n_problems = spec.pinned_problems->size();
  }
  spec.validate();

  const fs::path out(o.out);
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  const Corpus corpus = load_corpus(o.corpus, LanguageSet(langs.begin(), langs.end()));
  const LoadReport& report = corpus.report();
  if (!report.missing_sources.empty() || !report.empty_sources.empty()) {
    std::cerr << "skipped " << report.missing_sources.size() << " missing and " << report.empty_sources.size()
              << " empty source files\n";
  }

  const PairDataset dataset = sample_pairs(corpus, spec);
  write_dataset(out, dataset.pairs);
  write_manifest(manifest_path_for(out), dataset);
  if (dataset.sources_with_replacement > 0) {
    std::cerr << dataset.sources_with_replacement << " sources contained invalid UTF-8 (replaced with U+FFFD)\n";
  }
  std::cout << out.string() << '\n';
  return 0;
}

// run-eval / sweep-temperature ------------------------------------------------

struct LlmOptions {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.3;
  std::string prompt = "prompt2";
  std::string template_file;
  std::string verdict_mode = "strict";
  std::string cache;
  std::string base_url;
  double rate = 0.0;
  int max_attempts = 6;
  long long initial_backoff_ms = 500;
};

struct EvalOptions {
  std::string dataset;
  std::string out;
  std::string detector = "lexical";
  std::string detector_id;
  std::string label;
  double threshold = 0.5;
  std::string answers;
  std::size_t concurrency = 4;
  LlmOptions llm;
};

struct LlmContext {
  std::shared_ptr<ChatClient> client;
  std::shared_ptr<ResponseCache> cache;
};

LlmContext make_llm_context(const EvalOptions& o) {
  ChatEndpoint endpoint = ChatEndpoint::from_environment();
  if (!o.llm.base_url.empty()) endpoint.base_url = o.llm.base_url;
  if (endpoint.api_key.empty()) throw AuthError(std::string("no API key: set ") + kApiKeyEnv);
  RetryPolicy retry;
  retry.max_attempts = o.llm.max_attempts;
  retry.initial_backoff = std::chrono::milliseconds(o.llm.initial_backoff_ms);
  auto limiter = std::make_shared<RateLimiter>(o.llm.rate, std::max(1.0, o.llm.rate));
  LlmContext ctx;
  ctx.client = std::make_shared<ChatClient>(endpoint, retry, limiter);
  const fs::path cache = o.llm.cache.empty() ? fs::path(o.out) / "responses.jsonl" : fs::path(o.llm.cache);
  ctx.cache = std::make_shared<ResponseCache>(cache);
  return ctx;
}

std::unique_ptr<Detector> make_detector(const EvalOptions& o, double temperature, const LlmContext* llm) {
  DetectorConfig config;
  config.detector_id = o.detector_id.empty() ? o.detector : o.detector_id;
  if (o.detector == "lexical") {
    config.params["threshold"] = shortest(o.threshold);
    return std::make_unique<LexicalDetector>(config);
  }
  if (o.detector == "scripted") {
    return std::make_unique<ScriptedDetector>(config, ScriptedDetector::load_answers(o.answers));
  }
  config.params["model"] = o.llm.model;
  config.params["temperature"] = shortest(temperature);
  config.params["template"] = o.llm.prompt;
  config.params["verdict_mode"] = o.llm.verdict_mode;
  config.params["concurrency"] = std::to_string(o.concurrency);
  if (!o.llm.template_file.empty()) {
    std::ifstream in(o.llm.template_file, std::ios::binary);
    config.params["template_body"] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return std::make_unique<LlmDetector>(config, LlmSettings::from_config(config), llm->client, llm->cache);
}

void validate_eval_paths(const EvalOptions& o) {
  require_file(o.dataset, "dataset");
  if (o.detector == "scripted") {
    if (o.answers.empty()) throw Error("--answers is required for the scripted detector");
    require_file(o.answers, "answer file");
  }
  if (!o.llm.template_file.empty()) require_file(o.llm.template_file, "template file");
  ensure_dir(o.out);
}

EvalReport run_once(const EvalOptions& o, const std::vector<ClonePair>& pairs, const fs::path& out_dir,
                    double temperature, const LlmContext* llm) {
  const auto detector = make_detector(o, temperature, llm);
  const std::vector<PredictionRecord> predictions = evaluate(pairs, *detector, o.concurrency);
  const std::string label = o.label.empty() ? fs::path(o.dataset).stem().string() : o.label;
  const EvalReport report = make_report(detector->id(), label, pairs, predictions);
  ensure_dir(out_dir);
  write_predictions(out_dir / "predictions.jsonl", predictions);
  nlohmann::ordered_json j = report.to_json();
  if (o.detector == "llm") {
    j["model"] = o.llm.model;
    j["temperature"] = temperature;
    j["template"] = o.llm.template_file.empty() ? o.llm.prompt : "custom";
  }
  write_text(out_dir / "report.json", j.dump(2) + "\n");
  return report;
}

int cmd_run_eval(const EvalOptions& o) {
  validate_eval_paths(o);
  LlmContext llm;
  if (o.detector == "llm") llm = make_llm_context(o);
  const std::vector<ClonePair> pairs = read_dataset(o.dataset);
  const EvalReport report = run_once(o, pairs, o.out, o.llm.temperature, &llm);
  std::cout << report.to_json().dump(2) << '\n';
  return 0;
}

int cmd_sweep_temperature(EvalOptions o, const std::vector<double>& temps) {
  if (temps.empty()) throw CLI::ValidationError("--temps", "at least one temperature is required");
  o.detector = "llm";
  validate_eval_paths(o);
  const LlmContext llm = make_llm_context(o);
  const std::vector<ClonePair> pairs = read_dataset(o.dataset);
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (const double t : temps) {
    const fs::path dir = fs::path(o.out) / ("T" + shortest(t));
    const EvalReport report = run_once(o, pairs, dir, t, &llm);
    nlohmann::ordered_json row = report.to_json();
    row["temperature"] = t;
    summary.push_back(std::move(row));
  }
  write_text(fs::path(o.out) / "sweep.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// complexity ------------------------------------------------------------------

struct ComplexityOptions {
  std::string corpus;
  std::string langs = "java,ruby";
  std::string manifest;
  std::string out;
};

std::vector<std::string> restrict_problems(const Corpus& corpus, const std::string& manifest) {
  std::vector<std::string> ids;
  if (manifest.empty()) {
    for (const auto& [pid, _] : corpus.problems()) ids.push_back(pid);
    return ids;
  }
  require_file(manifest, "manifest");
  for (const auto& pid : read_manifest_problems(manifest)) {
    if (!corpus.contains(pid)) throw Error("manifest problem " + pid + " is not in the corpus");
    ids.push_back(pid);
  }
  return ids;
}

int cmd_complexity(const ComplexityOptions& o) {
  const std::vector<Language> langs = parse_language_list(o.langs);
  const Corpus corpus = load_corpus(o.corpus, LanguageSet(langs.begin(), langs.end()));
  std::ostringstream csv;
  csv << "problem_id,submission_id,language,cc,parse_ok\n";
  std::size_t failed = 0;
  for (const auto& pid : restrict_problems(corpus, o.manifest)) {
    for (const auto& sub : corpus.problem(pid).submissions) {
      const ComplexityResult r = cyclomatic_complexity(sub);
      if (!r.parse_ok) ++failed;
      csv << csv_escape(sub.problem_id) << ',' << csv_escape(sub.submission_id) << ',' << sub.language.name() << ','
          << r.cc << ',' << (r.parse_ok ? "true" : "false") << '\n';
    }
  }
  if (o.out.empty() || o.out == "-") {
    std::cout << csv.str();
  } else {
    const fs::path out(o.out);
    if (out.has_parent_path()) ensure_dir(out.parent_path());
    write_text(out, csv.str());
  }
  if (failed > 0) std::cerr << failed << " sources fell back to token-level counting\n";
  return 0;
}

// analyze ---------------------------------------------------------------------

struct AnalyzeOptions {
  std::string corpus;
  std::vector<std::string> datasets;
  std::vector<std::string> predictions;
  std::string mode = "shared";
  std::string out;
};

int cmd_analyze(const AnalyzeOptions& o) {
  if (o.datasets.size() != o.predictions.size()) {
    throw CLI::ValidationError("--predictions", "give one --predictions file per --dataset");
  }
  if (o.datasets.empty()) throw CLI::ValidationError("--dataset", "at least one run is required");
  for (std::size_t i = 0; i < o.datasets.size(); ++i) {
    require_file(o.datasets[i], "dataset");
    require_file(manifest_path_for(o.datasets[i]), "dataset manifest");
    require_file(o.predictions[i], "predictions");
  }
  ensure_dir(o.out);

  std::vector<std::string> selected;
  std::vector<EvaluatedRun> runs;
  LanguageSet langs;
  for (std::size_t i = 0; i < o.datasets.size(); ++i) {
    std::vector<std::string> problems = read_manifest_problems(manifest_path_for(o.datasets[i]));
    std::sort(problems.begin(), problems.end());
    if (i == 0) {
      selected = problems;
    } else if (problems != selected) {
      throw Error("datasets do not share one problem set: " + o.datasets[0] + " vs " + o.datasets[i]);
    }
    EvaluatedRun run{read_dataset(o.datasets[i]), read_predictions(o.predictions[i])};
    for (const auto& p : run.pairs) {
      langs.insert(p.code1.language);
      langs.insert(p.code2.language);
    }
    runs.push_back(std::move(run));
  }

  const Corpus corpus = load_corpus(o.corpus, langs);
  std::map<std::string, double> rates;
  std::map<std::string, double> mean_cc;
  for (const auto& pid : selected) {
    if (!corpus.contains(pid)) throw Error("problem " + pid + " is not in the corpus");
    const Problem& problem = corpus.problem(pid);
    rates[pid] = acceptance_rate(problem);
    std::vector<ComplexityResult> results;
    for (const auto& sub : problem.submissions) results.push_back(cyclomatic_complexity(sub));
    if (!results.empty()) mean_cc[pid] = problem_mean_cc(results).mean_cc;
  }

  const CombineMode mode = o.mode == "union" ? CombineMode::Union : CombineMode::Shared;
  const auto strata = stratify_misclassified(runs, selected, mean_cc, rates, mode);
  std::ostringstream csv;
  write_strata_csv(csv, strata);
  write_text(fs::path(o.out) / "stratified.csv", csv.str());
  nlohmann::ordered_json j;
  j["mode"] = o.mode;
  j["datasets"] = o.datasets;
  j["strata"] = strata_to_json(strata);
  write_text(fs::path(o.out) / "stratified.json", j.dump(2) + "\n");
  std::cout << csv.str();
  return 0;
}

void add_llm_options(CLI::App* cmd, LlmOptions& o) {
  cmd->add_option("--model", o.model, "Chat model name")->capture_default_str();
  cmd->add_option("--template", o.prompt, "Prompt template")
      ->check(CLI::IsMember({"prompt1", "prompt2"}))
      ->capture_default_str();
  cmd->add_option("--template-file", o.template_file, "Custom template with {code1} and {code2}");
  cmd->add_option("--verdict-mode", o.verdict_mode, "Reply parsing")
      ->check(CLI::IsMember({"strict", "fallback"}))
      ->capture_default_str();
  cmd->add_option("--cache", o.cache, "Response cache file (default <out>/responses.jsonl)");
  cmd->add_option("--base-url", o.base_url, "Overrides CLONEBENCH_BASE_URL");
  cmd->add_option("--rate", o.rate, "Requests per second, 0 for unlimited")->capture_default_str();
  cmd->add_option("--max-attempts", o.max_attempts, "HTTP attempts per request")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--initial-backoff-ms", o.initial_backoff_ms, "First retry delay")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_eval_options(CLI::App* cmd, EvalOptions& o) {
  cmd->add_option("--dataset", o.dataset, "Dataset JSONL")->required();
  cmd->add_option("--out", o.out, "Output directory")->required();
  cmd->add_option("--detector-id", o.detector_id, "Identifier recorded in predictions");
  cmd->add_option("--label", o.label, "Dataset label in the report (default: file stem)");
  cmd->add_option("--concurrency", o.concurrency, "Concurrent classify calls")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_llm_options(cmd, o.llm);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clonebench: code clone detection benchmark harness"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build-dataset", "Sample a balanced clone-pair dataset");
  build_cmd->add_option("--corpus", build.corpus, "Corpus root")->required();
  build_cmd->add_option("--langs", build.langs, "Languages of code1,code2")->capture_default_str();
  build_cmd->add_option("--problems", build.problems, "Problems to select")->capture_default_str();
  build_cmd->add_option("--positives", build.positives, "Clone pairs")->capture_default_str();
  build_cmd->add_option("--negatives", build.negatives, "Non-clone pairs")->capture_default_str();
  build_cmd->add_option("--seed", build.seed, "Sampling seed")->capture_default_str();
  build_cmd->add_option("--pin-problems", build.pin_manifest, "Reuse the problem set of this manifest");
  build_cmd->add_option("--out", build.out, "Output JSONL")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("run-eval", "Classify a dataset and score the predictions");
  add_eval_options(eval_cmd, eval);
  eval_cmd->add_option("--detector", eval.detector, "Detector")
      ->check(CLI::IsMember({"lexical", "scripted", "llm"}))
      ->capture_default_str();
  eval_cmd->add_option("--threshold", eval.threshold, "Lexical similarity threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  eval_cmd->add_option("--answers", eval.answers, "Answer key for the scripted detector");
  eval_cmd->add_option("--temperature", eval.llm.temperature, "Sampling temperature")
      ->check(CLI::Range(0.0, 2.0))
      ->capture_default_str();

  EvalOptions sweep;
  std::vector<double> temps;
  auto* sweep_cmd = app.add_subcommand("sweep-temperature", "Run the LLM detector at several temperatures");
  add_eval_options(sweep_cmd, sweep);
  sweep_cmd->add_option("--temps", temps, "Temperatures, e.g. 0.1,0.3,0.5")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 2.0));

  ComplexityOptions cx;
  auto* cx_cmd = app.add_subcommand("complexity", "Cyclomatic complexity of every retained submission");
  cx_cmd->add_option("--corpus", cx.corpus, "Corpus root")->required();
  cx_cmd->add_option("--langs", cx.langs, "Languages to measure")->capture_default_str();
  cx_cmd->add_option("--manifest", cx.manifest, "Restrict to a dataset's problem set");
  cx_cmd->add_option("--out", cx.out, "Output CSV (default stdout)");

  AnalyzeOptions an;
  auto* an_cmd = app.add_subcommand("analyze", "Difficulty of misclassified problems");
  an_cmd->add_option("--corpus", an.corpus, "Corpus root")->required();
  an_cmd->add_option("--dataset", an.datasets, "Dataset JSONL, once per run")->required();
  an_cmd->add_option("--predictions", an.predictions, "Predictions JSONL, once per run")->required();
  an_cmd->add_option("--mode", an.mode, "Combine runs by intersection or union")
      ->check(CLI::IsMember({"shared", "union"}))
      ->capture_default_str();
  an_cmd->add_option("--out", an.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*build_cmd) return cmd_build_dataset(build);
    if (*eval_cmd) return cmd_run_eval(eval);
    if (*sweep_cmd) return cmd_sweep_temperature(sweep, temps);
    if (*cx_cmd) return cmd_complexity(cx);
    if (*an_cmd) return cmd_analyze(an);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
