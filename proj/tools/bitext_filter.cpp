// bitext-filter: score, combine and select noisy parallel corpus pairs.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 model/artifact error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bitext/corpus.hpp"
#include "bitext/errors.hpp"
#include "bitext/ibm1.hpp"
#include "bitext/langid.hpp"
#include "bitext/ngram_lm.hpp"
#include "bitext/noise_bench.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/selection.hpp"

namespace {

using namespace bitext;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kModel = 3 };

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  auto out = open_out(path);
  for (const auto& l : lines) out << l << '\n';
}

void write_bitext(const std::string& prefix, const std::vector<SentencePair>& pairs) {
  auto src = open_out(prefix + ".src");
  auto trg = open_out(prefix + ".trg");
  for (const auto& p : pairs) {
    src << p.src_raw << '\n';
    trg << p.trg_raw << '\n';
  }
}

struct Options {
  // shared
  std::string config, src, trg, out, out_prefix, scores, labels, text, third, histogram;
  std::uint64_t budget = 0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  int iterations = 5;
  int order = 3;
  std::string smoothing = "witten-bell";
  std::optional<double> cutoff;
  bool no_abs = false;
  bool no_ce = false;
  bool no_lowercase = false;
  std::vector<std::string> samples;
  std::vector<std::string> inputs;
  std::vector<double> at{0.1, 0.25, 0.5, 0.75};
  std::size_t pairs = 10000;
  double copy = 0.05, wrong_language = 0.05, misaligned = 0.05, truncated = 0.05, junk = 0.05;
};

int run_train_langid(const Options& o) {
  std::map<std::string, std::string> paths;
  for (const auto& s : o.samples) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--sample expects LANG=PATH, got '" + s + "'");
    if (!paths.emplace(s.substr(0, eq), s.substr(eq + 1)).second)
      throw UsageError("language '" + s.substr(0, eq) + "' given twice");
  }
  const auto model = LangIdModel::train_files(paths);
  model.save(o.out);
  std::cout << "languages\t" << join(model.languages(), ",") << '\n';
  return kOk;
}

int run_train_lm(const Options& o) {
  LmOptions opts;
  opts.order = o.order;
  opts.smoothing = parse_smoothing(o.smoothing);
  const auto model = NGramModel::train_file(o.text, opts);
  model.save(o.out);
  std::cout << "order\t" << model.order() << "\nevents\t" << model.event_count() << '\n';
  return kOk;
}

int run_train_ibm1(const Options& o) {
  const auto pairs = read_bitext(o.src, o.trg);
  Ibm1Options opts;
  opts.iterations = o.iterations;
  opts.lowercase = !o.no_lowercase;
  // Forward scores H(trg|src), backward scores H(src|trg).
  LexicalModel::train_bitext(pairs, opts, false).save(o.out + ".fwd");
  LexicalModel::train_bitext(pairs, opts, true).save(o.out + ".bwd");
  std::cout << "forward\t" << o.out << ".fwd\nbackward\t" << o.out << ".bwd\n";
  return kOk;
}

int run_score(const Options& o) {
  ScoreOverrides ov;
  ov.cutoff = o.cutoff;
  ov.no_abs_difference = o.no_abs;
  ov.no_ce_weighting = o.no_ce;
  if (ov.cutoff && !(*ov.cutoff >= 0.0 && *ov.cutoff <= 1.0)) throw UsageError("--cutoff must lie in [0,1]");
  const auto pipeline = Pipeline::build(load_config(o.config), ov);
  BitextReader reader(o.src, o.trg);
  auto totals = open_out(o.out);
  auto tsv = open_out(o.out + ".tsv");
  const auto summary = score_corpus(pipeline, reader, totals, &tsv, o.workers);
  std::cerr << "scored " << summary.pairs << " pairs, " << summary.zero_total << " with total 0\n";
  return kOk;
}

int run_merge(const Options& o) {
  std::vector<std::vector<double>> columns;
  for (const auto& path : o.inputs) columns.push_back(read_score_file(path));
  write_score_file(o.out, merge_scores(columns));
  return kOk;
}

int run_select(const Options& o) {
  const auto result = StreamingSelector(o.scores, o.trg).select(o.budget);
  emit_subset(result, o.src, o.trg, o.out_prefix + ".src", o.out_prefix + ".trg");
  std::cout << "threshold\t" << format_score(result.threshold) << '\n'
            << "selected\t" << result.selected_ids.size() << '\n'
            << "words\t" << result.achieved_words << '\n'
            << "budget\t" << result.budget << '\n'
            << "exhausted\t" << (result.exhausted ? "yes" : "no") << '\n';
  return kOk;
}

int run_bench_generate(const Options& o) {
  bench::NoiseSpec spec{o.copy, o.wrong_language, o.misaligned, o.truncated, o.junk, o.seed};
  bench::NoisyBitext noisy;
  if (!o.src.empty() || !o.trg.empty()) {
    if (o.src.empty() || o.trg.empty()) throw UsageError("--src and --trg go together");
    const auto clean = read_bitext(o.src, o.trg);
    const auto third = o.third.empty() ? std::vector<std::string>{} : read_lines(o.third);
    noisy = bench::generate(clean, third, spec);
  } else {
    bench::SuiteSizes sizes;
    sizes.bench_pairs = o.pairs;
    const auto suite = bench::make_suite(o.seed, sizes, 0.0);
    noisy = bench::generate(suite.clean, suite.third_language, spec);
    write_bitext(o.out_prefix + ".seed", suite.seed_bitext);
    write_lines(o.out_prefix + ".news.trg", suite.in_domain_trg);
    write_lines(o.out_prefix + ".general.trg", suite.general_trg);
    for (const auto& [lang, lines] : suite.langid_samples) write_lines(o.out_prefix + ".langid." + lang, lines);
    auto emb = open_out(o.out_prefix + ".emb.vec");
    emb << suite.embeddings;
  }
  write_bitext(o.out_prefix, noisy.pairs);
  auto labels = open_out(o.out_prefix + ".labels");
  for (auto l : noisy.labels) labels << bench::label_name(l) << '\n';
  std::cout << "pairs\t" << noisy.pairs.size() << '\n';
  return kOk;
}

int run_bench_eval(const Options& o) {
  const auto scores = read_score_file(o.scores);
  const auto labels = bench::read_labels(o.labels);
  const auto m = bench::rank_eval(scores, labels, o.at);
  std::cout << "auc\t" << (m.auc ? format_score(*m.auc) : "absent") << '\n';
  for (const auto& [f, p] : m.precision_at) std::cout << "precision@" << format_score(f) << '\t' << format_score(p) << '\n';
  return kOk;
}

int run_stats(const Options& o) {
  const auto st = score_stats(read_score_file(o.scores));
  print_stats(st, std::cout);
  if (!o.histogram.empty()) {
    auto out = open_out(o.histogram);
    print_histogram(st, out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score, combine and select noisy parallel corpus pairs"};
  app.require_subcommand(1);
  Options o;

  auto* train_langid = app.add_subcommand("train-langid", "Train the character n-gram language identifier");
  train_langid->add_option("--sample", o.samples, "LANG=PATH sample text, repeat per language")->required();
  train_langid->add_option("--out", o.out, "Model output path")->required();

  auto* train_lm = app.add_subcommand("train-lm", "Train a word n-gram language model");
  train_lm->add_option("--text", o.text, "Training text, one sentence per line")->required();
  train_lm->add_option("--order", o.order, "n-gram order (1-5)")->capture_default_str();
  train_lm->add_option("--smoothing", o.smoothing, "witten-bell or none")->capture_default_str();
  train_lm->add_option("--out", o.out, "Model output path")->required();

  auto* train_ibm1 = app.add_subcommand("train-ibm1", "Train IBM Model 1 tables in both directions");
  train_ibm1->add_option("--src", o.src, "Source side of the clean bitext")->required();
  train_ibm1->add_option("--trg", o.trg, "Target side of the clean bitext")->required();
  train_ibm1->add_option("--iterations", o.iterations, "EM iterations")->capture_default_str();
  train_ibm1->add_flag("--no-lowercase", o.no_lowercase, "Keep token case");
  train_ibm1->add_option("--out", o.out, "Output prefix; writes PREFIX.fwd and PREFIX.bwd")->required();

  auto* score = app.add_subcommand("score", "Score a corpus with a pipeline configuration");
  score->add_option("--config", o.config, "Pipeline configuration")->required();
  score->add_option("--src", o.src, "Source side")->required();
  score->add_option("--trg", o.trg, "Target side")->required();
  score->add_option("--out", o.out, "Totals file; partials go to OUT.tsv")->required();
  score->add_option("--workers", o.workers, "Scoring threads")->capture_default_str()->check(CLI::PositiveNumber);
  score->add_option("--cutoff", o.cutoff, "Override the cut-off of every dom scorer");
  score->add_flag("--no-abs-difference", o.no_abs, "Drop the absolute-difference term of adq");
  score->add_flag("--no-ce-weighting", o.no_ce, "Drop the averaged cross-entropy term of adq");

  auto* merge = app.add_subcommand("merge-scores", "Per-line product of score files");
  merge->add_option("inputs", o.inputs, "Score files")->required();
  merge->add_option("--out", o.out, "Merged score file")->required();

  auto* select = app.add_subcommand("select", "Select the best pairs reaching a target word budget");
  select->add_option("--scores", o.scores, "Score file, one per line")->required();
  select->add_option("--src", o.src, "Source side")->required();
  select->add_option("--trg", o.trg, "Target side")->required();
  select->add_option("--budget-words", o.budget, "Target-side word budget")->required()->check(CLI::PositiveNumber);
  select->add_option("--out-prefix", o.out_prefix, "Writes PREFIX.src and PREFIX.trg")->required();

  auto* bench_generate = app.add_subcommand("bench-generate", "Generate a labelled noisy bench corpus");
  bench_generate->add_option("--out-prefix", o.out_prefix, "Output prefix")->required();
  bench_generate->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  bench_generate->add_option("--src", o.src, "Clean source side (default: built-in synthetic corpus)");
  bench_generate->add_option("--trg", o.trg, "Clean target side");
  bench_generate->add_option("--third", o.third, "Third-language sample for wrong-language noise");
  bench_generate->add_option("--pairs", o.pairs, "Synthetic corpus size")->capture_default_str();
  bench_generate->add_option("--copy", o.copy, "Fraction of copied-source targets")->capture_default_str();
  bench_generate->add_option("--wrong-language", o.wrong_language, "Fraction of wrong-language targets")
      ->capture_default_str();
  bench_generate->add_option("--misaligned", o.misaligned, "Fraction of misaligned pairs")->capture_default_str();
  bench_generate->add_option("--truncated", o.truncated, "Fraction of truncated targets")->capture_default_str();
  bench_generate->add_option("--junk", o.junk, "Fraction of junk pairs")->capture_default_str();

  auto* bench_eval = app.add_subcommand("bench-eval", "Ranking quality of scores against bench labels");
  bench_eval->add_option("--scores", o.scores, "Score file")->required();
  bench_eval->add_option("--labels", o.labels, "Label file")->required();
  bench_eval->add_option("--at", o.at, "Precision fractions")->delimiter(',');

  auto* stats = app.add_subcommand("stats", "Summarize a score file");
  stats->add_option("scores,--scores", o.scores, "Score file")->required();
  stats->add_option("--histogram", o.histogram, "Write a TSV histogram here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_langid) return run_train_langid(o);
    if (*train_lm) return run_train_lm(o);
    if (*train_ibm1) return run_train_ibm1(o);
    if (*score) return run_score(o);
    if (*merge) return run_merge(o);
    if (*select) return run_select(o);
    if (*bench_generate) return run_bench_generate(o);
    if (*bench_eval) return run_bench_eval(o);
    if (*stats) return run_stats(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
