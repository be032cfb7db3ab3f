#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bitext/corpus.hpp"
#include "bitext/embeddings.hpp"
#include "bitext/errors.hpp"
#include "bitext/ibm1.hpp"
#include "bitext/langid.hpp"
#include "bitext/ngram_lm.hpp"
#include "bitext/parallel.hpp"
#include "bitext/scores.hpp"

namespace bitext {

// One scorer block of a pipeline configuration.
struct ScorerSpec {
  std::string name;
  std::string kind;  // langid, adq, dom, sim, external
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  const std::string& get(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw UsageError("scorer '" + name + "' needs '" + key + "'");
    return it->second;
  }
  std::string get_or(const std::string& key, std::string fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? std::move(fallback) : it->second;
  }
  bool flag(const std::string& key, bool fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    const auto& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("scorer '" + name + "': '" + key + "' must be a boolean, got '" + v + "'");
  }
  double number(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    const auto v = parse_double(it->second);
    if (!v || !std::isfinite(*v)) throw UsageError("scorer '" + name + "': '" + key + "' must be a number");
    return *v;
  }
};

// Ordered scorer list. Relative artifact paths resolve against `base_dir`.
struct PipelineConfig {
  std::vector<ScorerSpec> scorers;
  std::filesystem::path base_dir;

  std::string resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return (p.is_absolute() || base_dir.empty() ? p : base_dir / p).string();
  }
};

inline constexpr std::array<std::string_view, 5> kScorerKinds = {"langid", "adq", "dom", "sim", "external"};

// Flat keyed text, one block per scorer:
//
//   [adq]
//   kind = adq
//   forward = model.de-en
//   backward = model.en-de
//
// The block header is the scorer name and must be unique. '#' and ';' start
// comments, at the start of a line or after whitespace.
inline PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
  // The INI reader only knows whole-line comments; drop trailing ones first.
  std::stringstream clean;
  for (std::string line; std::getline(in, line);) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.resize(i);
        break;
      }
    }
    clean << line << '\n';
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(clean, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  PipelineConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw UsageError("config: top-level key '" + section + "' outside a scorer block");
    ScorerSpec spec;
    spec.name = section;
    for (const auto& [key, value] : body) spec.params[key] = value.data();
    spec.kind = spec.get("kind");
    if (std::find(kScorerKinds.begin(), kScorerKinds.end(), spec.kind) == kScorerKinds.end())
      throw UsageError("config: scorer '" + spec.name + "' has unknown kind '" + spec.kind + "'");
    spec.params.erase("kind");
    cfg.scorers.push_back(std::move(spec));
  }
  return cfg;
}

inline PipelineConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {}) {
  std::istringstream in(text);
  return parse_config(in, base_dir);
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  return parse_config(in, std::filesystem::path(path).parent_path());
}

// Command-line overrides applied to every scorer of the matching kind.
struct ScoreOverrides {
  std::optional<double> cutoff;
  bool no_abs_difference = false;
  bool no_ce_weighting = false;
};

// A pair with both sides tokenized once for all scorers.
struct PairView {
  std::size_t id;
  const std::string& src_raw;
  const std::string& trg_raw;
  const TokenSeq& src;
  const TokenSeq& trg;
};

class Scorer {
 public:
  explicit Scorer(std::string name) : name_(std::move(name)) {}
  virtual ~Scorer() = default;
  const std::string& name() const { return name_; }
  virtual std::string_view kind() const = 0;
  // Lower runs earlier; cheap hard gates first.
  virtual int cost() const = 0;
  virtual double score(const PairView& pair) const = 0;
  // Checks per-line inputs against the final corpus size.
  virtual void check_length(std::size_t) const {}

 private:
  std::string name_;
};

namespace detail {

inline const std::vector<double>& column_at_least(const std::vector<double>& col, std::size_t id,
                                                  const std::string& path) {
  if (id >= col.size())
    throw DataError(path + ": column has " + std::to_string(col.size()) + " lines, corpus is longer");
  return col;
}

inline void column_exact(const std::vector<double>& col, std::size_t n, const std::string& path) {
  if (col.size() != n)
    throw DataError(path + ": column has " + std::to_string(col.size()) + " lines for a corpus of " +
                    std::to_string(n) + " pairs");
}

}  // namespace detail

class LangIdScorer : public Scorer {
 public:
  LangIdScorer(std::string name, std::shared_ptr<const LangIdModel> model, std::string src_lang, std::string trg_lang)
      : Scorer(std::move(name)), model_(std::move(model)), src_(std::move(src_lang)), trg_(std::move(trg_lang)) {}
  std::string_view kind() const override { return "langid"; }
  int cost() const override { return 1; }
  double score(const PairView& p) const override {
    return model_->classify(p.src_raw) == src_ && model_->classify(p.trg_raw) == trg_ ? 1.0 : 0.0;
  }

 private:
  std::shared_ptr<const LangIdModel> model_;
  std::string src_, trg_;
};

// Pairs with an empty side score 0 in the entropy-based scorers: the
// cross-entropies are undefined there and such a pair carries no signal.
class AdqScorer : public Scorer {
 public:
  struct Source {
    std::shared_ptr<const LexicalModel> model;
    std::vector<double> column;
    std::string column_path;
  };

  AdqScorer(std::string name, Source fwd, Source bwd, AdqConfig cfg)
      : Scorer(std::move(name)), fwd_(std::move(fwd)), bwd_(std::move(bwd)), cfg_(cfg) {}
  std::string_view kind() const override { return "adq"; }
  int cost() const override { return 4; }
  double score(const PairView& p) const override {
    if (p.src.empty() || p.trg.empty()) return 0.0;
    const double h_fwd = entropy(fwd_, p.id, p.src, p.trg);
    const double h_bwd = entropy(bwd_, p.id, p.trg, p.src);
    return adq(h_fwd, h_bwd, cfg_);
  }
  void check_length(std::size_t n) const override {
    if (!fwd_.model) detail::column_exact(fwd_.column, n, fwd_.column_path);
    if (!bwd_.model) detail::column_exact(bwd_.column, n, bwd_.column_path);
  }

 private:
  static double entropy(const Source& s, std::size_t id, const TokenSeq& given, const TokenSeq& predicted) {
    if (s.model) return s.model->cond_cross_entropy(given, predicted);
    return detail::column_at_least(s.column, id, s.column_path)[id];
  }
  Source fwd_, bwd_;
  AdqConfig cfg_;
};

class DomScorer : public Scorer {
 public:
  struct Source {
    std::shared_ptr<const NGramModel> model;
    std::vector<double> column;
    std::string column_path;
  };

  DomScorer(std::string name, Source in, Source out, DomConfig cfg)
      : Scorer(std::move(name)), in_(std::move(in)), out_(std::move(out)), cfg_(cfg) {}
  std::string_view kind() const override { return "dom"; }
  int cost() const override { return 3; }
  // Target side only; the source sentence is ignored.
  double score(const PairView& p) const override {
    if (p.trg.empty()) return 0.0;
    return dom(entropy(in_, p), entropy(out_, p), cfg_);
  }
  void check_length(std::size_t n) const override {
    if (!in_.model) detail::column_exact(in_.column, n, in_.column_path);
    if (!out_.model) detail::column_exact(out_.column, n, out_.column_path);
  }

 private:
  static double entropy(const Source& s, const PairView& p) {
    if (s.model) return s.model->cross_entropy(p.trg);
    return detail::column_at_least(s.column, p.id, s.column_path)[p.id];
  }
  Source in_, out_;
  DomConfig cfg_;
};

class SimScorer : public Scorer {
 public:
  SimScorer(std::string name, std::shared_ptr<const Embeddings> src, std::shared_ptr<const Embeddings> trg)
      : Scorer(std::move(name)), src_(std::move(src)), trg_(std::move(trg)) {}
  std::string_view kind() const override { return "sim"; }
  int cost() const override { return 5; }
  double score(const PairView& p) const override {
    const auto vx = src_->lookup(p.src);
    const auto vy = trg_->lookup(p.trg);
    return sim(vx, vy, &failures_);
  }
  std::size_t failures() const { return failures_.load(); }

 private:
  std::shared_ptr<const Embeddings> src_, trg_;
  mutable std::atomic<std::size_t> failures_{0};
};

// Precomputed scores, one per line; clamped to [0,1] by the combiner.
class ExternalScorer : public Scorer {
 public:
  ExternalScorer(std::string name, std::vector<double> column, std::string path)
      : Scorer(std::move(name)), column_(std::move(column)), path_(std::move(path)) {}
  std::string_view kind() const override { return "external"; }
  int cost() const override { return 0; }
  double score(const PairView& p) const override { return detail::column_at_least(column_, p.id, path_)[p.id]; }
  void check_length(std::size_t n) const override { detail::column_exact(column_, n, path_); }

 private:
  std::vector<double> column_;
  std::string path_;
};

// Scorers in configuration order plus the evaluation order. Models are
// loaded once and shared read-only.
class Pipeline {
 public:
  static Pipeline build(const PipelineConfig& cfg, const ScoreOverrides& overrides = {}) {
    Pipeline p;
    Loader loader;
    for (const auto& spec : cfg.scorers) p.scorers_.push_back(make(spec, cfg, overrides, loader));
    for (std::size_t i = 0; i < p.scorers_.size(); ++i) p.eval_order_.push_back(i);
    std::stable_sort(p.eval_order_.begin(), p.eval_order_.end(),
                     [&](std::size_t a, std::size_t b) { return p.scorers_[a]->cost() < p.scorers_[b]->cost(); });
    return p;
  }

  const std::vector<std::unique_ptr<Scorer>>& scorers() const { return scorers_; }

  // Scores one pair. Once a scorer yields 0 the remaining ones are skipped;
  // their partials are 0 and flagged in `skipped`.
  ScoreRecord score(const SentencePair& pair, std::vector<bool>* skipped = nullptr) const {
    const TokenSeq src = tokenize(pair.src_raw);
    const TokenSeq trg = tokenize(pair.trg_raw);
    const PairView view{pair.id, pair.src_raw, pair.trg_raw, src, trg};
    ScoreRecord rec;
    rec.id = pair.id;
    rec.partials.resize(scorers_.size());
    std::vector<bool> skip(scorers_.size(), true);
    bool dead = false;
    for (std::size_t i : eval_order_) {
      const auto& scorer = *scorers_[i];
      rec.partials[i].first = scorer.name();
      if (dead) continue;
      double value;
      try {
        value = scorer.score(view);
      } catch (const std::exception& e) {
        throw DataError("scorer '" + scorer.name() + "': " + e.what(), pair.id + 1);
      }
      if (!std::isfinite(value))
        throw DataError("scorer '" + scorer.name() + "' produced a non-finite score", pair.id + 1);
      rec.partials[i].second = value;
      skip[i] = false;
      if (std::clamp(value, 0.0, 1.0) == 0.0) dead = true;
    }
    rec.total = combine(rec.partials);
    if (skipped) *skipped = std::move(skip);
    return rec;
  }

  void check_length(std::size_t n) const {
    for (const auto& s : scorers_) {
      try {
        s->check_length(n);
      } catch (const DataError& e) {
        throw DataError("scorer '" + s->name() + "': " + e.what());
      }
    }
  }

 private:
  struct Loader {
    std::map<std::string, std::shared_ptr<const LangIdModel>> langid;
    std::map<std::string, std::shared_ptr<const LexicalModel>> lexical;
    std::map<std::string, std::shared_ptr<const NGramModel>> lm;
    std::map<std::string, std::shared_ptr<const Embeddings>> embeddings;

    template <typename Model, typename Map>
    static std::shared_ptr<const Model> get(Map& cache, const std::string& path) {
      auto& slot = cache[path];
      if (!slot) slot = std::make_shared<const Model>(Model::load(path));
      return slot;
    }
  };

  static std::unique_ptr<Scorer> make(const ScorerSpec& spec, const PipelineConfig& cfg,
                                      const ScoreOverrides& ov, Loader& loader) {
    const auto path = [&](const std::string& key) { return cfg.resolve(spec.get(key)); };
    if (spec.kind == "langid") {
      return std::make_unique<LangIdScorer>(spec.name, Loader::get<LangIdModel>(loader.langid, path("model")),
                                            spec.get("src_lang"), spec.get("trg_lang"));
    }
    if (spec.kind == "adq") {
      const auto source = [&](const std::string& model_key, const std::string& column_key) {
        AdqScorer::Source s;
        if (spec.has(model_key)) {
          s.model = Loader::get<LexicalModel>(loader.lexical, path(model_key));
        } else if (spec.has(column_key)) {
          s.column_path = path(column_key);
          s.column = read_entropy_column(s.column_path);
        } else {
          throw UsageError("scorer '" + spec.name + "' needs '" + model_key + "' or '" + column_key + "'");
        }
        return s;
      };
      AdqConfig acfg;
      acfg.use_abs_difference = spec.flag("abs_difference", true) && !ov.no_abs_difference;
      acfg.use_ce_weighting = spec.flag("ce_weighting", true) && !ov.no_ce_weighting;
      return std::make_unique<AdqScorer>(spec.name, source("forward", "forward_column"),
                                         source("backward", "backward_column"), acfg);
    }
    if (spec.kind == "dom") {
      const auto source = [&](const std::string& model_key, const std::string& column_key) {
        DomScorer::Source s;
        if (spec.has(model_key)) {
          s.model = Loader::get<NGramModel>(loader.lm, path(model_key));
        } else if (spec.has(column_key)) {
          s.column_path = path(column_key);
          s.column = read_entropy_column(s.column_path);
        } else {
          throw UsageError("scorer '" + spec.name + "' needs '" + model_key + "' or '" + column_key + "'");
        }
        return s;
      };
      DomConfig dcfg;
      dcfg.cutoff = ov.cutoff ? *ov.cutoff : spec.number("cutoff", 0.0);
      if (!(dcfg.cutoff >= 0.0 && dcfg.cutoff <= 1.0))
        throw UsageError("scorer '" + spec.name + "': cutoff must lie in [0,1]");
      return std::make_unique<DomScorer>(spec.name, source("in_domain", "in_column"),
                                         source("out_domain", "out_column"), dcfg);
    }
    if (spec.kind == "sim") {
      std::shared_ptr<const Embeddings> src, trg;
      if (spec.has("embeddings")) {
        src = trg = Loader::get<Embeddings>(loader.embeddings, path("embeddings"));
      } else {
        src = Loader::get<Embeddings>(loader.embeddings, path("src_embeddings"));
        trg = Loader::get<Embeddings>(loader.embeddings, path("trg_embeddings"));
      }
      if (src->dim() != trg->dim()) throw ModelError("scorer '" + spec.name + "': embedding dimensions differ");
      return std::make_unique<SimScorer>(spec.name, src, trg);
    }
    const auto column_path = path("column");
    return std::make_unique<ExternalScorer>(spec.name, read_score_file(column_path), column_path);
  }

  std::vector<std::unique_ptr<Scorer>> scorers_;
  std::vector<std::size_t> eval_order_;
};

// Scores every pair with an order-preserving parallel map. `totals` gets one
// number per line; `tsv`, when given, gets a header and one row per pair:
// id, each partial in configuration order ("skipped" for placeholders), total.
struct ScoreRunSummary {
  std::size_t pairs = 0;
  std::size_t zero_total = 0;
  std::size_t skipped_evaluations = 0;
};

inline ScoreRunSummary score_corpus(const Pipeline& pipeline, BitextReader& reader, std::ostream& totals,
                                    std::ostream* tsv, std::size_t workers = 1, std::size_t block = 4096) {
  ScoreRunSummary summary;
  if (tsv) {
    *tsv << "id";
    for (const auto& s : pipeline.scorers()) *tsv << '\t' << s->name();
    *tsv << "\ttotal\n";
  }
  struct Row {
    ScoreRecord rec;
    std::vector<bool> skipped;
  };
  std::vector<SentencePair> batch;
  bool more = true;
  while (more) {
    batch.clear();
    while (batch.size() < block) {
      auto p = reader.next();
      if (!p) {
        more = false;
        break;
      }
      batch.push_back(std::move(*p));
    }
    const auto rows = parallel_map<Row>(batch.size(), workers, [&](std::size_t i) {
      Row r;
      r.rec = pipeline.score(batch[i], &r.skipped);
      return r;
    });
    for (const auto& r : rows) {
      ++summary.pairs;
      summary.zero_total += (r.rec.total == 0.0);
      totals << format_score(r.rec.total) << '\n';
      if (tsv) {
        *tsv << r.rec.id;
        for (std::size_t k = 0; k < r.rec.partials.size(); ++k) {
          *tsv << '\t';
          if (r.skipped[k]) {
            *tsv << "skipped";
            ++summary.skipped_evaluations;
          } else {
            *tsv << format_score(r.rec.partials[k].second);
          }
        }
        *tsv << '\t' << format_score(r.rec.total) << '\n';
      }
    }
  }
  pipeline.check_length(summary.pairs);
  return summary;
}

inline std::vector<ScoreRecord> score_pairs(const Pipeline& pipeline, const std::vector<SentencePair>& pairs,
                                            std::size_t workers = 1) {
  auto records = parallel_map<ScoreRecord>(pairs.size(), workers,
                                           [&](std::size_t i) { return pipeline.score(pairs[i]); });
  pipeline.check_length(pairs.size());
  return records;
}

// Per-line product of clamped values across equally long score columns.
inline std::vector<double> merge_scores(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw UsageError("merge needs at least one score column");
  const std::size_t n = columns.front().size();
  for (std::size_t c = 1; c < columns.size(); ++c)
    if (columns[c].size() != n)
      throw DataError("score columns differ in length: " + std::to_string(n) + " vs " +
                      std::to_string(columns[c].size()));
  std::vector<double> out(n);
  std::vector<std::pair<std::string, double>> partials(columns.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) partials[c] = {"column " + std::to_string(c + 1), columns[c][i]};
    try {
      out[i] = combine(partials);
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
  }
  return out;
}

struct ScoreStats {
  std::size_t count = 0;
  std::size_t nonzero = 0;
  std::vector<std::pair<double, double>> quantiles;  // (q, value); empty when count == 0
  std::vector<std::size_t> histogram;               // bins over [0,1], outliers in end bins
};

inline ScoreStats score_stats(std::vector<double> values, std::size_t bins = 10) {
  ScoreStats st;
  st.count = values.size();
  st.histogram.assign(bins, 0);
  for (double v : values) {
    if (std::isnan(v)) throw DataError("score is NaN");
    st.nonzero += (v != 0.0);
    const double x = std::clamp(v, 0.0, 1.0);
    st.histogram[std::min<std::size_t>(bins - 1, static_cast<std::size_t>(x * static_cast<double>(bins)))]++;
  }
  if (values.empty()) return st;
  std::sort(values.begin(), values.end());
  for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    // Linear interpolation between closest ranks.
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double v = values[lo] == values[hi] ? values[lo] : values[lo] + frac * (values[hi] - values[lo]);
    st.quantiles.emplace_back(q, v);
  }
  return st;
}

inline void print_stats(const ScoreStats& st, std::ostream& out) {
  out << "count\t" << st.count << '\n';
  out << "nonzero\t" << st.nonzero << '\n';
  out << "nonzero_fraction\t" << (st.count ? format_score(static_cast<double>(st.nonzero) / st.count) : "nan")
      << '\n';
  for (const auto& [q, v] : st.quantiles) out << "q" << format_score(q) << '\t' << format_score(v) << '\n';
}

inline void print_histogram(const ScoreStats& st, std::ostream& out) {
  out << "bin_low\tbin_high\tcount\n";
  const double width = 1.0 / static_cast<double>(st.histogram.size());
  for (std::size_t b = 0; b < st.histogram.size(); ++b)
    out << format_score(b * width) << '\t' << format_score((b + 1) * width) << '\t' << st.histogram[b] << '\n';
}

}  // namespace bitext
