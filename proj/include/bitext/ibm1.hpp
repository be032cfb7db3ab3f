#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/errors.hpp"

namespace bitext {

struct Ibm1Options {
  int iterations = 5;
  bool lowercase = true;
};

using TokenPair = std::pair<TokenSeq, TokenSeq>;

// IBM Model 1 lexical translation table t(trg | src) with a NULL source word.
// Realizes P(y|x) = prod_t (1/(|x|+1)) sum_j t(y_t | x_j), j over NULL and x.
class LexicalModel {
 public:
  static constexpr std::string_view kNull = "<null>";
  static constexpr std::string_view kFormatTag = "bitext-ibm1";
  static constexpr int kFormatVersion = 1;
  static constexpr double kFloor = 1e-9;

  struct Entry {
    std::string src;
    std::string trg;
    double prob;
  };

  // EM from a uniform table. `log_likelihood`, when given, receives the corpus
  // log-likelihood of the initial table followed by that after each iteration.
  static LexicalModel train(const std::vector<TokenPair>& corpus, const Ibm1Options& opts,
                            std::vector<double>* log_likelihood = nullptr) {
    if (opts.iterations < 1) throw UsageError("IBM Model 1 needs at least one iteration");
    LexicalModel m;
    m.lowercase_ = opts.lowercase;
    std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> data;
    data.reserve(corpus.size());
    for (const auto& [src, trg] : corpus) {
      if (src.empty() || trg.empty()) continue;
      std::vector<std::uint32_t> s{0}, t;
      for (const auto& w : src) s.push_back(m.intern(m.src_ids_, m.src_words_, m.norm(w)));
      for (const auto& w : trg) t.push_back(m.intern(m.trg_ids_, m.trg_words_, m.norm(w)));
      data.emplace_back(std::move(s), std::move(t));
    }
    if (data.empty()) throw DataError("cannot train IBM Model 1 on an empty bitext");

    const double uniform = 1.0 / static_cast<double>(m.trg_words_.size());
    m.table_.assign(m.src_words_.size(), {});
    // Every co-occurring (src, trg) cell starts at the uniform value; cells that
    // never co-occur keep zero expected count and vanish after the first M-step.
    for (const auto& [s, t] : data)
      for (auto e : s)
        for (auto f : t) m.table_[e].emplace(f, uniform);

    if (log_likelihood) log_likelihood->clear();
    std::vector<std::unordered_map<std::uint32_t, double>> counts(m.src_words_.size());
    for (int it = 0; it < opts.iterations; ++it) {
      for (auto& row : counts)
        for (auto& [f, c] : row) c = 0.0;
      double ll = 0.0;
      for (const auto& [s, t] : data) {
        for (auto f : t) {
          double denom = 0.0;
          for (auto e : s) denom += m.table_[e].at(f);
          ll += std::log(denom / static_cast<double>(s.size()));
          for (auto e : s) counts[e][f] += m.table_[e].at(f) / denom;
        }
      }
      if (log_likelihood) log_likelihood->push_back(ll);
      for (std::size_t e = 0; e < counts.size(); ++e) {
        double total = 0.0;
        for (const auto& [f, c] : counts[e]) total += c;
        for (auto& [f, p] : m.table_[e]) p = total > 0 ? counts[e][f] / total : 0.0;
      }
    }
    if (log_likelihood) log_likelihood->push_back(m.corpus_log_likelihood(data));
    return m;
  }

  static LexicalModel train_bitext(const std::vector<SentencePair>& pairs, const Ibm1Options& opts,
                                   bool reverse = false) {
    std::vector<TokenPair> corpus;
    corpus.reserve(pairs.size());
    for (const auto& p : pairs) {
      if (reverse)
        corpus.emplace_back(tokenize(p.trg_raw), tokenize(p.src_raw));
      else
        corpus.emplace_back(tokenize(p.src_raw), tokenize(p.trg_raw));
    }
    return train(corpus, opts);
  }

  // Builds a model from explicit entries; use kNull as the NULL source word.
  static LexicalModel from_entries(const std::vector<Entry>& entries, bool lowercase = false) {
    LexicalModel m;
    m.lowercase_ = lowercase;
    for (const auto& e : entries) {
      if (!(e.prob >= 0.0) || !std::isfinite(e.prob)) throw ModelError("invalid probability for " + e.src);
      const auto s = e.src == kNull ? 0u : m.intern(m.src_ids_, m.src_words_, m.norm(e.src));
      const auto t = m.intern(m.trg_ids_, m.trg_words_, m.norm(e.trg));
      if (m.table_.size() <= s) m.table_.resize(s + 1);
      m.table_[s][t] = e.prob;
    }
    m.table_.resize(m.src_words_.size());
    return m;
  }

  bool lowercase() const { return lowercase_; }

  double t(std::string_view trg, std::string_view src) const {
    const auto s = src == kNull ? std::optional<std::uint32_t>(0) : find(src_ids_, norm(src));
    const auto f = find(trg_ids_, norm(trg));
    if (!s || !f) return 0.0;
    const auto& row = table_[*s];
    const auto it = row.find(*f);
    return it == row.end() ? 0.0 : it->second;
  }

  // Source words (kNull first) and their row sums, for normalization checks.
  std::vector<std::pair<std::string, double>> row_sums() const {
    std::vector<std::pair<std::string, double>> sums;
    for (std::size_t s = 0; s < table_.size(); ++s) {
      double total = 0.0;
      for (const auto& [f, p] : table_[s]) total += p;
      sums.emplace_back(src_words_[s], total);
    }
    return sums;
  }

  // P(y_t | x) for one target token, averaged over NULL and the source words, floored.
  double token_prob(const std::vector<std::optional<std::uint32_t>>& src, std::string_view trg_word) const {
    const auto f = find(trg_ids_, norm(trg_word));
    double sum = 0.0;
    if (f) {
      for (const auto& s : src) {
        if (!s) continue;
        const auto& row = table_[*s];
        const auto it = row.find(*f);
        if (it != row.end()) sum += it->second;
      }
    }
    return std::max(sum / static_cast<double>(src.size()), kFloor);
  }

  // H(y|x) = -(1/|y|) sum_t ln P(y_t | x), nats per target token.
  double cond_cross_entropy(const TokenSeq& x, const TokenSeq& y) const {
    if (x.empty() || y.empty()) throw DataError("conditional cross-entropy is undefined for empty sentence");
    std::vector<std::optional<std::uint32_t>> src;
    src.reserve(x.size() + 1);
    src.emplace_back(0u);
    for (const auto& w : x) src.push_back(find(src_ids_, norm(w)));
    double sum = 0.0;
    for (const auto& w : y) sum -= std::log(token_prob(src, w));
    return sum / static_cast<double>(y.size());
  }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    for (std::size_t s = 0; s < table_.size(); ++s)
      for (const auto& [f, p] : table_[s]) out.push_back({src_words_[s], trg_words_[f], p});
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.src, a.trg) < std::tie(b.src, b.trg);
    });
    return out;
  }

  // Plain-text (src, trg, prob) dump, sorted.
  void dump(std::ostream& out) const {
    for (const auto& e : entries()) out << e.src << '\t' << e.trg << '\t' << format_score(e.prob) << '\n';
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write " + path);
    out << kFormatTag << ' ' << kFormatVersion << '\n';
    out << "lowercase " << (lowercase_ ? 1 : 0) << '\n';
    dump(out);
    if (!out) throw ModelError("write failed for " + path);
  }

  static LexicalModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model " + path);
    std::string tag, word;
    int version = 0, lower = 0;
    if (!(in >> tag >> version) || tag != kFormatTag) throw ModelError(path + ": not an IBM Model 1 table");
    if (version > kFormatVersion)
      throw ModelError(path + ": format version " + std::to_string(version) + " is newer than supported " +
                       std::to_string(kFormatVersion));
    if (!(in >> word >> lower) || word != "lowercase") throw ModelError(path + ": bad lowercase line");
    std::string line;
    std::getline(in, line);
    std::vector<Entry> entries;
    while (std::getline(in, line)) {
      const auto a = line.find('\t');
      const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
      if (b == std::string::npos) throw ModelError(path + ": malformed table line");
      const auto p = parse_double(std::string_view(line).substr(b + 1));
      if (!p) throw ModelError(path + ": bad probability");
      entries.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1), *p});
    }
    // Stored words are already normalized.
    return from_entries(entries, false).with_lowercase(lower != 0);
  }

 private:
  LexicalModel() {
    src_ids_.emplace(std::string(kNull), 0);
    src_words_.emplace_back(kNull);
  }

  LexicalModel with_lowercase(bool lower) && {
    lowercase_ = lower;
    return std::move(*this);
  }

  std::string norm(std::string_view w) const { return lowercase_ ? utf8::to_lower(w) : std::string(w); }

  static std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& ids, std::vector<std::string>& words,
                              const std::string& w) {
    auto [it, inserted] = ids.emplace(w, static_cast<std::uint32_t>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  }
  static std::optional<std::uint32_t> find(const std::unordered_map<std::string, std::uint32_t>& ids,
                                           const std::string& w) {
    const auto it = ids.find(w);
    if (it == ids.end()) return std::nullopt;
    return it->second;
  }

  double corpus_log_likelihood(
      const std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>>& data) const {
    double ll = 0.0;
    for (const auto& [s, t] : data) {
      for (auto f : t) {
        double sum = 0.0;
        for (auto e : s) sum += table_[e].at(f);
        ll += std::log(sum / static_cast<double>(s.size()));
      }
    }
    return ll;
  }

  bool lowercase_ = true;
  std::unordered_map<std::string, std::uint32_t> src_ids_;
  std::unordered_map<std::string, std::uint32_t> trg_ids_;
  std::vector<std::string> src_words_;
  std::vector<std::string> trg_words_;
  std::vector<std::unordered_map<std::uint32_t, double>> table_;
};

// Per-line cross-entropies computed elsewhere (e.g. by a neural system), nats/token.
struct ExternalEntropyColumn {
  std::vector<double> values;
};

// One entropy per line; each must be finite and >= 0.
inline std::vector<double> read_entropy_column(const std::string& path) {
  std::vector<double> values;
  LineReader reader(path);
  while (auto l = reader.next()) {
    const auto v = parse_double(*l);
    if (!v) throw DataError(path + ": cannot parse entropy '" + *l + "'", reader.line());
    if (!std::isfinite(*v) || *v < 0) throw DataError(path + ": entropy must be finite and >= 0", reader.line());
    values.push_back(*v);
  }
  return values;
}

inline ExternalEntropyColumn load_entropy_column(const std::string& path, std::size_t corpus_len) {
  ExternalEntropyColumn col{read_entropy_column(path)};
  if (col.values.size() != corpus_len)
    throw DataError(path + ": " + std::to_string(col.values.size()) + " entropies for a corpus of " +
                    std::to_string(corpus_len) + " pairs");
  return col;
}

}  // namespace bitext
