#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/errors.hpp"

namespace bitext {

enum class Smoothing { none, witten_bell };

inline std::string_view smoothing_name(Smoothing s) { return s == Smoothing::none ? "none" : "witten-bell"; }

inline Smoothing parse_smoothing(std::string_view name) {
  if (name == "none") return Smoothing::none;
  if (name == "witten-bell") return Smoothing::witten_bell;
  throw UsageError("unknown smoothing '" + std::string(name) + "'");
}

struct LmOptions {
  int order = 3;
  Smoothing smoothing = Smoothing::witten_bell;
};

// Word n-gram language model.
//
// Witten-Bell mode interpolates every order down to a unigram distribution
// that is itself interpolated with a uniform floor. The event space is the
// training vocabulary plus </s> plus <unk>; <unk> receives one pseudo-count
// per singleton type. Sentences are padded with order-1 <s> symbols and the
// </s> event is scored, but |x| in the normalization counts only real tokens.
//
// `none` mode keeps raw relative frequencies with no padding events beyond
// the <s> context and no </s>: it exists for hand-checkable tests and
// refuses to score unseen events.
class NGramModel {
 public:
  static constexpr std::string_view kUnk = "<unk>";
  static constexpr std::string_view kBos = "<s>";
  static constexpr std::string_view kEos = "</s>";
  static constexpr std::string_view kFormatTag = "bitext-ngram-lm";
  static constexpr int kFormatVersion = 1;

  static NGramModel train(const std::vector<TokenSeq>& sentences, const LmOptions& opts) {
    if (opts.order < 1 || opts.order > 5) throw UsageError("n-gram order must be in 1..5");
    NGramModel m;
    m.order_ = opts.order;
    m.smoothing_ = opts.smoothing;
    m.counts_.resize(m.order_);
    std::unordered_map<std::uint32_t, std::uint64_t> type_freq;
    bool any = false;
    std::vector<std::uint32_t> ids;
    for (const auto& sentence : sentences) {
      if (sentence.empty()) continue;
      any = true;
      m.training_ids(sentence, ids);
      const std::size_t first = m.order_ - 1;
      for (std::size_t pos = first; pos < ids.size(); ++pos) {
        if (ids[pos] != kEosId) ++type_freq[ids[pos]];
        for (int n = 1; n <= m.order_; ++n) ++m.counts_[n - 1][key(ids, pos + 1 - n, n)];
      }
    }
    if (!any) throw DataError("cannot train a language model on an empty corpus");
    if (m.smoothing_ == Smoothing::witten_bell) {
      std::uint64_t singletons = 0;
      for (const auto& [id, c] : type_freq) singletons += (c == 1);
      if (singletons) m.counts_[0][key1(kUnkId)] += singletons;
    }
    m.finalize();
    return m;
  }

  static NGramModel train_file(const std::string& path, const LmOptions& opts) {
    if (opts.order < 1 || opts.order > 5) throw UsageError("n-gram order must be in 1..5");
    std::vector<TokenSeq> sentences;
    LineReader reader(path);
    while (auto line = reader.next()) sentences.push_back(tokenize(*line));
    return train(sentences, opts);
  }

  int order() const { return order_; }
  Smoothing smoothing() const { return smoothing_; }

  // Size of the predicted event space: vocabulary, </s> and <unk>.
  std::size_t event_count() const { return events_.size(); }
  const std::vector<std::uint32_t>& events() const { return events_; }
  const std::string& word(std::uint32_t id) const { return words_.at(id); }

  // ln P(w | history); `context` holds the preceding ids, most recent last.
  double log_prob(std::uint32_t w, std::span<const std::uint32_t> context) const {
    const std::size_t h = std::min<std::size_t>(context.size(), order_ - 1);
    return std::log(prob(w, context.subspan(context.size() - h)));
  }

  // Number of scored events in x: its tokens plus </s> when the model scores it.
  std::size_t event_positions(const TokenSeq& x) const { return x.size() + (scores_eos() ? 1 : 0); }

  // Sum of -ln P(e_t | history) over events [begin, end) of x, where event
  // x.size() is </s> (see event_positions).
  double neg_log_prob(const TokenSeq& x, std::size_t begin, std::size_t end) const {
    std::vector<std::uint32_t> ids;
    padded_ids(x, ids);
    const std::size_t first = order_ - 1;
    double sum = 0.0;
    for (std::size_t t = begin; t < std::min(end, event_positions(x)); ++t) {
      const std::size_t pos = first + t;
      const std::span<const std::uint32_t> context(ids.data() + pos + 1 - order_, order_ - 1);
      const double p = prob(ids[pos], context);
      if (!(p > 0.0)) {
        const std::string token = t < x.size() ? x[t] : std::string(kEos);
        throw DataError("zero-probability event for token '" + token + "' at position " + std::to_string(t));
      }
      sum -= std::log(p);
    }
    return sum;
  }

  // H_M(x) = -(1/|x|) ln P_M(x), natural log, nats per token.
  double cross_entropy(const TokenSeq& x) const {
    if (x.empty()) throw DataError("cross-entropy is undefined for empty input");
    return neg_log_prob(x, 0, event_positions(x)) / static_cast<double>(x.size());
  }

  double perplexity(const TokenSeq& x) const { return std::exp(cross_entropy(x)); }

  // Conditional distribution over the full event space, for normalization checks.
  double prob_of(std::string_view w, const TokenSeq& history) const {
    std::vector<std::uint32_t> ctx;
    for (const auto& t : history) ctx.push_back(lookup(t));
    const std::size_t h = std::min<std::size_t>(ctx.size(), order_ - 1);
    return prob(lookup(w), std::span<const std::uint32_t>(ctx).subspan(ctx.size() - h));
  }

  // Plain-text (n-gram, count) dump, sorted, one entry per line.
  void dump(std::ostream& out) const {
    for (int n = 1; n <= order_; ++n) {
      std::vector<std::pair<std::string, std::uint64_t>> rows;
      rows.reserve(counts_[n - 1].size());
      for (const auto& [k, c] : counts_[n - 1]) rows.emplace_back(key_text(k), c);
      std::sort(rows.begin(), rows.end());
      for (const auto& [text, c] : rows) out << text << '\t' << c << '\n';
    }
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write " + path);
    out << kFormatTag << ' ' << kFormatVersion << '\n';
    out << "order " << order_ << '\n';
    out << "smoothing " << smoothing_name(smoothing_) << '\n';
    dump(out);
    if (!out) throw ModelError("write failed for " + path);
  }

  static NGramModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model " + path);
    std::string tag, word;
    int version = 0;
    if (!(in >> tag >> version) || tag != kFormatTag) throw ModelError(path + ": not an n-gram model");
    if (version > kFormatVersion)
      throw ModelError(path + ": format version " + std::to_string(version) + " is newer than supported " +
                       std::to_string(kFormatVersion));
    NGramModel m;
    std::string smoothing;
    if (!(in >> word >> m.order_) || word != "order" || m.order_ < 1 || m.order_ > 5)
      throw ModelError(path + ": bad order line");
    if (!(in >> word >> smoothing) || word != "smoothing") throw ModelError(path + ": bad smoothing line");
    try {
      m.smoothing_ = parse_smoothing(smoothing);
    } catch (const UsageError& e) {
      throw ModelError(path + ": " + e.what());
    }
    m.counts_.resize(m.order_);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto tab = line.rfind('\t');
      if (tab == std::string::npos) throw ModelError(path + ": malformed count line");
      const TokenSeq gram = tokenize(std::string_view(line).substr(0, tab));
      if (gram.empty() || static_cast<int>(gram.size()) > m.order_) throw ModelError(path + ": bad n-gram length");
      std::uint64_t c = 0;
      try {
        c = std::stoull(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw ModelError(path + ": bad count");
      }
      std::string k;
      for (const auto& t : gram) append_id(k, m.intern(t));
      m.counts_[gram.size() - 1][k] = c;
    }
    if (m.counts_[0].empty()) throw ModelError(path + ": no unigram counts");
    m.finalize();
    return m;
  }

 private:
  static constexpr std::uint32_t kUnkId = 0;
  static constexpr std::uint32_t kBosId = 1;
  static constexpr std::uint32_t kEosId = 2;

  struct HistoryStats {
    std::uint64_t total = 0;
    std::uint64_t types = 0;
  };

  NGramModel() {
    for (auto s : {kUnk, kBos, kEos}) intern(std::string(s));
  }

  bool scores_eos() const { return smoothing_ == Smoothing::witten_bell; }

  static void append_id(std::string& k, std::uint32_t id) {
    k.append(reinterpret_cast<const char*>(&id), sizeof id);
  }
  static std::string key(const std::vector<std::uint32_t>& ids, std::size_t from, int n) {
    std::string k;
    k.reserve(n * sizeof(std::uint32_t));
    for (int i = 0; i < n; ++i) append_id(k, ids[from + i]);
    return k;
  }
  static std::string key1(std::uint32_t id) {
    std::string k;
    append_id(k, id);
    return k;
  }
  static std::string key(std::span<const std::uint32_t> ids) {
    std::string k;
    for (auto id : ids) append_id(k, id);
    return k;
  }
  std::string key_text(const std::string& k) const {
    std::string out;
    for (std::size_t i = 0; i < k.size(); i += sizeof(std::uint32_t)) {
      std::uint32_t id;
      std::memcpy(&id, k.data() + i, sizeof id);
      if (i) out += ' ';
      out += words_[id];
    }
    return out;
  }

  std::uint32_t intern(const std::string& w) {
    auto [it, inserted] = ids_.emplace(w, static_cast<std::uint32_t>(words_.size()));
    if (inserted) words_.push_back(w);
    return it->second;
  }
  std::uint32_t lookup(std::string_view w) const {
    auto it = ids_.find(std::string(w));
    return it == ids_.end() ? kUnkId : it->second;
  }

  // order-1 <s> symbols, the tokens, then </s> when it is an event.
  void training_ids(const TokenSeq& x, std::vector<std::uint32_t>& ids) {
    ids.assign(order_ - 1, kBosId);
    for (const auto& t : x) ids.push_back(intern(t));
    if (scores_eos()) ids.push_back(kEosId);
  }
  void padded_ids(const TokenSeq& x, std::vector<std::uint32_t>& ids) const {
    ids.assign(order_ - 1, kBosId);
    for (const auto& t : x) ids.push_back(lookup(t));
    if (scores_eos()) ids.push_back(kEosId);
  }

  void finalize() {
    history_.assign(order_, {});
    for (int n = 2; n <= order_; ++n) {
      auto& hist = history_[n - 1];
      for (const auto& [k, c] : counts_[n - 1]) {
        auto& st = hist[k.substr(0, k.size() - sizeof(std::uint32_t))];
        st.total += c;
        st.types += 1;
      }
    }
    unigram_total_ = 0;
    unigram_types_ = 0;
    for (const auto& [k, c] : counts_[0]) {
      unigram_total_ += c;
      unigram_types_ += (c > 0);
    }
    events_.clear();
    for (std::uint32_t id = 0; id < words_.size(); ++id)
      if (id != kBosId) events_.push_back(id);
  }

  double unigram(std::uint32_t w) const {
    const auto it = counts_[0].find(key1(w));
    const double c = it == counts_[0].end() ? 0.0 : static_cast<double>(it->second);
    const double total = static_cast<double>(unigram_total_);
    if (smoothing_ == Smoothing::none) return c / total;
    const double types = static_cast<double>(unigram_types_);
    return (c + types / static_cast<double>(events_.size())) / (total + types);
  }

  double prob(std::uint32_t w, std::span<const std::uint32_t> context) const {
    if (context.empty()) return unigram(w);
    const int n = static_cast<int>(context.size()) + 1;
    const std::string hkey = key(context);
    const auto hit = history_[n - 1].find(hkey);
    if (smoothing_ == Smoothing::none) {
      if (hit == history_[n - 1].end()) return 0.0;
      const auto it = counts_[n - 1].find(hkey + key1(w));
      const double c = it == counts_[n - 1].end() ? 0.0 : static_cast<double>(it->second);
      return c / static_cast<double>(hit->second.total);
    }
    const double lower = prob(w, context.subspan(1));
    if (hit == history_[n - 1].end()) return lower;
    const auto it = counts_[n - 1].find(hkey + key1(w));
    const double c = it == counts_[n - 1].end() ? 0.0 : static_cast<double>(it->second);
    const double total = static_cast<double>(hit->second.total);
    const double types = static_cast<double>(hit->second.types);
    return (c + types * lower) / (total + types);
  }

  int order_ = 3;
  Smoothing smoothing_ = Smoothing::witten_bell;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> words_;
  std::vector<std::uint32_t> events_;
  // counts_[n-1]: n-gram key -> count.
  std::vector<std::unordered_map<std::string, std::uint64_t>> counts_;
  // history_[n-1]: (n-1)-gram history key -> continuation stats.
  std::vector<std::unordered_map<std::string, HistoryStats>> history_;
  std::uint64_t unigram_total_ = 0;
  std::uint64_t unigram_types_ = 0;
};

}  // namespace bitext
