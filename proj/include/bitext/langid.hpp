#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/errors.hpp"
#include "bitext/utf8.hpp"

namespace bitext {

inline constexpr std::string_view kUndetermined = "und";

// Character n-gram language identifier (orders 1..kMaxOrder, additive smoothing).
//
// Text is lowercased, whitespace runs collapse to one space, and a space pads
// both ends. For each order the observed n-grams get (c + alpha) / Z and one
// shared unseen reserve gets alpha / Z, with Z = N + alpha * (V + 1).
class LangIdModel {
 public:
  static constexpr int kMaxOrder = 3;
  static constexpr std::string_view kFormatTag = "bitext-langid";
  static constexpr int kFormatVersion = 1;

  struct OrderTable {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
  };

  static LangIdModel train(const std::map<std::string, std::vector<std::string>>& samples, double alpha = 0.5) {
    if (samples.size() < 2) throw UsageError("language identification needs >= 2 languages");
    if (!(alpha > 0)) throw UsageError("smoothing constant must be positive");
    LangIdModel m;
    m.alpha_ = alpha;
    for (const auto& [lang, lines] : samples) {
      if (lang.empty() || lang == kUndetermined) throw UsageError("invalid language code '" + lang + "'");
      Language language;
      language.code = lang;
      language.orders.resize(kMaxOrder);
      for (const auto& line : lines) {
        const auto text = normalize(line);
        if (text.size() <= 2) continue;
        for (int n = 1; n <= kMaxOrder; ++n) {
          auto& table = language.orders[n - 1];
          for (std::size_t i = 0; i + n <= text.size(); ++i) {
            ++table.counts[utf8::encode(std::u32string_view(text).substr(i, n))];
            ++table.total;
          }
        }
      }
      if (language.orders[0].total == 0) throw DataError("sample text for language '" + lang + "' is empty");
      m.languages_.push_back(std::move(language));
    }
    m.finalize();
    return m;
  }

  static LangIdModel train_files(const std::map<std::string, std::string>& sample_paths, double alpha = 0.5) {
    if (sample_paths.size() < 2) throw UsageError("language identification needs >= 2 languages");
    std::map<std::string, std::vector<std::string>> samples;
    for (const auto& [lang, path] : sample_paths) samples[lang] = read_lines(path);
    return train(samples, alpha);
  }

  std::vector<std::string> languages() const {
    std::vector<std::string> codes;
    for (const auto& l : languages_) codes.push_back(l.code);
    return codes;
  }

  // Length-normalized log-likelihood of `sentence` under language `index`:
  // the sum over orders of the mean log-probability of that order's n-grams.
  double score(std::size_t index, std::u32string_view text) const {
    const auto& lang = languages_.at(index);
    double total = 0.0;
    for (int n = 1; n <= kMaxOrder; ++n) {
      if (text.size() < static_cast<std::size_t>(n)) continue;
      const auto& table = lang.orders[n - 1];
      const double z = lang.norm[n - 1];
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i + n <= text.size(); ++i, ++count) {
        const auto it = table.counts.find(utf8::encode(text.substr(i, n)));
        const double c = it == table.counts.end() ? 0.0 : static_cast<double>(it->second);
        sum += std::log((c + alpha_) / z);
      }
      total += sum / static_cast<double>(count);
    }
    return total;
  }

  // Argmax language; ties go to the lexicographically smallest code.
  // Fewer than three non-whitespace characters yields "und".
  std::string classify(std::string_view sentence) const {
    const auto text = normalize(sentence);
    std::size_t visible = 0;
    for (char32_t c : text) visible += (c != U' ');
    if (visible < 3) return std::string(kUndetermined);
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < languages_.size(); ++i) {
      const double s = score(i, text);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    return languages_[best].code;
  }

  // Sum of smoothed probabilities over observed n-grams plus the unseen reserve.
  double mass(std::size_t index, int order) const {
    const auto& lang = languages_.at(index);
    const auto& table = lang.orders.at(order - 1);
    const double z = lang.norm[order - 1];
    double sum = alpha_ / z;
    for (const auto& [g, c] : table.counts) sum += (static_cast<double>(c) + alpha_) / z;
    return sum;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write " + path);
    out << kFormatTag << ' ' << kFormatVersion << '\n';
    out << "alpha " << format_score(alpha_) << '\n';
    out << "languages " << languages_.size() << '\n';
    for (const auto& lang : languages_) {
      for (int n = 1; n <= kMaxOrder; ++n) {
        const auto& table = lang.orders[n - 1];
        std::vector<std::pair<std::string, std::uint64_t>> rows(table.counts.begin(), table.counts.end());
        std::sort(rows.begin(), rows.end());
        out << "table " << lang.code << ' ' << n << ' ' << rows.size() << '\n';
        for (const auto& [g, c] : rows) out << c << '\t' << g << '\n';
      }
    }
    if (!out) throw ModelError("write failed for " + path);
  }

  static LangIdModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model " + path);
    const auto bad = [&](const std::string& what) { return ModelError(path + ": " + what); };
    std::string line;
    const auto next = [&]() -> std::string& {
      if (!std::getline(in, line)) throw bad("truncated model");
      return line;
    };
    std::string tag;
    int version = 0;
    {
      std::istringstream head(next());
      if (!(head >> tag >> version) || tag != kFormatTag) throw bad("not a language identification model");
      if (version > kFormatVersion)
        throw bad("format version " + std::to_string(version) + " is newer than supported " +
                  std::to_string(kFormatVersion));
    }
    LangIdModel m;
    std::size_t count = 0;
    {
      std::istringstream a(next());
      std::string word, value;
      if (!(a >> word >> value) || word != "alpha") throw bad("bad alpha line");
      const auto parsed = parse_double(value);
      if (!parsed || !(*parsed > 0)) throw bad("bad alpha value");
      m.alpha_ = *parsed;
      std::istringstream l(next());
      if (!(l >> word >> count) || word != "languages" || count < 2) throw bad("bad languages line");
    }
    for (std::size_t i = 0; i < count; ++i) {
      Language lang;
      lang.orders.resize(kMaxOrder);
      for (int n = 1; n <= kMaxOrder; ++n) {
        std::istringstream h(next());
        std::string word, code;
        int order = 0;
        std::size_t rows = 0;
        if (!(h >> word >> code >> order >> rows) || word != "table" || order != n) throw bad("bad table header");
        if (n == 1) lang.code = code;
        else if (code != lang.code) throw bad("table for unexpected language " + code);
        auto& table = lang.orders[n - 1];
        for (std::size_t r = 0; r < rows; ++r) {
          const auto& row = next();
          const auto tab = row.find('\t');
          if (tab == std::string::npos) throw bad("malformed n-gram row");
          std::uint64_t c = 0;
          try {
            c = std::stoull(row.substr(0, tab));
          } catch (const std::exception&) {
            throw bad("bad n-gram count");
          }
          table.counts[row.substr(tab + 1)] = c;
          table.total += c;
        }
      }
      m.languages_.push_back(std::move(lang));
    }
    m.finalize();
    return m;
  }

  static std::u32string normalize(std::string_view sentence) {
    std::u32string out{U' '};
    for (char32_t c : utf8::decode(sentence)) {
      if (utf8::is_space(c)) {
        if (out.back() != U' ') out.push_back(U' ');
      } else {
        out.push_back(utf8::to_lower(c));
      }
    }
    if (out.back() != U' ') out.push_back(U' ');
    return out;
  }

 private:
  struct Language {
    std::string code;
    std::vector<OrderTable> orders;
    std::vector<double> norm;
  };

  void finalize() {
    std::sort(languages_.begin(), languages_.end(),
              [](const Language& a, const Language& b) { return a.code < b.code; });
    for (std::size_t i = 1; i < languages_.size(); ++i)
      if (languages_[i].code == languages_[i - 1].code) throw ModelError("duplicate language " + languages_[i].code);
    for (auto& lang : languages_) {
      lang.norm.clear();
      for (const auto& table : lang.orders)
        lang.norm.push_back(static_cast<double>(table.total) +
                            alpha_ * static_cast<double>(table.counts.size() + 1));
    }
  }

  double alpha_ = 0.5;
  std::vector<Language> languages_;
};

// Hard gate: 1 iff source and target classify as the expected languages.
inline double lang_gate(const LangIdModel& model, const SentencePair& pair, std::string_view src_lang,
                        std::string_view trg_lang) {
  return model.classify(pair.src_raw) == src_lang && model.classify(pair.trg_raw) == trg_lang ? 1.0 : 0.0;
}

}  // namespace bitext
