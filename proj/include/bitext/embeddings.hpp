#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/errors.hpp"
#include "bitext/utf8.hpp"

namespace bitext {

// Static word vectors in word2vec text format. The "count dim" header line
// is optional. Lookups are lowercased; a token that misses is retried with
// surrounding punctuation stripped.
class Embeddings {
 public:
  static Embeddings load(const std::string& path) {
    Embeddings e;
    LineReader reader(path);
    try {
      while (auto line = reader.next()) {
        const auto fields = tokenize(*line);
        if (fields.empty()) continue;
        if (reader.line() == 1 && fields.size() == 2 && parse_double(fields[0]) && parse_double(fields[1]) &&
            fields[0].find('.') == std::string::npos)
          continue;
        std::vector<double> v;
        v.reserve(fields.size() - 1);
        for (std::size_t k = 1; k < fields.size(); ++k) {
          const auto x = parse_double(fields[k]);
          if (!x || !std::isfinite(*x)) throw DataError(path + ": bad vector component", reader.line());
          v.push_back(*x);
        }
        if (v.empty()) throw DataError(path + ": token without a vector", reader.line());
        if (e.dim_ == 0) e.dim_ = v.size();
        if (v.size() != e.dim_) throw DataError(path + ": inconsistent vector dimension", reader.line());
        e.vectors_.emplace(utf8::to_lower(fields[0]), std::move(v));
      }
    } catch (const DataError& err) {
      throw ModelError(err.what());
    }
    if (e.vectors_.empty()) throw ModelError(path + ": no vectors");
    return e;
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  const std::vector<double>* find(std::string_view token) const {
    const auto lower = utf8::to_lower(token);
    if (auto it = vectors_.find(lower); it != vectors_.end()) return &it->second;
    const auto stripped = strip_punct(lower);
    if (stripped.empty() || stripped == lower) return nullptr;
    if (auto it = vectors_.find(stripped); it != vectors_.end()) return &it->second;
    return nullptr;
  }

  // Vectors of the known tokens of a sentence, in order; unknown tokens are skipped.
  std::vector<std::vector<double>> lookup(const TokenSeq& tokens) const {
    std::vector<std::vector<double>> out;
    for (const auto& t : tokens)
      if (const auto* v = find(t)) out.push_back(*v);
    return out;
  }

 private:
  static bool is_punct(char32_t c) {
    return (c < 0x80 && std::string_view("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~").find(static_cast<char>(c)) !=
                            std::string_view::npos) ||
           c == U'«' || c == U'»' || c == U'„' || c == U'“' || c == U'”' || c == U'‘' || c == U'’' || c == U'…';
  }
  static std::string strip_punct(std::string_view s) {
    const auto cps = utf8::decode(s);
    std::size_t b = 0, e = cps.size();
    while (b < e && is_punct(cps[b])) ++b;
    while (e > b && is_punct(cps[e - 1])) --e;
    return utf8::encode(std::u32string_view(cps).substr(b, e - b));
  }

  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

}  // namespace bitext
