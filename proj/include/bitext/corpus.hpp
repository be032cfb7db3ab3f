#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitext/errors.hpp"
#include "bitext/utf8.hpp"

namespace bitext {

// One line-aligned (source, target) pair. `id` is the zero-based line index.
struct SentencePair {
  std::size_t id = 0;
  std::string src_raw;
  std::string trg_raw;
};

using TokenSeq = std::vector<std::string>;

// Splits on Unicode whitespace. No other normalization.
inline TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const auto cp = utf8::decode_one(text, pos);
    if (!cp) ++pos;
    const bool space = cp && utf8::is_space(*cp);
    if (space) {
      if (start != std::string_view::npos) tokens.emplace_back(text.substr(start, here - start));
      start = std::string_view::npos;
    } else if (start == std::string_view::npos) {
      start = here;
    }
  }
  if (start != std::string_view::npos) tokens.emplace_back(text.substr(start));
  return tokens;
}

inline std::string join(const TokenSeq& tokens, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

// Budget counting unit: whitespace tokens on the target side.
inline std::size_t trg_word_count(const SentencePair& pair) { return tokenize(pair.trg_raw).size(); }

// Line reader that validates UTF-8 and tracks the 1-based line number.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open " + path);
  }

  std::optional<std::string> next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    if (!utf8::valid(line)) throw DataError(path_ + ": invalid UTF-8", line_);
    return line;
  }

  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

// Streams line-aligned pairs from two files.
class BitextReader {
 public:
  BitextReader(const std::string& src_path, const std::string& trg_path) : src_(src_path), trg_(trg_path) {}

  std::optional<SentencePair> next() {
    auto s = src_.next();
    auto t = trg_.next();
    if (s && t) return SentencePair{next_id_++, std::move(*s), std::move(*t)};
    if (!s && !t) return std::nullopt;
    // One side ran out: count the rest of the other to report both totals.
    std::size_t src_count = src_.line();
    std::size_t trg_count = trg_.line();
    if (s) {
      while (src_.next()) {
      }
      src_count = src_.line();
    } else {
      while (trg_.next()) {
      }
      trg_count = trg_.line();
    }
    throw DataError("line count mismatch " + std::to_string(src_count) + " vs " + std::to_string(trg_count));
  }

 private:
  LineReader src_;
  LineReader trg_;
  std::size_t next_id_ = 0;
};

inline std::vector<SentencePair> read_bitext(const std::string& src_path, const std::string& trg_path) {
  std::vector<SentencePair> pairs;
  BitextReader reader(src_path, trg_path);
  while (auto p = reader.next()) pairs.push_back(std::move(*p));
  return pairs;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  LineReader reader(path);
  while (auto l = reader.next()) lines.push_back(std::move(*l));
  return lines;
}

// Shortest decimal form that parses back to the identical double.
inline std::string format_score(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

// One number per line. Non-numeric lines are a DataError naming the line.
inline std::vector<double> read_score_file(const std::string& path) {
  std::vector<double> values;
  LineReader reader(path);
  while (auto l = reader.next()) {
    const auto v = parse_double(*l);
    if (!v) throw DataError(path + ": cannot parse number '" + *l + "'", reader.line());
    values.push_back(*v);
  }
  return values;
}

inline void write_score_file(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (double v : values) out << format_score(v) << '\n';
}

}  // namespace bitext
