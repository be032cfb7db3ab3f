#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/errors.hpp"

namespace bitext {

// Outcome of budgeted threshold selection. Every selected pair has
// score >= threshold and score > 0. When the nonzero pairs hold fewer than
// `budget` words all of them are selected and `exhausted` is set.
struct SelectionResult {
  double threshold = 0.0;
  std::vector<std::size_t> selected_ids;
  std::uint64_t achieved_words = 0;
  std::uint64_t budget = 0;
  bool exhausted = false;
};

namespace detail {

inline void check_score(double s, std::size_t line) {
  if (std::isnan(s)) throw DataError("score is NaN", line);
}

// Walks (score, words) groups in descending score order and returns the first
// score at which the running word total reaches `budget`.
template <typename Groups>
std::pair<double, bool> find_threshold(const Groups& descending, std::uint64_t words_above, std::uint64_t budget) {
  std::uint64_t running = words_above;
  double last = 0.0;
  for (const auto& [score, words] : descending) {
    running += words;
    last = score;
    if (running >= budget) return {score, true};
  }
  return {last, false};
}

}  // namespace detail

// In-memory reference path: sorts the distinct nonzero scores.
inline SelectionResult select_by_budget(std::span<const double> scores, std::span<const std::uint64_t> counts,
                                        std::uint64_t budget) {
  if (scores.size() != counts.size())
    throw DataError("scores and word counts differ in length: " + std::to_string(scores.size()) + " vs " +
                    std::to_string(counts.size()));
  if (budget < 1) throw UsageError("word budget must be >= 1");
  std::map<double, std::uint64_t, std::greater<>> groups;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    detail::check_score(scores[i], i + 1);
    if (scores[i] > 0) groups[scores[i]] += counts[i];
  }
  SelectionResult result;
  result.budget = budget;
  auto [threshold, met] = detail::find_threshold(groups, 0, budget);
  result.exhausted = !met;
  result.threshold = groups.empty() ? 0.0 : threshold;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0 && scores[i] >= result.threshold && !groups.empty()) {
      result.selected_ids.push_back(i);
      result.achieved_words += counts[i];
    }
  }
  return result;
}

// Streaming selection over a score file and the target half of the corpus.
// Pass one histograms word counts by the high 32 bits of each positive score
// (monotone in the score for positive doubles); pass two resolves the exact
// threshold inside the boundary bucket. Memory grows with the number of
// occupied buckets, not with the corpus.
class StreamingSelector {
 public:
  StreamingSelector(std::string scores_path, std::string trg_path)
      : scores_path_(std::move(scores_path)), trg_path_(std::move(trg_path)) {}

  SelectionResult select(std::uint64_t budget, bool collect_ids = true) const {
    if (budget < 1) throw UsageError("word budget must be >= 1");
    std::map<std::uint32_t, std::uint64_t, std::greater<>> buckets;
    scan([&](std::size_t, double s, std::uint64_t w) {
      if (s > 0) buckets[bucket(s)] += w;
    });

    SelectionResult result;
    result.budget = budget;
    if (buckets.empty()) {
      result.exhausted = true;
      return result;
    }
    std::uint64_t above = 0;
    std::uint32_t boundary = buckets.rbegin()->first;
    bool met = false;
    for (const auto& [b, w] : buckets) {
      if (above + w >= budget) {
        boundary = b;
        met = true;
        break;
      }
      above += w;
    }
    if (!met) {
      // Everything nonzero is selected; the threshold is the smallest positive score.
      above = 0;
      for (auto it = buckets.begin(); std::next(it) != buckets.end(); ++it) above += it->second;
    }

    std::map<double, std::uint64_t, std::greater<>> exact;
    scan([&](std::size_t, double s, std::uint64_t w) {
      if (s > 0 && bucket(s) == boundary) exact[s] += w;
    });
    const auto [threshold, found] = detail::find_threshold(exact, above, budget);
    result.threshold = threshold;
    result.exhausted = !found;

    scan([&](std::size_t id, double s, std::uint64_t w) {
      if (s > 0 && s >= result.threshold) {
        if (collect_ids) result.selected_ids.push_back(id);
        result.achieved_words += w;
      }
    });
    return result;
  }

 private:
  static std::uint32_t bucket(double s) { return static_cast<std::uint32_t>(std::bit_cast<std::uint64_t>(s) >> 32); }

  template <typename Fn>
  void scan(Fn&& fn) const {
    LineReader scores(scores_path_);
    LineReader trg(trg_path_);
    std::size_t id = 0;
    while (true) {
      auto s = scores.next();
      auto t = trg.next();
      if (!s && !t) break;
      if (!s || !t)
        throw DataError("score file and corpus differ in length: " + scores_path_ + " vs " + trg_path_,
                        std::max(scores.line(), trg.line()));
      const auto v = parse_double(*s);
      if (!v) throw DataError(scores_path_ + ": cannot parse score '" + *s + "'", scores.line());
      detail::check_score(*v, scores.line());
      fn(id++, *v, static_cast<std::uint64_t>(tokenize(*t).size()));
    }
  }

  std::string scores_path_;
  std::string trg_path_;
};

// Writes the selected pairs, in corpus order, to two line-aligned files.
inline void emit_subset(const SelectionResult& result, const std::string& src_path, const std::string& trg_path,
                        const std::string& out_src, const std::string& out_trg) {
  std::vector<std::size_t> ids = result.selected_ids;
  std::sort(ids.begin(), ids.end());
  std::ofstream os(out_src, std::ios::binary), ot(out_trg, std::ios::binary);
  if (!os || !ot) throw DataError("cannot write " + out_src + " / " + out_trg);
  BitextReader reader(src_path, trg_path);
  std::size_t next = 0;
  std::size_t lines = 0;
  while (auto pair = reader.next()) {
    ++lines;
    if (next < ids.size() && ids[next] == pair->id) {
      os << pair->src_raw << '\n';
      ot << pair->trg_raw << '\n';
      ++next;
    }
  }
  if (next < ids.size())
    throw DataError("selected id " + std::to_string(ids[next]) + " is out of range for a corpus of " +
                    std::to_string(lines) + " pairs");
}

}  // namespace bitext
