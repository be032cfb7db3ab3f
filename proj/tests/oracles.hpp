#pragma once

// Slow, obviously-correct reference implementations used only by the tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bitext::oracle {

using Sentence = std::vector<std::string>;
using Table = std::map<std::pair<std::string, std::string>, double>;  // (src, trg) -> t(trg | src)

inline const std::string kNull = "<null>";

// IBM Model 1 EM by explicit enumeration of every alignment vector a in
// {0..l}^m, with the posterior of each alignment computed from the joint
// P(a, y | x) = prod_j t(y_j | x_{a_j}) / (l+1)^m. Exponential; toy corpora only.
struct Ibm1Oracle {
  std::vector<std::pair<Sentence, Sentence>> corpus;  // NULL not included
  Table table;
  std::vector<double> log_likelihood;

  explicit Ibm1Oracle(std::vector<std::pair<Sentence, Sentence>> c) : corpus(std::move(c)) {
    std::set<std::string> src_vocab{kNull}, trg_vocab;
    for (const auto& [x, y] : corpus) {
      src_vocab.insert(x.begin(), x.end());
      trg_vocab.insert(y.begin(), y.end());
    }
    for (const auto& e : src_vocab)
      for (const auto& f : trg_vocab) table[{e, f}] = 1.0 / static_cast<double>(trg_vocab.size());
  }

  double t(const std::string& f, const std::string& e) const {
    const auto it = table.find({e, f});
    return it == table.end() ? 0.0 : it->second;
  }

  // One EM step; records the log-likelihood of the table before the update.
  void step() {
    Table counts;
    std::map<std::string, double> totals;
    double ll = 0.0;
    for (const auto& [x, y] : corpus) {
      Sentence src{kNull};
      src.insert(src.end(), x.begin(), x.end());
      const std::size_t l1 = src.size(), m = y.size();
      std::vector<std::size_t> a(m, 0);
      std::vector<std::pair<std::vector<std::size_t>, double>> joint;
      double evidence = 0.0;
      while (true) {
        double p = 1.0;
        for (std::size_t j = 0; j < m; ++j) p *= t(y[j], src[a[j]]) / static_cast<double>(l1);
        joint.emplace_back(a, p);
        evidence += p;
        std::size_t j = 0;
        while (j < m && ++a[j] == l1) a[j++] = 0;
        if (j == m) break;
      }
      ll += std::log(evidence);
      for (const auto& [align, p] : joint) {
        const double post = p / evidence;
        for (std::size_t j = 0; j < m; ++j) {
          counts[{src[align[j]], y[j]}] += post;
          totals[src[align[j]]] += post;
        }
      }
    }
    log_likelihood.push_back(ll);
    for (auto& [key, value] : table) {
      const auto c = counts.find(key);
      const auto tot = totals.find(key.first);
      value = (c == counts.end() || tot == totals.end()) ? 0.0 : c->second / tot->second;
    }
  }

  double current_log_likelihood() const {
    double ll = 0.0;
    for (const auto& [x, y] : corpus) {
      Sentence src{kNull};
      src.insert(src.end(), x.begin(), x.end());
      for (const auto& f : y) {
        double s = 0.0;
        for (const auto& e : src) s += t(f, e);
        ll += std::log(s / static_cast<double>(src.size()));
      }
    }
    return ll;
  }
};

struct BudgetOracleResult {
  double threshold = 0.0;
  std::vector<std::size_t> selected;
  std::uint64_t words = 0;
  bool exhausted = false;
};

// Tries every distinct positive score as the threshold and keeps the largest
// one whose selection (score >= threshold, score > 0) reaches the budget.
inline BudgetOracleResult select_by_budget(const std::vector<double>& scores, const std::vector<std::uint64_t>& counts,
                                           std::uint64_t budget) {
  std::set<double> candidates;
  for (double s : scores)
    if (s > 0) candidates.insert(s);
  const auto words_at = [&](double theta) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
      if (scores[i] > 0 && scores[i] >= theta) w += counts[i];
    return w;
  };
  BudgetOracleResult r;
  bool found = false;
  for (double theta : candidates)
    if (words_at(theta) >= budget) {
      r.threshold = theta;  // ascending, so the last hit is the largest
      found = true;
    }
  if (!found) {
    r.exhausted = true;
    r.threshold = candidates.empty() ? 0.0 : *candidates.begin();
  }
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] > 0 && scores[i] >= r.threshold && !candidates.empty()) {
      r.selected.push_back(i);
      r.words += counts[i];
    }
  return r;
}

}  // namespace bitext::oracle
