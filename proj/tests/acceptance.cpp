// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "bitext/ibm1.hpp"
#include "bitext/ngram_lm.hpp"
#include "bitext/noise_bench.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/scores.hpp"
#include "bitext/selection.hpp"
#include "demo.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bitext;
using bitext::testing::read_file;
using bitext::testing::TempDir;

namespace {

// Reference AUCs of the synthetic bench (seed kBenchSeed), recorded from the
// first full run. Scoring is deterministic, so drift means behaviour changed.
constexpr std::uint64_t kBenchSeed = 2024;
constexpr double kPinnedFullAuc = 0.9994237867;
constexpr double kPinnedLangidAuc = 0.8034;
constexpr double kPinTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_seconds) o.require(false, "took " + std::to_string(secs) + "s");
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << ": " << title << " [" << std::fixed
            << std::setprecision(2) << secs << "s]" << (o.detail.empty() ? "" : " -- " + o.detail) << std::endl;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Bench {
  TempDir dir;
  bench::SyntheticSuite suite;
};

Bench& bench_data() {
  static Bench* b = [] {
    auto* p = new Bench;
    p->suite = bench::make_suite(kBenchSeed);
    bitext::testing::write_demo(p->suite, p->dir);
    return p;
  }();
  return *b;
}

std::vector<double> totals(const std::string& config, const ScoreOverrides& ov = {}) {
  auto& b = bench_data();
  const auto pipeline = Pipeline::build(load_config(b.dir.file(config)), ov);
  std::vector<double> out;
  for (const auto& r : score_pairs(pipeline, b.suite.noisy.pairs, workers())) out.push_back(r.total);
  return out;
}

double auc(const std::vector<double>& scores) { return *bench::rank_eval(scores, bench_data().suite.noisy.labels).auc; }

Outcome analytic_scores() {
  Outcome o;
  o.require(std::abs(adq(0, 0) - 1.0) <= 1e-12, "adq(0,0)");
  o.require(std::abs(adq(1, 1) - std::exp(-1.0)) <= 1e-12, "adq(1,1)");
  o.require(std::abs(adq(2, 0) - std::exp(-3.0)) <= 1e-12, "adq(2,0)");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), d = u(rng);
    if (adq(a, b) != adq(b, a)) o.require(false, "symmetry at " + fmt(a) + "," + fmt(b));
    const double lo = std::min(a, b), hi = std::max(a, b);
    // Raising both entropies together never raises the score.
    if (adq(a + d, b + d) > adq(a, b)) o.require(false, "joint monotonicity");
    // Widening the gap at a fixed mean never raises the score.
    if (adq(lo - std::min(lo, d / 2), hi + std::min(lo, d / 2)) > adq(lo, hi)) o.require(false, "gap monotonicity");
  }
  const double expect[] = {0.0, 0.3, 1.0, 1.0};
  const double primes[] = {0.2, 0.3, 1.0, 3.0};
  for (int k = 0; k < 4; ++k) {
    // dom' = exp(-(h_in - h_out)); with h_out = 2, h_in = 2 - ln dom'.
    const double got = dom(2.0 - std::log(primes[k]), 2.0, {0.25});
    if (std::abs(got - expect[k]) > 1e-12) o.require(false, "dom(" + fmt(primes[k]) + ") = " + fmt(got));
  }
  return o;
}

Outcome adq_ablations() {
  Outcome o;
  ScoreOverrides no_abs, no_ce;
  no_abs.no_abs_difference = true;
  no_ce.no_ce_weighting = true;
  const double full = auc(totals("adq.ini"));
  const double a = auc(totals("adq.ini", no_abs));
  const double c = auc(totals("adq.ini", no_ce));
  o.detail = "full " + fmt(full) + ", no-abs-difference " + fmt(a) + ", no-ce-weighting " + fmt(c);
  o.require(full >= a, "full below no-abs-difference");
  o.require(full >= c, "full below no-ce-weighting");
  return o;
}

Outcome copy_gate() {
  Outcome o;
  const auto t = totals("full.ini");
  const auto& labels = bench_data().suite.noisy.labels;
  std::size_t copies = 0, zero = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (labels[i] == bench::NoiseClass::copy) {
      ++copies;
      zero += t[i] == 0.0;
    }
  o.detail = std::to_string(zero) + "/" + std::to_string(copies) + " copy pairs at 0";
  o.require(copies > 0 && zero == copies, "copied pairs passed the gate");
  return o;
}

Outcome ibm1_oracle() {
  using Corpus = std::vector<std::pair<TokenSeq, TokenSeq>>;
  const std::vector<Corpus> corpora = {
      {{{"a", "b"}, {"x", "y"}}, {{"a"}, {"x"}}},
      {{{"das", "haus"}, {"the", "house"}}, {{"das", "buch"}, {"the", "book"}}, {{"ein", "buch"}, {"a", "book"}}},
      {{{"p", "q", "r"}, {"u", "v"}},
       {{"q", "r"}, {"v", "w", "v"}},
       {{"r"}, {"w"}},
       {{"p", "p", "s"}, {"u", "u", "z", "v"}},
       {{"s", "q"}, {"z", "v"}},
       {{"p"}, {"u"}}},
  };
  Outcome o;
  double worst = 0.0;
  for (const auto& corpus : corpora) {
    for (int it : {1, 5}) {
      std::vector<double> ll;
      const auto m = LexicalModel::train(corpus, {it, false}, &ll);
      oracle::Ibm1Oracle ref(corpus);
      for (int k = 0; k < it; ++k) ref.step();
      for (const auto& [key, v] : ref.table) worst = std::max(worst, std::abs(m.t(key.second, key.first) - v));
      for (std::size_t k = 1; k < ll.size(); ++k)
        if (ll[k] < ll[k - 1] - 1e-12) o.require(false, "log-likelihood decreased");
    }
  }
  o.detail = "max deviation " + fmt(worst);
  o.require(worst <= 1e-9, "table mismatch");
  return o;
}

Outcome lm_checks() {
  Outcome o;
  const auto m = NGramModel::train({{"a", "a", "b"}}, {1, Smoothing::none});
  const double h1 = m.cross_entropy({"a"}), h2 = m.cross_entropy({"a", "b"});
  o.require(std::abs(h1 - -std::log(2.0 / 3.0)) <= 1e-12 && std::abs(h1 - 0.405465) < 1e-6, "H(a) = " + fmt(h1));
  o.require(std::abs(h2 - -(std::log(2.0 / 3.0) + std::log(1.0 / 3.0)) / 2) <= 1e-12 && std::abs(h2 - 0.752038) < 1e-6,
            "H(a b) = " + fmt(h2));
  std::mt19937_64 rng(5);
  std::vector<TokenSeq> corpus;
  for (int i = 0; i < 500; ++i) {
    TokenSeq s;
    for (std::size_t k = 0, n = 1 + rng() % 10; k < n; ++k) s.push_back("w" + std::to_string(rng() % 40));
    corpus.push_back(s);
  }
  const auto wb = NGramModel::train(corpus, {3, Smoothing::witten_bell});
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    TokenSeq h;
    for (std::size_t k = 0, n = rng() % 4; k < n; ++k) h.push_back("w" + std::to_string(rng() % 50));
    double sum = 0.0;
    for (auto id : wb.events()) sum += wb.prob_of(wb.word(id), h);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  o.detail = "max normalization error " + fmt(worst);
  o.require(worst <= 1e-6, "distribution does not normalize");
  return o;
}

Outcome selection_oracle() {
  Outcome o;
  std::mt19937_64 rng(6);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng() % 1000, levels = 1 + rng() % 40;
    std::vector<double> s;
    std::vector<std::uint64_t> w;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(rng() % 8 == 0 ? 0.0 : static_cast<double>(1 + rng() % levels) / static_cast<double>(levels + 1));
      w.push_back(1 + rng() % 25);
      total += w.back();
    }
    const std::uint64_t budget = 1 + rng() % (total + 10);
    const auto r = select_by_budget(s, w, budget);
    const auto ref = oracle::select_by_budget(s, w, budget);
    if (r.threshold != ref.threshold || r.selected_ids != ref.selected || r.exhausted != ref.exhausted)
      o.require(false, "corpus " + std::to_string(k) + " differs from brute force");
    if (!r.exhausted) {
      std::uint64_t above = 0;
      for (std::size_t i = 0; i < n; ++i) above += s[i] > r.threshold ? w[i] : 0;
      if (r.achieved_words < budget || above >= budget) o.require(false, "threshold not maximal");
    }
    const auto bigger = select_by_budget(s, w, budget + 1 + rng() % 100);
    if (bigger.threshold > r.threshold) o.require(false, "larger budget raised the threshold");
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto suite_a = bench::make_suite(77, {3000, 6000, 6000, 1000});
  const auto suite_b = bench::make_suite(77, {3000, 6000, 6000, 1000});
  TempDir a, b;
  bitext::testing::write_demo(suite_a, a);
  bitext::testing::write_demo(suite_b, b);
  const auto run = [](const TempDir& dir, std::size_t w, const std::string& tag) {
    const auto pipeline = Pipeline::build(load_config(dir.file("all.ini")));
    BitextReader reader(dir.file("bench.src"), dir.file("bench.trg"));
    std::ofstream totals(dir.file("scores." + tag), std::ios::binary), tsv(dir.file("scores." + tag + ".tsv"));
    score_corpus(pipeline, reader, totals, &tsv, w, 512);
  };
  run(a, 1, "1");
  run(a, 8, "8");
  run(b, 1, "1");
  for (const TempDir* d : {&a, &b}) {
    const auto r = StreamingSelector(d->file("scores.1"), d->file("bench.trg")).select(20000);
    emit_subset(r, d->file("bench.src"), d->file("bench.trg"), d->file("sel.src"), d->file("sel.trg"));
  }
  for (const char* f : {"langid.model", "ibm1.fwd", "ibm1.bwd", "in.lm", "out.lm", "scores.1", "scores.1.tsv",
                        "sel.src", "sel.trg"})
    o.require(read_file(a.file(f)) == read_file(b.file(f)), std::string(f) + " differs between runs");
  o.require(read_file(a.file("scores.1")) == read_file(a.file("scores.8")), "1 vs 8 workers totals differ");
  o.require(read_file(a.file("scores.1.tsv")) == read_file(a.file("scores.8.tsv")), "1 vs 8 workers partials differ");
  o.require(!read_file(a.file("sel.src")).empty(), "empty selection");
  return o;
}

Outcome full_config_auc() {
  Outcome o;
  const double full = auc(totals("full.ini"));
  const double lid = auc(totals("langid.ini"));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> random(bench_data().suite.noisy.pairs.size());
  for (auto& v : random) v = u(rng);
  const double rnd = auc(random);
  o.detail = "full " + fmt(full) + ", langid-only " + fmt(lid) + ", random " + fmt(rnd);
  o.require(std::abs(rnd - 0.5) <= 0.02, "random baseline outside 0.5 +- 0.02");
  o.require(full > 0.52, "full config not above random");
  o.require(full > lid, "full config not above langid-only");
  if (kPinnedFullAuc >= 0) o.require(std::abs(full - kPinnedFullAuc) <= kPinTolerance, "full AUC moved from pin");
  if (kPinnedLangidAuc >= 0) o.require(std::abs(lid - kPinnedLangidAuc) <= kPinTolerance, "langid AUC moved from pin");
  return o;
}

}  // namespace

int main() {
  criterion(1, "analytic adq/dom values and adq properties", 1, analytic_scores);
  criterion(2, "full adq ranks at least as well as each ablation", 120, adq_ablations);
  criterion(3, "language gate zeroes every copied-source pair", 60, copy_gate);
  criterion(4, "IBM Model 1 matches brute-force EM; likelihood non-decreasing", 1, ibm1_oracle);
  criterion(5, "LM cross-entropies and smoothed normalization", 1, lm_checks);
  criterion(6, "budget selection matches brute force on 200 corpora", 30, selection_oracle);
  criterion(7, "pipeline byte-identical across runs and worker counts", 120, determinism);
  criterion(8, "full config beats random and langid-only", 120, full_config_auc);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
