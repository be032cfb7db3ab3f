#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitext/errors.hpp"

// Score algebra: every partial score lives in [0,1] and a pair's total is
// their product. Entropies are word-normalized and in nats.
namespace bitext {

struct AdqConfig {
  bool use_abs_difference = true;
  bool use_ce_weighting = true;
};

struct DomConfig {
  double cutoff = 0.0;
};

// Named partial scores and their product for one pair.
struct ScoreRecord {
  std::size_t id = 0;
  std::vector<std::pair<std::string, double>> partials;
  double total = 1.0;
};

namespace detail {
inline void require_entropy(double h, const char* what) {
  if (!std::isfinite(h)) throw DataError(std::string(what) + ": non-finite cross-entropy");
  if (h < 0) throw DataError(std::string(what) + ": negative cross-entropy");
}
}  // namespace detail

// Dual conditional cross-entropy turned into a partial score:
//   exp(-(|h_fwd - h_bwd| + (h_fwd + h_bwd) / 2))
// where h_fwd = H_A(y|x) and h_bwd = H_B(x|y). The flags drop either term.
inline double adq(double h_fwd, double h_bwd, const AdqConfig& cfg = {}) {
  detail::require_entropy(h_fwd, "adq");
  detail::require_entropy(h_bwd, "adq");
  double penalty = 0.0;
  if (cfg.use_abs_difference) penalty += std::abs(h_fwd - h_bwd);
  if (cfg.use_ce_weighting) penalty += 0.5 * (h_fwd + h_bwd);
  return std::exp(-penalty);
}

// Cross-entropy difference on the target side as a perplexity ratio
// PP_out / PP_in, clipped from above at 1, then zeroed below the cutoff.
//
// The clip is an upper clip, min(ratio, 1): a strongly in-domain target must
// not outweigh adequacy. Note max(ratio, 1) would make every score >= 1 and
// the cutoff a no-op.
inline double dom(double h_in, double h_out, const DomConfig& cfg = {}) {
  detail::require_entropy(h_in, "dom");
  detail::require_entropy(h_out, "dom");
  if (!(cfg.cutoff >= 0.0 && cfg.cutoff <= 1.0)) throw UsageError("dom cutoff must lie in [0,1]");
  const double ratio = std::exp(-(h_in - h_out));
  const double clipped = std::min(ratio, 1.0);
  return clipped >= cfg.cutoff ? clipped : 0.0;
}

// Cosine of the mean-pooled vectors, clamped to [0,1]. Degenerate input
// (empty side, dimension mismatch, zero-norm mean) scores 0 and bumps
// `failures` when given.
inline double sim(std::span<const std::vector<double>> vecs_x, std::span<const std::vector<double>> vecs_y,
                  std::atomic<std::size_t>* failures = nullptr) {
  const auto fail = [&] {
    if (failures) failures->fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  };
  if (vecs_x.empty() || vecs_y.empty()) return fail();
  const std::size_t dim = vecs_x.front().size();
  if (dim == 0) return fail();
  const auto mean = [dim](std::span<const std::vector<double>> vecs, std::vector<double>& out) {
    out.assign(dim, 0.0);
    for (const auto& v : vecs) {
      if (v.size() != dim) return false;
      for (std::size_t k = 0; k < dim; ++k) out[k] += v[k];
    }
    for (double& c : out) c /= static_cast<double>(vecs.size());
    return true;
  };
  std::vector<double> sx, sy;
  if (!mean(vecs_x, sx) || !mean(vecs_y, sy)) return fail();
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    dot += sx[k] * sy[k];
    nx += sx[k] * sx[k];
    ny += sy[k] * sy[k];
  }
  if (nx == 0.0 || ny == 0.0) return fail();
  const double cosine = dot / (std::sqrt(nx) * std::sqrt(ny));
  return std::clamp(cosine, 0.0, 1.0);
}

// Product of partials, each clamped to [0,1] first. Any zero factor gives exactly 0.
inline double combine(std::span<const std::pair<std::string, double>> partials) {
  double total = 1.0;
  bool zero = false;
  for (const auto& [name, value] : partials) {
    if (!std::isfinite(value)) throw DataError("scorer '" + name + "' produced a non-finite score");
    const double v = std::clamp(value, 0.0, 1.0);
    if (v == 0.0) zero = true;
    total *= v;
  }
  return zero ? 0.0 : total;
}

inline double combine(std::initializer_list<std::pair<std::string, double>> partials) {
  return combine(std::span<const std::pair<std::string, double>>(partials.begin(), partials.size()));
}

}  // namespace bitext
