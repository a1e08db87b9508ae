#include "cgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "cgc/errors.hpp"
#include "cgc/types.hpp"

namespace cgc {

namespace {

void require_nonempty(std::span<const EvalPair> pairs, const char* what) {
  if (pairs.empty()) throw DomainError(std::string(what) + ": empty corpus");
}

Tokens lowered(const Tokens& t) {
  Tokens out;
  out.reserve(t.size());
  for (const auto& w : t) out.push_back(normalize(w));
  return out;
}

std::map<std::vector<std::string>, std::size_t> ngrams(const Tokens& t, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[Tokens(t.begin() + static_cast<std::ptrdiff_t>(i),
                                                               t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return out;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double corpus_bleu(std::span<const EvalPair> pairs, int n) {
  require_nonempty(pairs, "BLEU");
  if (n < 1) throw DomainError("BLEU order must be at least 1");
  std::vector<double> matched(static_cast<std::size_t>(n), 0.0), total(static_cast<std::size_t>(n), 0.0);
  double c = 0.0, r = 0.0;
  for (const auto& p : pairs) {
    auto pred = lowered(p.prediction);
    auto ref = lowered(p.reference);
    c += static_cast<double>(pred.size());
    r += static_cast<double>(ref.size());
    for (int k = 1; k <= n; ++k) {
      auto pc = ngrams(pred, static_cast<std::size_t>(k));
      auto rc = ngrams(ref, static_cast<std::size_t>(k));
      for (const auto& [g, cnt] : pc) {
        auto it = rc.find(g);
        matched[static_cast<std::size_t>(k - 1)] += static_cast<double>(std::min(cnt, it == rc.end() ? 0 : it->second));
        total[static_cast<std::size_t>(k - 1)] += static_cast<double>(cnt);
      }
    }
  }
  double log_sum = 0.0;
  for (std::size_t k = 0; k < matched.size(); ++k) {
    if (matched[k] == 0.0 || total[k] == 0.0) return 0.0;
    log_sum += std::log(matched[k] / total[k]);
  }
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * bp * std::exp(log_sum / n);
}

double rouge_l(std::span<const EvalPair> pairs, double beta) {
  require_nonempty(pairs, "ROUGE-L");
  const double b2 = beta * beta;
  double sum = 0.0;
  for (const auto& p : pairs) {
    auto pred = lowered(p.prediction);
    auto ref = lowered(p.reference);
    const double l = static_cast<double>(lcs_length(pred, ref));
    if (l == 0.0) continue;
    const double rec = l / static_cast<double>(ref.size());
    const double prec = l / static_cast<double>(pred.size());
    sum += (1.0 + b2) * rec * prec / (rec + b2 * prec);
  }
  return 100.0 * sum / static_cast<double>(pairs.size());
}

double meteor(std::span<const EvalPair> pairs) {
  require_nonempty(pairs, "METEOR");
  double sum = 0.0;
  for (const auto& p : pairs) {
    auto pred = lowered(p.prediction);
    auto ref = lowered(p.reference);
    // greedy one-to-one: each prediction token takes the earliest free reference token
    std::vector<bool> used(ref.size(), false);
    std::vector<long> align(pred.size(), -1);
    std::size_t m = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!used[j] && ref[j] == pred[i]) {
          used[j] = true;
          align[i] = static_cast<long>(j);
          ++m;
          break;
        }
      }
    }
    if (m == 0) continue;
    std::size_t chunks = 0;
    long last = -2;
    bool in_run = false;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (align[i] < 0) {
        in_run = false;
        continue;
      }
      if (!in_run || align[i] != last + 1) ++chunks;
      in_run = true;
      last = align[i];
    }
    const double prec = static_cast<double>(m) / static_cast<double>(pred.size());
    const double rec = static_cast<double>(m) / static_cast<double>(ref.size());
    const double f = 10.0 * prec * rec / (rec + 9.0 * prec);
    const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / static_cast<double>(m), 3.0);
    sum += f * (1.0 - penalty);
  }
  return 100.0 * sum / static_cast<double>(pairs.size());
}

EvalReport evaluate(std::span<const EvalPair> pairs) {
  EvalReport r;
  for (int n = 1; n <= 4; ++n) r.bleu[n - 1] = corpus_bleu(pairs, n);
  r.rouge_l = rouge_l(pairs);
  r.meteor = meteor(pairs);
  r.pairs = pairs.size();
  return r;
}

nlohmann::json EvalReport::to_json() const {
  return {{"bleu1", bleu[0]}, {"bleu2", bleu[1]},  {"bleu3", bleu[2]}, {"bleu4", bleu[3]},
          {"rougeL", rouge_l}, {"meteor", meteor}, {"pairs", pairs}};
}

std::string EvalReport::table() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-8s %8s\nBLEU-1   %8.2f\nBLEU-2   %8.2f\nBLEU-3   %8.2f\nBLEU-4   %8.2f\nROUGE-L  %8.2f\n"
                "METEOR   %8.2f\npairs    %8zu\n",
                "metric", "score", bleu[0], bleu[1], bleu[2], bleu[3], rouge_l, meteor, pairs);
  return buf;
}

}  // namespace cgc
