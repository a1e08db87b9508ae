#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cgc {

using Tokens = std::vector<std::string>;

struct EvalPair {
  Tokens prediction;
  Tokens reference;
};

// All scores are percentages in [0, 100]. Tokens are lowercased before
// matching. Each function throws DomainError on an empty corpus.

// Corpus BLEU with clipped n-gram counts, geometric mean over orders 1..n,
// brevity penalty exp(1 − r/c) when c < r, and no smoothing.
double corpus_bleu(std::span<const EvalPair> pairs, int n);

// Mean LCS F-measure, F = (1+β²)RP / (R + β²P).
double rouge_l(std::span<const EvalPair> pairs, double beta = 1.2);

// Exact-match METEOR: F = 10PR / (R + 9P), fragmentation penalty 0.5·(chunks/m)³.
double meteor(std::span<const EvalPair> pairs);

struct EvalReport {
  double bleu[4] = {0, 0, 0, 0};
  double rouge_l = 0.0;
  double meteor = 0.0;
  std::size_t pairs = 0;

  nlohmann::json to_json() const;
  std::string table() const;
};

EvalReport evaluate(std::span<const EvalPair> pairs);

}  // namespace cgc
