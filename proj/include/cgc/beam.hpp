#pragma once

#include <string>
#include <vector>

#include "cgc/model.hpp"

namespace cgc {

struct BeamHypothesis {
  std::vector<std::string> tokens;  // emitted surface forms, <EOS> included when finished
  double logprob = 0.0;
  bool finished = false;

  double score() const { return tokens.empty() ? 0.0 : logprob / static_cast<double>(tokens.size()); }
};

// Beam search over surface forms. Clues come from the eval-mode (argmax)
// predictor; generation and copy probability of the same surface form are
// summed before ranking. Returns finished hypotheses, or the best partials when
// none finished within max_len, sorted by score() descending.
// Throws ConfigError for an untrained model or a non-positive width/length.
std::vector<BeamHypothesis> beam_search(QgModel& model, const AnnotatedExample& ex, int beam_width,
                                        int max_len);

// Best hypothesis with <EOS> stripped.
struct Generation {
  std::vector<std::string> tokens;
  double score = 0.0;
};

Generation generate(QgModel& model, const AnnotatedExample& ex, int beam_width, int max_len);

}  // namespace cgc
