#include "cgc/beam.hpp"

#include <algorithm>
#include <cmath>

#include "cgc/errors.hpp"
#include "cgc/corpus.hpp"
#include "cgc/features.hpp"

namespace cgc {

namespace {

const std::string kEosSurface = "<EOS>";

bool emittable(const std::string& w) { return w != "<UNK>" && w != "<SOS>" && w != "<PAD>"; }

struct Live {
  BeamHypothesis hyp;
  Var state;
  Var context;
};

struct Candidate {
  std::size_t parent;
  std::string token;
  double logprob;
  double score;
};

}  // namespace

std::vector<BeamHypothesis> beam_search(QgModel& model, const AnnotatedExample& ex, int beam_width, int max_len) {
  if (model.train_steps() <= 0) throw ConfigError("model has not been trained; load a trained checkpoint");
  if (beam_width <= 0) throw ConfigError("beam width must be positive");
  if (max_len <= 0) throw ConfigError("max_len must be positive");
  validate_example(ex, QuestionField::Optional);
  const auto& cfg = model.config();
  const auto& vocabs = model.vocabs();

  Graph g;
  Rng unused(0);
  auto enc = model.encode_passage(g, ex, Mode::Eval, unused, unused);
  std::vector<std::string> passage_norm;
  for (const auto& t : ex.passage) passage_norm.push_back(normalize(t.text));
  auto table = g.param(model.params().get("embed.word"));

  std::vector<Live> live{{BeamHypothesis{}, enc.s0, g.constant(Tensor({2 * static_cast<std::size_t>(cfg.enc_hidden)}))}};
  std::vector<BeamHypothesis> finished;

  for (int t = 0; t < max_len && !live.empty(); ++t) {
    const std::size_t keep = static_cast<std::size_t>(beam_width) - finished.size();
    std::vector<Candidate> cands;
    std::vector<StepOutput> steps;
    for (std::size_t h = 0; h < live.size(); ++h) {
      const auto& hyp = live[h].hyp;
      const std::size_t row = hyp.tokens.empty() ? Vocabulary::kSos : word_row(hyp.tokens.back(), vocabs.words, cfg);
      auto step = decode_step(g, model.params(), cfg, g.gather_row(table, row), live[h].context, live[h].state,
                              enc.memory, Mode::Eval, unused);
      steps.push_back(step);
      auto dist = ExtendedDistribution::from_step(g, step).surface(passage_norm, vocabs.targets);
      std::vector<Candidate> mine;
      for (const auto& [w, p] : dist) {
        if (!emittable(w) || !(p > 0.0)) continue;
        const double lp = hyp.logprob + std::log(p);
        mine.push_back({h, w, lp, lp / static_cast<double>(hyp.tokens.size() + 1)});
      }
      // Only the best `keep` of each parent can survive the global cut.
      const auto k = std::min(keep, mine.size());
      std::partial_sort(mine.begin(), mine.begin() + static_cast<std::ptrdiff_t>(k), mine.end(),
                        [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
      cands.insert(cands.end(), mine.begin(), mine.begin() + static_cast<std::ptrdiff_t>(k));
    }
    // Stable on (parent, token) order, so ties resolve deterministically.
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    if (cands.size() > keep) cands.resize(keep);

    std::vector<Live> next;
    for (const auto& c : cands) {
      Live nl{live[c.parent].hyp, steps[c.parent].state, steps[c.parent].context};
      nl.hyp.tokens.push_back(c.token);
      nl.hyp.logprob = c.logprob;
      if (c.token == kEosSurface) {
        nl.hyp.finished = true;
        finished.push_back(std::move(nl.hyp));
      } else {
        next.push_back(std::move(nl));
      }
    }
    live = std::move(next);
  }

  std::vector<BeamHypothesis> out = finished;
  if (out.empty())
    for (auto& l : live) out.push_back(std::move(l.hyp));
  std::stable_sort(out.begin(), out.end(),
                   [](const BeamHypothesis& a, const BeamHypothesis& b) { return a.score() > b.score(); });
  return out;
}

Generation generate(QgModel& model, const AnnotatedExample& ex, int beam_width, int max_len) {
  auto hyps = beam_search(model, ex, beam_width, max_len);
  if (hyps.empty()) return {};
  Generation gen{hyps.front().tokens, hyps.front().score()};
  if (!gen.tokens.empty() && gen.tokens.back() == kEosSurface) gen.tokens.pop_back();
  return gen;
}

}  // namespace cgc
