#include "cgc/config.hpp"

#include <fstream>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

// Single field table drives serialization, parsing and the unknown-key check.
template <typename Visitor>
void visit_fields(ModelConfig& c, Visitor&& v) {
  v("r_h", c.r_h);
  v("r_l", c.r_l);
  v("target_vocab", c.target_vocab);
  v("vocab_max", c.vocab_max);
  v("mask_low_freq", c.mask_low_freq);
  v("word_dim", c.word_dim);
  v("tier_dim", c.tier_dim);
  v("feat_dim", c.feat_dim);
  v("enc_hidden", c.enc_hidden);
  v("dec_hidden", c.dec_hidden);
  v("readout_dim", c.readout_dim);
  v("attn_dim", c.attn_dim);
  v("gcn_layers", c.gcn_layers);
  v("gcn_hidden", c.gcn_hidden);
  v("tau", c.tau);
  v("gold_clue_in_training", c.gold_clue_in_training);
  v("dropout", c.dropout);
  v("lr", c.lr);
  v("beta1", c.beta1);
  v("beta2", c.beta2);
  v("eps", c.eps);
  v("batch", c.batch);
  v("epochs", c.epochs);
  v("clip", c.clip);
  v("ema", c.ema);
  v("lambda_clue", c.lambda_clue);
  v("lambda_gen", c.lambda_gen);
  v("lambda_gate", c.lambda_gate);
  v("init_range", c.init_range);
  v("embed_init_range", c.embed_init_range);
  v("prob_floor", c.prob_floor);
  v("beam", c.beam);
  v("max_len", c.max_len);
  v("seed", c.seed);
}

void positive(const char* name, double v) {
  if (!(v > 0)) throw ConfigError(std::string("config field '") + name + "' must be positive");
}

}  // namespace

void ModelConfig::validate() const {
  positive("r_h", r_h);
  positive("r_l", r_l);
  if (r_h >= r_l) throw ConfigError("config field 'r_h' must be smaller than 'r_l'");
  positive("target_vocab", target_vocab);
  positive("vocab_max", vocab_max);
  positive("word_dim", word_dim);
  positive("tier_dim", tier_dim);
  positive("feat_dim", feat_dim);
  positive("enc_hidden", enc_hidden);
  positive("dec_hidden", dec_hidden);
  positive("readout_dim", readout_dim);
  positive("attn_dim", attn_dim);
  if (gcn_layers < 1 || gcn_layers > 5)
    throw ConfigError("config field 'gcn_layers' must be in [1, 5]");
  positive("gcn_hidden", gcn_hidden);
  positive("tau", tau);
  if (!(dropout >= 0 && dropout < 1)) throw ConfigError("config field 'dropout' must be in [0, 1)");
  positive("lr", lr);
  if (!(beta1 >= 0 && beta1 < 1)) throw ConfigError("config field 'beta1' must be in [0, 1)");
  if (!(beta2 >= 0 && beta2 < 1)) throw ConfigError("config field 'beta2' must be in [0, 1)");
  positive("eps", eps);
  positive("batch", batch);
  if (epochs < 0) throw ConfigError("config field 'epochs' must be non-negative");
  positive("clip", clip);
  if (!(ema >= 0 && ema < 1)) throw ConfigError("config field 'ema' must be in [0, 1)");
  if (lambda_clue < 0 || lambda_gen < 0 || lambda_gate < 0)
    throw ConfigError("config field 'lambda_*' must be non-negative");
  positive("init_range", init_range);
  positive("embed_init_range", embed_init_range);
  positive("prob_floor", prob_floor);
  positive("beam", beam);
  positive("max_len", max_len);
}

int ModelConfig::clue_input_width() const { return word_dim + tier_dim + 7 * feat_dim; }

int ModelConfig::encoder_input_width() const { return clue_input_width() + feat_dim; }

nlohmann::json ModelConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  auto copy = *this;
  visit_fields(copy, [&](const char* key, auto& field) { j[key] = field; });
  return j;
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ModelConfig c;
  std::size_t matched = 0;
  visit_fields(c, [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    ++matched;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
  });
  if (matched != j.size()) {
    ModelConfig probe;
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      visit_fields(probe, [&](const char* k, auto&) { known = known || key == k; });
      if (!known) throw ConfigError("unknown config field '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ModelConfig ModelConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace cgc
