#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace cgc {

// Every hyperparameter of the model, its training and decoding. Defaults are
// the full-scale settings; the toy configuration in configs/toy.json shrinks
// dimensions for CPU runs.
struct ModelConfig {
  // vocabulary and labeling
  int r_h = 100;            // top-r_h ranks are tier H; copy labels need rank > r_h
  int r_l = 2000;           // ranks in (r_h, r_l] are tier M, the rest L
  int target_vocab = 2000;  // N, decoder generation vocabulary size
  int vocab_max = 20000;
  bool mask_low_freq = true;

  // embeddings
  int word_dim = 300;
  int tier_dim = 32;
  int feat_dim = 16;

  // network widths
  int enc_hidden = 512;
  int dec_hidden = 512;
  int readout_dim = 512;  // maxout output d; the readout r_t has 2d entries
  int attn_dim = 512;
  int gcn_layers = 3;
  int gcn_hidden = 256;

  // clue predictor
  double tau = 1.0;
  bool gold_clue_in_training = false;

  // optimization
  double dropout = 0.1;
  double lr = 0.001;
  double beta1 = 0.8;
  double beta2 = 0.999;
  double eps = 1e-8;
  int batch = 32;
  int epochs = 10;
  double clip = 5.0;
  double ema = 0.9999;
  double lambda_clue = 1.0;
  double lambda_gen = 1.0;
  double lambda_gate = 1.0;
  double init_range = 0.08;
  double embed_init_range = 0.1;
  double prob_floor = 1e-12;

  // decoding
  int beam = 20;
  int max_len = 30;

  std::uint64_t seed = 1;

  // Throws ConfigError naming the first offending field.
  void validate() const;

  int encoder_input_width() const;  // word + tier + 8 feature slots (incl. clue indicator)
  int clue_input_width() const;     // same without the clue indicator slot

  nlohmann::json to_json() const;
  // Keys absent from j keep their defaults; unknown keys are rejected.
  static ModelConfig from_json(const nlohmann::json& j);
  static ModelConfig load(const std::string& path);
};

}  // namespace cgc
