// Command-line front end: ingest, stats, train, generate, evaluate, make-toy-data.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cgc/beam.hpp"
#include "cgc/checkpoint.hpp"
#include "cgc/corpus.hpp"
#include "cgc/errors.hpp"
#include "cgc/metrics.hpp"
#include "cgc/stats.hpp"
#include "cgc/toy_data.hpp"
#include "cgc/trainer.hpp"

namespace fs = std::filesystem;
using namespace cgc;

namespace {

// CGC_LOG=quiet|info|debug
enum class Level { Quiet = 0, Info = 1, Debug = 2 };

Level log_level() {
  const char* v = std::getenv("CGC_LOG");
  if (!v) return Level::Info;
  std::string s(v);
  if (s == "quiet" || s == "0") return Level::Quiet;
  if (s == "debug" || s == "2") return Level::Debug;
  return Level::Info;
}

void info(const std::string& msg) {
  if (log_level() >= Level::Info) std::cerr << "[cgc] " << msg << '\n';
}

void debug(const std::string& msg) {
  if (log_level() >= Level::Debug) std::cerr << "[cgc:debug] " << msg << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  return out;
}

// --config file, then --set key=value overrides (value parsed as JSON, bare strings allowed).
ModelConfig resolve_config(const std::string& path, const std::vector<std::string>& sets) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    const auto key = kv.substr(0, eq);
    const auto val = kv.substr(eq + 1);
    try {
      j[key] = nlohmann::json::parse(val);
    } catch (const nlohmann::json::exception&) {
      j[key] = val;
    }
  }
  return ModelConfig::from_json(j);
}

std::string join(const std::vector<std::string>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Tokens split(const std::string& s) {
  Tokens out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// --------------------------------------------------------------- commands

struct Common {
  std::string config;
  std::vector<std::string> sets;
};

int cmd_make_toy(std::size_t n, std::uint64_t seed, const std::string& out_path) {
  auto corpus = make_toy_data(n, seed);
  auto out = open_out(out_path);
  write_corpus(out, corpus);
  info("wrote " + std::to_string(corpus.size()) + " toy examples to " + out_path);
  return 0;
}

int cmd_ingest(const Common& c, const std::string& data, const std::string& out_path) {
  auto cfg = resolve_config(c.config, c.sets);
  auto corpus = load_corpus(data);
  auto prepared = prepare_training_data(corpus, cfg);
  auto out = open_out(out_path);
  for (const auto& ex : prepared.examples) out << labeled_to_json(ex).dump() << '\n';
  info("labeled " + std::to_string(prepared.examples.size()) + " examples, vocabulary " +
       std::to_string(prepared.vocabs.words.size()) + ", reduced target vocabulary " +
       std::to_string(prepared.vocabs.targets.size()));
  return 0;
}

int cmd_stats(const Common& c, const std::string& data, const std::string& out_dir) {
  auto cfg = resolve_config(c.config, c.sets);
  auto corpus = load_corpus(data);
  auto prepared = prepare_training_data(corpus, cfg);
  auto ranks = rank_distributions(prepared.examples, prepared.vocabs.words);
  auto deps = dep_path_stats(prepared.examples);
  fs::create_directories(out_dir);
  open_out((fs::path(out_dir) / "histograms.csv").string()) << stats_csv(ranks, deps);
  const auto summary = stats_summary_json(ranks, deps);
  open_out((fs::path(out_dir) / "summary.json").string()) << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_train(const Common& c, const std::string& data, const std::string& dev, const std::string& vectors,
              const std::string& out_dir) {
  auto cfg = resolve_config(c.config, c.sets);
  auto corpus = load_corpus(data);
  auto prepared = prepare_training_data(corpus, cfg);
  std::vector<LabeledExample> dev_examples;
  if (!dev.empty()) dev_examples = label_with(load_corpus(dev), prepared.vocabs, cfg);
  fs::create_directories(out_dir);
  auto model = QgModel::initialize(cfg, prepared.vocabs, vectors);
  info("training on " + std::to_string(prepared.examples.size()) + " examples, " +
       std::to_string(model.params().num_values()) + " parameters");

  auto log = open_out((fs::path(out_dir) / "train_log.jsonl").string());
  TrainOptions opts;
  opts.dev = dev_examples;
  opts.on_epoch = [&](const EpochLog& e) {
    const auto line = e.to_json().dump();
    log << line << '\n';
    log.flush();
    info(line);
  };
  auto result = train(model, prepared.examples, opts);

  save_checkpoint((fs::path(out_dir) / "raw.json").string(), model);
  const auto raw = model.params();
  model.params().assign_values(result.ema);
  save_checkpoint((fs::path(out_dir) / "ema.json").string(), model);
  model.params().assign_values(result.best_dev);
  save_checkpoint((fs::path(out_dir) / "best.json").string(), model);
  model.params().assign_values(raw);
  info("checkpoints written to " + out_dir + " (best epoch " + std::to_string(result.best_epoch) + ")");
  return 0;
}

int cmd_generate(const std::string& ckpt, const std::string& data, const std::string& out_path, int beam,
                 int max_len) {
  auto model = load_checkpoint(ckpt);
  if (beam <= 0) beam = model.config().beam;
  if (max_len <= 0) max_len = model.config().max_len;
  auto corpus = load_corpus(data, QuestionField::Optional);
  auto out = open_out(out_path);
  for (const auto& ex : corpus) {
    auto gen = generate(model, ex, beam, max_len);
    debug(ex.id + ": " + join(gen.tokens));
    out << nlohmann::json{{"id", ex.id}, {"prediction", join(gen.tokens)}, {"score", gen.score}}.dump() << '\n';
  }
  info("generated " + std::to_string(corpus.size()) + " questions into " + out_path);
  return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& ref_path) {
  auto refs = load_corpus(ref_path);
  std::unordered_map<std::string, Tokens> preds;
  std::ifstream in(pred_path);
  if (!in) throw IngestError("cannot open predictions " + pred_path);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const auto& p = j.at("prediction");
      preds[j.at("id").get<std::string>()] = p.is_array() ? p.get<Tokens>() : split(p.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw IngestError("predictions line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::vector<EvalPair> pairs;
  for (const auto& r : refs) {
    auto it = preds.find(r.id);
    if (it == preds.end()) throw IngestError("no prediction for reference id " + r.id);
    pairs.push_back({it->second, r.question});
  }
  auto report = evaluate(pairs);
  std::cout << report.to_json().dump(2) << '\n';
  std::cerr << report.table();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clue-guided copy network for answer-aware question generation"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file");
    sub->add_option("--set", common.sets, "override a config key, key=value (repeatable)");
  };

  std::string data, out, dev, vectors, ckpt, pred, ref;
  std::size_t n = 32;
  std::uint64_t seed = 7;
  int beam = 0, max_len = 0;

  auto* toy = app.add_subcommand("make-toy-data", "write a synthetic pre-parsed corpus");
  toy->add_option("--n", n, "number of examples")->required();
  toy->add_option("--seed", seed, "random seed")->required();
  toy->add_option("--out", out, "output JSONL")->required();

  auto* ingest = app.add_subcommand("ingest", "validate and label a corpus");
  add_common(ingest);
  ingest->add_option("--data", data, "dataset JSONL")->required();
  ingest->add_option("--out", out, "labeled JSONL")->required();

  auto* stats = app.add_subcommand("stats", "rank and dependency-path statistics");
  add_common(stats);
  stats->add_option("--data", data, "dataset JSONL")->required();
  stats->add_option("--out", out, "output directory")->required();

  auto* tr = app.add_subcommand("train", "train a model");
  add_common(tr);
  tr->add_option("--data", data, "training JSONL")->required();
  tr->add_option("--out", out, "checkpoint directory")->required();
  tr->add_option("--dev", dev, "dev JSONL for model selection");
  tr->add_option("--vectors", vectors, "pre-trained word vectors (token v1 ... vd per line)");

  auto* gen = app.add_subcommand("generate", "generate questions with beam search");
  gen->add_option("--checkpoint", ckpt, "checkpoint file")->required();
  gen->add_option("--data", data, "dataset JSONL (question field optional)")->required();
  gen->add_option("--out", out, "predictions JSONL")->required();
  gen->add_option("--beam", beam, "beam width (default from checkpoint config)");
  gen->add_option("--max-len", max_len, "maximum question length (default from checkpoint config)");

  auto* ev = app.add_subcommand("evaluate", "BLEU, ROUGE-L and METEOR");
  ev->add_option("--pred", pred, "predictions JSONL {id, prediction}")->required();
  ev->add_option("--ref", ref, "reference dataset JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (toy->parsed()) return cmd_make_toy(n, seed, out);
    if (ingest->parsed()) return cmd_ingest(common, data, out);
    if (stats->parsed()) return cmd_stats(common, data, out);
    if (tr->parsed()) return cmd_train(common, data, dev, vectors, out);
    if (gen->parsed()) return cmd_generate(ckpt, data, out, beam, max_len);
    if (ev->parsed()) return cmd_evaluate(pred, ref);
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
