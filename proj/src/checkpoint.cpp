#include "cgc/checkpoint.hpp"

#include <fstream>

#include "cgc/errors.hpp"

namespace cgc {

nlohmann::json checkpoint_to_json(const QgModel& model) {
  return {{"format_version", kCheckpointFormatVersion},
          {"config", model.config().to_json()},
          {"vocab", model.vocabs().words.to_json()},
          {"target_vocab", model.vocabs().targets.to_json()},
          {"feature_vocab", model.vocabs().features.to_json()},
          {"train_steps", model.train_steps()},
          {"params", model.params().to_json()}};
}

QgModel checkpoint_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion)
      throw IngestError("unsupported checkpoint format version " + std::to_string(version));
    ModelVocabs vocabs{Vocabulary::from_json(j.at("vocab")), ReducedTargetVocab::from_json(j.at("target_vocab")),
                       FeatureVocab::from_json(j.at("feature_vocab"))};
    QgModel model(ModelConfig::from_json(j.at("config")), std::move(vocabs), ParamStore::from_json(j.at("params")));
    model.set_train_steps(j.value("train_steps", 0L));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const QgModel& model) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write checkpoint " + path);
  out << checkpoint_to_json(model).dump() << '\n';
}

QgModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open checkpoint " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace cgc
