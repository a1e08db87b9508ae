#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "cgc/model.hpp"

namespace cgc {

// Checkpoint container, one JSON document:
//   {"format_version": 1, "config": {...}, "vocab": [...], "target_vocab": [...],
//    "feature_vocab": {"pos": [...], "ner": [...], "dep": [...]}, "train_steps": n,
//    "params": {"<name>": {"shape": [...], "values": [...]}, ...}}
// Values are row-major doubles printed with round-trip precision.
inline constexpr int kCheckpointFormatVersion = 1;

nlohmann::json checkpoint_to_json(const QgModel& model);
QgModel checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::string& path, const QgModel& model);
// Throws IngestError when the file is missing, unreadable or of another format version.
QgModel load_checkpoint(const std::string& path);

}  // namespace cgc
