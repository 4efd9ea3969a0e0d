#ifndef TLINK_CHECKPOINT_H_
#define TLINK_CHECKPOINT_H_

#include <filesystem>
#include <memory>

#include "json.hpp"
#include "tlink/model.h"

namespace tlink {

inline constexpr int kCheckpointVersion = 1;

// Self-describing JSON checkpoint: format tag and version, model config,
// label order, vocabularies, lexicons, majority label and every parameter
// tensor (row-major). The embedding table itself is referenced by path.
nlohmann::json CheckpointToJson(const TemporalModel &model);

// Throws IncompatibleError for unknown formats, versions or inconsistent
// shapes. The returned model has no embeddings attached.
TemporalModel CheckpointFromJson(const nlohmann::json &j);

void SaveCheckpoint(const TemporalModel &model, const std::filesystem::path &path);
TemporalModel LoadCheckpoint(const std::filesystem::path &path);

}  // namespace tlink

#endif  // TLINK_CHECKPOINT_H_
