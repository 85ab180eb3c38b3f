#pragma once

#include "gazsl/gan/model.hpp"
#include "gazsl/gan/trainer.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace gazsl::gan {

inline constexpr const char* kModelFormat = "gazsl-model";
inline constexpr int kModelFormatVersion = 1;

/// Self-contained model document: config, parameter buffers, scaler and
/// digests. Doubles are written in shortest round-trip form, so the same
/// model always serializes to the same bytes.
nlohmann::json model_to_json(const GanModel& model);
/// Throws ValidationError on a wrong format tag, version or malformed buffer.
GanModel model_from_json(const nlohmann::json& j);

void save_model(const GanModel& model, const std::filesystem::path& path);
GanModel load_model(const std::filesystem::path& path);

/// Digest of the resolved config as serialized.
std::string config_digest(const TrainConfig& config);

/// A "# config: <json>" provenance line, then columns step,L_D,L_G,L_e,wall_ms
/// with values in %.17g.
void write_loss_csv(std::span<const LossRecord> history, const TrainConfig& config, const std::filesystem::path& path);
std::vector<LossRecord> read_loss_csv(const std::filesystem::path& path);

}  // namespace gazsl::gan
