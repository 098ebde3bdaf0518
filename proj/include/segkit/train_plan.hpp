#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace segkit {

enum class FineTuneStage { baseline, synthetic };

/// Throws Error for anything other than "baseline" or "synthetic".
FineTuneStage parse_stage(std::string_view name);
std::string stage_name(FineTuneStage stage);

/// Declarative fine-tuning recipe for an external training system. The two
/// stages: `baseline` trains every layer at 1e-5; `synthetic` trains only the
/// two score convolutions and three upscore deconvolutions at 1e-6. Both use
/// Adam on a pixel-wise softmax loss.
struct FineTunePlan {
  FineTuneStage stage = FineTuneStage::baseline;
  std::vector<std::string> trainable_layers;  // {"all"} or explicit layer names
  double base_learning_rate = 0.0;
  std::string optimizer;
  std::string loss;
  std::vector<std::string> dataset_refs;  // manifest paths
};

FineTunePlan make_plan(FineTuneStage stage, std::vector<std::string> dataset_refs);

/// Key-value text, one field per line, byte-stable for identical inputs.
/// Optional schedule fields (batch_size, epochs, lr_schedule) are part of the
/// schema but left unset here.
std::string serialize_plan(const FineTunePlan& plan);

/// Inverse of serialize_plan; used by tests and downstream consumers.
FineTunePlan parse_plan(std::string_view text);

}  // namespace segkit
