#include "segkit/train_plan.hpp"

#include "segkit/voc.hpp"

#include <sstream>

namespace segkit {

namespace {

const std::vector<std::string> kSyntheticStageLayers = {
    "score_pool3", "score_pool4", "upscore2", "upscore_pool4", "upscore8"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

FineTuneStage parse_stage(std::string_view name) {
  if (name == "baseline") return FineTuneStage::baseline;
  if (name == "synthetic") return FineTuneStage::synthetic;
  throw Error("unknown fine-tune stage: \"" + std::string(name) +
              "\" (expected baseline or synthetic)");
}

std::string stage_name(FineTuneStage stage) {
  return stage == FineTuneStage::baseline ? "baseline" : "synthetic";
}

FineTunePlan make_plan(FineTuneStage stage, std::vector<std::string> dataset_refs) {
  FineTunePlan plan;
  plan.stage = stage;
  plan.optimizer = "adam";
  plan.loss = "pixelwise_softmax";
  plan.dataset_refs = std::move(dataset_refs);
  if (stage == FineTuneStage::baseline) {
    plan.trainable_layers = {"all"};
    plan.base_learning_rate = 1e-5;
  } else {
    plan.trainable_layers = kSyntheticStageLayers;
    plan.base_learning_rate = 1e-6;
  }
  return plan;
}

std::string serialize_plan(const FineTunePlan& plan) {
  std::ostringstream out;
  out << "stage = " << stage_name(plan.stage) << '\n';
  out << "trainable_layers =";
  for (const std::string& layer : plan.trainable_layers) out << ' ' << layer;
  out << '\n';
  out << "base_learning_rate = " << plan.base_learning_rate << '\n';
  out << "optimizer = " << plan.optimizer << '\n';
  out << "loss = " << plan.loss << '\n';
  for (const std::string& ref : plan.dataset_refs) out << "dataset_ref = " << ref << '\n';
  return out.str();
}

FineTunePlan parse_plan(std::string_view text) {
  FineTunePlan plan;
  bool saw_stage = false;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("plan line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "stage") {
      plan.stage = parse_stage(value);
      saw_stage = true;
    } else if (key == "trainable_layers") {
      plan.trainable_layers.clear();
      std::istringstream layers(value);
      std::string layer;
      while (layers >> layer) plan.trainable_layers.push_back(layer);
    } else if (key == "base_learning_rate") {
      plan.base_learning_rate = std::stod(value);
    } else if (key == "optimizer") {
      plan.optimizer = value;
    } else if (key == "loss") {
      plan.loss = value;
    } else if (key == "dataset_ref") {
      plan.dataset_refs.push_back(value);
    } else if (key == "batch_size" || key == "epochs" || key == "lr_schedule") {
      // Optional schedule fields; accepted, nothing here consumes them.
    } else {
      throw Error("plan line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    }
  }
  if (!saw_stage) throw Error("plan is missing the stage field");
  if (plan.base_learning_rate <= 0) throw Error("plan learning rate must be positive");
  return plan;
}

}  // namespace segkit
