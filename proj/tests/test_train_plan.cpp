#include "segkit/train_plan.hpp"

#include "segkit/voc.hpp"

#include <doctest.h>

using namespace segkit;

TEST_CASE("baseline plan trains everything at 1e-5") {
  const FineTunePlan plan = make_plan(FineTuneStage::baseline, {"weak.txt"});
  CHECK(plan.trainable_layers == std::vector<std::string>{"all"});
  CHECK(plan.base_learning_rate == 1e-5);
  CHECK(plan.optimizer == "adam");
  CHECK(plan.loss == "pixelwise_softmax");
  CHECK(plan.dataset_refs == std::vector<std::string>{"weak.txt"});
}

TEST_CASE("synthetic plan trains the five fusion layers at 1e-6") {
  const FineTunePlan plan = make_plan(FineTuneStage::synthetic, {"syn.txt"});
  const std::vector<std::string> expected = {"score_pool3", "score_pool4", "upscore2",
                                             "upscore_pool4", "upscore8"};
  CHECK(plan.trainable_layers == expected);
  CHECK(plan.trainable_layers.size() == 5);
  CHECK(plan.base_learning_rate == 1e-6);
  CHECK(plan.optimizer == "adam");
  CHECK(plan.loss == "pixelwise_softmax");
}

TEST_CASE("stage parsing") {
  CHECK(parse_stage("baseline") == FineTuneStage::baseline);
  CHECK(parse_stage("synthetic") == FineTuneStage::synthetic);
  CHECK_THROWS_AS(parse_stage("x"), Error);
  CHECK_THROWS_AS(parse_stage(""), Error);
}

TEST_CASE("plans serialize byte-stably and round trip") {
  const FineTunePlan plan = make_plan(FineTuneStage::synthetic, {"a.txt", "b.txt"});
  const std::string once = serialize_plan(plan);
  const std::string twice = serialize_plan(make_plan(FineTuneStage::synthetic, {"a.txt", "b.txt"}));
  CHECK(once == twice);

  const FineTunePlan parsed = parse_plan(once);
  CHECK(parsed.stage == plan.stage);
  CHECK(parsed.trainable_layers == plan.trainable_layers);
  CHECK(parsed.base_learning_rate == plan.base_learning_rate);
  CHECK(parsed.optimizer == plan.optimizer);
  CHECK(parsed.loss == plan.loss);
  CHECK(parsed.dataset_refs == plan.dataset_refs);
}

TEST_CASE("plan parser rejects junk") {
  CHECK_THROWS_AS(parse_plan("stage = warp\n"), Error);
  CHECK_THROWS_AS(parse_plan("optimizer = adam\n"), Error);  // stage missing
  CHECK_THROWS_AS(parse_plan("stage = baseline\nwat = 1\nbase_learning_rate = 1e-5\n"), Error);
  CHECK_THROWS_AS(parse_plan("stage = baseline\nbase_learning_rate = -3\n"), Error);
}
