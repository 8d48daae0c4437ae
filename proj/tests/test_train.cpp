#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tgif/train.hpp"

using namespace tgif;

namespace {

Utterance utt(int index, std::string speaker, Emotion e, std::string text) {
  Utterance u;
  u.index = index;
  u.speaker = std::move(speaker);
  u.text = std::move(text);
  u.emotion = e;
  return u;
}

EfrInstance mk(std::string id, Emotion source, Emotion target, std::vector<Utterance> utts,
               std::vector<bool> triggers, std::vector<std::vector<std::string>> instigators) {
  EfrInstance ins;
  ins.instance_id = std::move(id);
  ins.dialogue_id = ins.instance_id.substr(0, ins.instance_id.find('#'));
  ins.utterances = std::move(utts);
  ins.target_index = static_cast<int>(ins.utterances.size()) - 1;
  ins.target_speaker = ins.utterances.back().speaker;
  ins.source_emotion = source;
  ins.target_emotion = target;
  ins.trigger_flags = std::move(triggers);
  ins.instigators = std::move(instigators);
  return ins;
}

std::vector<EfrInstance> train_fixture() {
  return {
      mk("t0#2", Emotion::sadness, Emotion::joy,
         {utt(0, "a", Emotion::sadness, "i lost the keys again"),
          utt(1, "b", Emotion::neutral, "i found them by the door"),
          utt(2, "a", Emotion::joy, "oh wonderful thank you")},
         {false, true, true}, {{}, {"benefit"}, {"relief"}}),
      mk("t1#1", Emotion::joy, Emotion::anger,
         {utt(0, "a", Emotion::joy, "the cake looks great"),
          utt(1, "b", Emotion::anger, "you ate the last slice")},
         {true, true}, {{"cheer"}, {"abuse"}}),
      mk("t2#2", Emotion::neutral, Emotion::surprise,
         {utt(0, "b", Emotion::neutral, "someone is at the door"),
          utt(1, "a", Emotion::neutral, "were you expecting anyone"),
          utt(2, "b", Emotion::surprise, "it is my old roommate")},
         {false, false, true}, {{}, {}, {"shock"}}),
      mk("t3#1", Emotion::fear, Emotion::neutral,
         {utt(0, "a", Emotion::fear, "the lights went out"),
          utt(1, "a", Emotion::neutral, "ok the fuse just tripped")},
         {true, true}, {{"horror"}, {"calmness"}}),
  };
}

std::vector<EfrInstance> dev_fixture() {
  return {
      mk("d0#1", Emotion::anger, Emotion::joy,
         {utt(0, "a", Emotion::anger, "you ate the last slice"),
          utt(1, "a", Emotion::joy, "oh wonderful there is more cake")},
         {true, true}, {{"abuse"}, {"cheer"}}),
      mk("d1#1", Emotion::joy, Emotion::sadness,
         {utt(0, "b", Emotion::joy, "the keys are by the door"),
          utt(1, "b", Emotion::sadness, "i lost them again")},
         {false, true}, {{}, {"loss"}}),
  };
}

TgifConfig small_config() {
  TgifConfig c;
  c.d_model = 8;
  c.heads = 2;
  c.d_ff = 16;
  c.gru_hidden = 6;
  c.fusion_hidden = {10};
  c.max_speakers_per_instance = 4;
  return c;
}

bool params_equal(const std::map<std::string, Tensor>& a, const std::map<std::string, Tensor>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [name, t] : a) {
    auto it = b.find(name);
    if (it == b.end() || t.shape != it->second.shape || t.data != it->second.data) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("training is a function of the seed alone") {
  const auto train_set = train_fixture();
  const auto dev_set = dev_fixture();
  TgifConfig cfg = small_config();
  TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 2;
  tc.lr = 0.01;

  TrainResult a = train(train_set, dev_set, cfg, tc, 5, 1);
  TrainResult b = train(train_set, dev_set, cfg, tc, 5, 1);
  TrainResult c = train(train_set, dev_set, cfg, tc, 5, 3);

  REQUIRE(a.log.size() == 3);
  for (const TrainResult* other : {&b, &c}) {
    REQUIRE(other->log.size() == a.log.size());
    for (std::size_t e = 0; e < a.log.size(); ++e) {
      CHECK(other->log[e].epoch == a.log[e].epoch);
      CHECK(other->log[e].train_loss == a.log[e].train_loss);
      CHECK(other->log[e].dev_wf1 == a.log[e].dev_wf1);
    }
    CHECK(other->best_epoch == a.best_epoch);
    CHECK(other->best_dev_wf1 == a.best_dev_wf1);
    CHECK(params_equal(other->model.params().all(), a.model.params().all()));
  }

  TrainResult d = train(train_set, dev_set, cfg, tc, 6, 1);
  CHECK_FALSE(params_equal(d.model.params().all(), a.model.params().all()));
}

TEST_CASE("best dev epoch parameters are kept") {
  const auto train_set = train_fixture();
  const auto dev_set = dev_fixture();
  TgifConfig cfg = small_config();
  TrainConfig tc;
  tc.epochs = 6;
  tc.batch_size = 2;
  tc.lr = 0.02;

  std::vector<EpochLog> seen;
  TrainResult res =
      train(train_set, dev_set, cfg, tc, 7, 1, [&](const EpochLog& l) { seen.push_back(l); });

  REQUIRE(res.log.size() == 6);
  REQUIRE(seen.size() == res.log.size());
  for (std::size_t e = 0; e < seen.size(); ++e) {
    CHECK(seen[e].epoch == res.log[e].epoch);
    CHECK(seen[e].train_loss == res.log[e].train_loss);
    CHECK(seen[e].dev_wf1 == res.log[e].dev_wf1);
  }
  for (std::size_t e = 0; e < res.log.size(); ++e) {
    CHECK(res.log[e].epoch == static_cast<int>(e) + 1);
  }

  // First epoch reaching the maximum wins; later ties do not replace it.
  int want_epoch = 0;
  double want_best = -1.0;
  for (const EpochLog& l : res.log) {
    if (l.dev_wf1 > want_best) {
      want_best = l.dev_wf1;
      want_epoch = l.epoch;
    }
  }
  CHECK(res.best_epoch == want_epoch);
  CHECK(res.best_dev_wf1 == want_best);

  // The returned parameters really are that epoch's snapshot.
  CHECK(dev_weighted_f1(res.model, dev_set, 1) == res.best_dev_wf1);
}

TEST_CASE("zero epochs keeps the initial parameters") {
  const auto train_set = train_fixture();
  const auto dev_set = dev_fixture();
  TgifConfig cfg = small_config();
  TrainConfig tc;
  tc.epochs = 0;

  TrainResult res = train(train_set, dev_set, cfg, tc, 9, 1);
  CHECK(res.log.empty());
  CHECK(res.best_epoch == 0);
  CHECK(res.best_dev_wf1 == -1.0);

  TgifModel fresh(cfg, space_for(cfg.label_setup, train_set),
                  Vocab::build(train_set, cfg.max_tokens_per_utterance), 9);
  CHECK(params_equal(res.model.params().all(), fresh.params().all()));
}

TEST_CASE("optimization reduces the training loss") {
  const auto train_set = train_fixture();
  TgifConfig cfg = small_config();
  TrainConfig tc;
  tc.epochs = 10;
  tc.batch_size = 2;
  tc.lr = 0.02;

  TrainResult res = train(train_set, {}, cfg, tc, 3, 1);
  REQUIRE(res.log.size() == 10);
  double lowest = res.log.front().train_loss;
  for (const EpochLog& l : res.log) lowest = std::min(lowest, l.train_loss);
  CHECK(lowest < res.log.front().train_loss);
  CHECK(res.log.back().train_loss < res.log.front().train_loss);

  // No dev set: every epoch scores 0.0 and the first one is kept as best.
  CHECK(res.best_epoch == 1);
  CHECK(res.best_dev_wf1 == 0.0);
}

TEST_CASE("train rejects bad inputs") {
  TgifConfig cfg = small_config();
  TrainConfig tc;
  tc.epochs = 1;
  CHECK_THROWS_WITH(train({}, {}, cfg, tc, 1, 1),
                    Catch::Matchers::ContainsSubstring("empty training set"));

  TrainConfig bad;
  bad.batch_size = 0;
  CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("batch_size"));
  bad = TrainConfig{};
  bad.epochs = -1;
  CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("epochs"));
  bad = TrainConfig{};
  bad.gamma = -0.5;
  CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("gamma"));
  bad = TrainConfig{};
  bad.alpha = 1.0;
  CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("alpha"));
}

TEST_CASE("train config json round trip") {
  TrainConfig c;
  c.lr = 0.05;
  c.gamma = 1.5;
  c.alpha = 0.4;
  c.batch_size = 4;
  c.epochs = 17;
  TrainConfig back = train_config_from_json(train_config_to_json(c), "test");
  CHECK(back.lr == c.lr);
  CHECK(back.beta1 == c.beta1);
  CHECK(back.beta2 == c.beta2);
  CHECK(back.adam_eps == c.adam_eps);
  CHECK(back.gamma == c.gamma);
  CHECK(back.alpha == c.alpha);
  CHECK(back.batch_size == c.batch_size);
  CHECK(back.epochs == c.epochs);

  TrainConfig partial = train_config_from_json(Json{{"lr", 0.5}}, "test");
  CHECK(partial.lr == 0.5);
  CHECK(partial.epochs == TrainConfig{}.epochs);
  CHECK(partial.batch_size == TrainConfig{}.batch_size);

  CHECK_THROWS_WITH(train_config_from_json(Json{{"lr", "fast"}}, "test"),
                    Catch::Matchers::ContainsSubstring("number"));
  CHECK_THROWS_WITH(train_config_from_json(Json{{"epochs", 2.5}}, "test"),
                    Catch::Matchers::ContainsSubstring("epochs"));
  CHECK_THROWS_WITH(train_config_from_json(Json{{"alpha", 1.5}}, "test"),
                    Catch::Matchers::ContainsSubstring("alpha"));
}

TEST_CASE("app config merges model and training keys") {
  Json j = {{"d_model", 8}, {"heads", 2},      {"d_ff", 16},  {"gru_hidden", 6},
            {"lr", 0.25},   {"batch_size", 4}, {"epochs", 2}};
  AppConfig app = app_config_from_json(j, "test");
  CHECK(app.model.d_model == 8);
  CHECK(app.model.heads == 2);
  CHECK(app.train.lr == 0.25);
  CHECK(app.train.epochs == 2);

  j["banana"] = 1;
  CHECK_THROWS_WITH(app_config_from_json(j, "test"),
                    Catch::Matchers::ContainsSubstring("banana"));

  CHECK_THROWS_WITH(load_app_config("test_scratch/no_such_config.json"),
                    Catch::Matchers::ContainsSubstring("cannot open"));

  std::filesystem::create_directories("test_scratch");
  const std::string path = "test_scratch/app_config.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << R"({"d_model": 8, "heads": 2, "epochs": 3})";
  }
  AppConfig loaded = load_app_config(path);
  CHECK(loaded.model.d_model == 8);
  CHECK(loaded.train.epochs == 3);

  {
    std::ofstream out(path, std::ios::binary);
    out << "[1, 2]";
  }
  CHECK_THROWS_WITH(load_app_config(path), Catch::Matchers::ContainsSubstring("JSON object"));
}

TEST_CASE("label space derivation per setup") {
  const auto train_set = train_fixture();
  CHECK(space_for(LabelSetup::fine27, train_set).size() == 27);
  CHECK(space_for(LabelSetup::coarse_defn14, train_set).size() == 14);

  // Every fixture label is rare, so the count-based space collapses to other.
  LabelSpace counted = space_for(LabelSetup::coarse_count14, train_set);
  REQUIRE(counted.size() == 1);
  CHECK(counted.label(0) == "other");
  LabelSpace direct = LabelSpace::coarse_count(corpus_stats(train_set).fine_counts);
  CHECK(counted.labels() == direct.labels());
}

TEST_CASE("prediction helpers agree with the model") {
  const auto train_set = train_fixture();
  const auto dev_set = dev_fixture();
  TgifConfig cfg = small_config();
  TgifModel model(cfg, space_for(cfg.label_setup, train_set),
                  Vocab::build(train_set, cfg.max_tokens_per_utterance), 21);

  auto preds = predict_all(model, dev_set, 2);
  REQUIRE(preds.size() == dev_set.size());
  for (std::size_t i = 0; i < dev_set.size(); ++i) {
    Prediction one = model.predict(dev_set[i]);
    CHECK(one.instance_id == preds[i].instance_id);
    CHECK(one.labels == preds[i].labels);
    CHECK(one.probs == preds[i].probs);
  }

  const auto pooled = pool_examples(dev_set, preds, model.space(), EvalScope::all_utterances);
  CHECK(dev_weighted_f1(model, dev_set, 1) ==
        weighted_prf(pooled.gold, pooled.pred, model.space()).f1);
  CHECK(dev_weighted_f1(model, {}, 1) == 0.0);
}
