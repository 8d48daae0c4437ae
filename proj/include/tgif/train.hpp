#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tgif/instances.hpp"
#include "tgif/loss.hpp"
#include "tgif/metrics.hpp"
#include "tgif/model.hpp"
#include "tgif/optim.hpp"

namespace tgif {

struct TrainConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double gamma = 2.0;
  double alpha = 0.25;
  int batch_size = 8;
  int epochs = 100;

  void validate() const {
    require(batch_size > 0, "train config: batch_size must be positive");
    require(epochs >= 0, "train config: epochs must be non-negative");
    require(gamma >= 0.0, "train config: gamma must be non-negative");
    require(alpha > 0.0 && alpha < 1.0, "train config: alpha must lie in (0, 1)");
  }
};

inline const std::vector<std::string>& train_config_keys() {
  static const std::vector<std::string> keys = {"lr",    "beta1", "beta2",      "adam_eps",
                                                "gamma", "alpha", "batch_size", "epochs"};
  return keys;
}

inline Json train_config_to_json(const TrainConfig& c) {
  return {{"lr", c.lr},       {"beta1", c.beta1}, {"beta2", c.beta2},
          {"adam_eps", c.adam_eps}, {"gamma", c.gamma}, {"alpha", c.alpha},
          {"batch_size", c.batch_size}, {"epochs", c.epochs}};
}

inline TrainConfig train_config_from_json(const Json& j, const std::string& where) {
  RecordReader r{j, where};
  TrainConfig c;
  auto get_num = [&](const char* k, double& dst) {
    if (!j.contains(k)) return;
    const Json& v = r.field(k);
    if (!v.is_number()) r.fail(std::string("field \"") + k + "\" must be a number");
    dst = v.get<double>();
  };
  get_num("lr", c.lr);
  get_num("beta1", c.beta1);
  get_num("beta2", c.beta2);
  get_num("adam_eps", c.adam_eps);
  get_num("gamma", c.gamma);
  get_num("alpha", c.alpha);
  if (j.contains("batch_size")) c.batch_size = static_cast<int>(r.integer("batch_size"));
  if (j.contains("epochs")) c.epochs = static_cast<int>(r.integer("epochs"));
  c.validate();
  return c;
}

// One JSON config file carries both the model and the training settings.
struct AppConfig {
  TgifConfig model;
  TrainConfig train;
};

inline AppConfig app_config_from_json(const Json& j, const std::string& where) {
  RecordReader r{j, where};
  std::vector<std::string> allowed = tgif_config_keys();
  allowed.insert(allowed.end(), train_config_keys().begin(), train_config_keys().end());
  r.check_keys(allowed);
  return {tgif_config_from_json(j, where), train_config_from_json(j, where)};
}

inline AppConfig load_app_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_validation("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail_validation(path + ": config must be a JSON object");
  return app_config_from_json(j, path);
}

// The label space a training run derives from its training split.
inline LabelSpace space_for(LabelSetup setup, const std::vector<EfrInstance>& train_set) {
  switch (setup) {
    case LabelSetup::fine27: return LabelSpace::fine27();
    case LabelSetup::coarse_defn14: return LabelSpace::coarse_defn14();
    default: return LabelSpace::coarse_count(corpus_stats(train_set).fine_counts);
  }
}

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_wf1 = 0.0;
};

struct TrainResult {
  TgifModel model;  // parameters of the best dev epoch
  std::vector<EpochLog> log;
  int best_epoch = 0;  // 0: initial parameters kept (epochs == 0)
  double best_dev_wf1 = -1.0;
};

inline std::vector<Prediction> predict_all(const TgifModel& model,
                                           const std::vector<EfrInstance>& instances, int jobs) {
  return parallel_map<Prediction>(instances.size(), jobs,
                                  [&](std::size_t i) { return model.predict(instances[i]); });
}

inline double dev_weighted_f1(const TgifModel& model, const std::vector<EfrInstance>& dev_set,
                              int jobs) {
  if (dev_set.empty()) return 0.0;
  const auto preds = predict_all(model, dev_set, jobs);
  const auto pooled = pool_examples(dev_set, preds, model.space(), EvalScope::all_utterances);
  return weighted_prf(pooled.gold, pooled.pred, model.space()).f1;
}

// Mini-batch training with a per-epoch shuffle and the best-dev-epoch
// parameters kept. Gradients accumulate in shuffled-batch order, so the
// result is a function of the seed alone, independent of jobs.
inline TrainResult train(const std::vector<EfrInstance>& train_set,
                         const std::vector<EfrInstance>& dev_set, const TgifConfig& cfg,
                         const TrainConfig& tc, std::uint64_t seed, int jobs = 1,
                         const std::function<void(const EpochLog&)>& on_epoch = {}) {
  cfg.validate();
  tc.validate();
  require(!train_set.empty(), "train: empty training set");

  TrainResult res{TgifModel(cfg, space_for(cfg.label_setup, train_set),
                            Vocab::build(train_set, cfg.max_tokens_per_utterance), seed),
                  {}, 0, -1.0};
  TgifModel& model = res.model;
  Adam adam(model.params(), tc.lr, tc.beta1, tc.beta2, tc.adam_eps);
  std::map<std::string, Tensor> best_params = model.params().all();

  struct ItemResult {
    double loss = 0.0;
    std::map<std::string, Tensor> grads;
  };

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    Rng shuffle_rng(Rng::mix(seed, static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
      const std::size_t batch = std::min<std::size_t>(tc.batch_size, order.size() - start);
      auto items = parallel_map<ItemResult>(batch, jobs, [&](std::size_t b) {
        const EfrInstance& ins = train_set[order[start + b]];
        Tape tape;
        BoundParams bp(model.params(), tape);
        Rng dropout_rng(Rng::mix(Rng::mix(seed, 0x64726f70),
                                 Rng::mix(static_cast<std::uint64_t>(epoch), start + b)));
        auto fwd = model.forward(tape, bp, ins, cfg.dropout > 0.0 ? &dropout_rng : nullptr);
        Var loss = focal_loss(tape, fwd.probs, gold_matrix(ins, model.space()), fwd.mask,
                              tc.gamma, tc.alpha);
        const double value = loss.val().data[0];
        if (!std::isfinite(value)) {
          fail_runtime("train: non-finite loss at instance " + ins.instance_id + " in epoch " +
                       std::to_string(epoch));
        }
        tape.backward(loss);
        return ItemResult{value, bp.grads()};
      });

      std::map<std::string, Tensor> mean = std::move(items[0].grads);
      loss_sum += items[0].loss;
      for (std::size_t b = 1; b < batch; ++b) {
        loss_sum += items[b].loss;
        for (auto& [name, g] : items[b].grads) {
          Tensor& acc = mean.at(name);
          for (std::size_t k = 0; k < g.size(); ++k) acc.data[k] += g.data[k];
        }
      }
      const double inv = 1.0 / static_cast<double>(batch);
      for (auto& [name, g] : mean) {
        for (double& v : g.data) v *= inv;
      }
      adam.step(mean);
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(train_set.size());
    log.dev_wf1 = dev_weighted_f1(model, dev_set, jobs);
    res.log.push_back(log);
    if (on_epoch) on_epoch(log);
    if (log.dev_wf1 > res.best_dev_wf1) {
      res.best_dev_wf1 = log.dev_wf1;
      res.best_epoch = epoch;
      best_params = model.params().all();
    }
  }

  model.params().all() = std::move(best_params);
  return res;
}

}  // namespace tgif
