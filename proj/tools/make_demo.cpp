#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tgif/tgif.hpp"

namespace {

using namespace tgif;

// All 42 ordered emotion pairs, cycled over dialogues.
std::pair<Emotion, Emotion> pair_for(std::size_t index) {
  std::vector<std::pair<Emotion, Emotion>> pairs;
  for (Emotion s : kAllEmotions) {
    for (Emotion t : kAllEmotions) {
      if (s != t) pairs.emplace_back(s, t);
    }
  }
  return pairs[index % pairs.size()];
}

// Two fine labels, a pure function of (source, target): the ambiguous
// "confusion" (legal under every polarity mask, and frequent enough to keep
// its own class in the count-based space) plus one pair-dependent pick from
// the polarity-allowed set.
std::vector<std::string> labels_for(Emotion src, Emotion tgt) {
  const auto allowed = allowed_fine_set(src, tgt, MaskMode::polarity);
  std::vector<int> ids;
  for (int i = 0; i < kFineLabelCount; ++i) {
    if (allowed[i] && kFineLabels[i].name != std::string_view("confusion")) ids.push_back(i);
  }
  const int s = static_cast<int>(src), t = static_cast<int>(tgt);
  const int pick = (s * 11 + t * 5 + 3) % static_cast<int>(ids.size());
  std::vector<std::string> out = {"confusion", std::string(kFineLabels[ids[pick]].name)};
  std::sort(out.begin(), out.end());
  return out;
}

std::string random_text(Rng& rng) {
  const std::size_t n = 3 + rng.below(4);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += "w" + std::to_string(10 + rng.below(50));
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic demo corpus"};
  std::string out_dir = "data/demo";
  std::uint64_t seed = 20240817;
  int n_train = 64, n_dev = 16;
  app.add_option("--out", out_dir, "output directory (default data/demo)");
  app.add_option("--seed", seed, "text generator seed");
  app.add_option("--train", n_train, "training dialogues (default 64)");
  app.add_option("--dev", n_dev, "development dialogues (default 16)");
  try {
    app.parse(argc, argv);

    std::filesystem::create_directories(out_dir);
    Rng rng(seed);
    std::vector<Dialogue> dialogues;
    std::vector<AnnotationRecord> gold;
    const int total = n_train + n_dev;
    for (int d = 0; d < total; ++d) {
      const auto [src, tgt] = pair_for(d);
      // the other speaker's constant emotion avoids src and tgt, so gold
      // utterances are exactly those whose emotion is src or tgt
      Emotion filler = static_cast<Emotion>((static_cast<int>(src) + 1) % kEmotionCount);
      if (filler == tgt) filler = static_cast<Emotion>((static_cast<int>(src) + 2) % kEmotionCount);
      Dialogue dia;
      dia.dialogue_id = "demo" + std::to_string(d);
      dia.split = d < n_train ? "train" : "dev";
      const Emotion seq[6] = {src, filler, src, filler, src, tgt};
      const char* speakers[6] = {"s0", "s1", "s0", "s1", "s0", "s0"};
      for (int u = 0; u < 6; ++u) {
        dia.utterances.push_back({u, speakers[u], random_text(rng), seq[u]});
      }
      dialogues.push_back(dia);

      AnnotationRecord rec;
      rec.annotator_id = "gold";
      rec.instance_id = instance_id_for(dia.dialogue_id, 5);
      rec.trigger_indices = {0, 2, 4, 5};
      for (int u : rec.trigger_indices) rec.instigators[u] = labels_for(src, tgt);
      gold.push_back(rec);
    }

    const std::string dia_path = out_dir + "/dialogues.jsonl";
    write_dialogues(dialogues, dia_path);

    AnnotationFile gold_file;
    gold_file.annotator_id = "gold";
    gold_file.records = gold;
    for (std::size_t i = 0; i < gold.size(); ++i) gold_file.by_instance[gold[i].instance_id] = i;
    auto instances = build_instances(dialogues, &gold_file);
    require(static_cast<int>(instances.size()) == total, "demo: expected one instance per dialogue");

    std::vector<EfrInstance> train_set, dev_set;
    for (auto& ins : instances) {
      (ins.split == "train" ? train_set : dev_set).push_back(ins);
    }
    write_instances(train_set, out_dir + "/train_instances.jsonl");
    write_instances(dev_set, out_dir + "/dev_instances.jsonl");

    // two annotators over the training instances: a is gold, b drops one
    // label from every fifth instance
    std::vector<AnnotationRecord> ann_a, ann_b;
    for (int d = 0; d < n_train; ++d) {
      AnnotationRecord a = gold[d];
      a.annotator_id = "a";
      ann_a.push_back(a);
      AnnotationRecord b = gold[d];
      b.annotator_id = "b";
      if (d % 5 == 0 && b.instigators[5].size() > 1) b.instigators[5].pop_back();
      ann_b.push_back(b);
    }
    write_annotations(ann_a, out_dir + "/annotations_a.jsonl");
    write_annotations(ann_b, out_dir + "/annotations_b.jsonl");

    const AppConfig defaults;
    Json config = tgif_config_to_json(defaults.model);
    config.update(train_config_to_json(defaults.train));
    config["epochs"] = 160;
    std::ofstream cfg(out_dir + "/config.json", std::ios::binary);
    cfg << config.dump(2) << "\n";
    cfg.close();
    if (!cfg) fail_runtime("write failed: " + out_dir + "/config.json");

    std::cerr << "wrote demo corpus (" << n_train << " train / " << n_dev << " dev) to "
              << out_dir << "\n";
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const tgif::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == tgif::Error::Kind::validation ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
