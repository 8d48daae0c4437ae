#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tgif/tgif.hpp"

namespace {

using namespace tgif;

EvalScope scope_from_flag(const std::string& s) {
  if (s == "all" || s == "all_utterances") return EvalScope::all_utterances;
  if (s == "triggers" || s == "triggers_only") return EvalScope::triggers_only;
  fail_validation("unknown scope: \"" + s + "\" (use all or triggers)");
}

std::map<std::string, int> sizes_from_instances(const std::string& path, int jobs) {
  std::map<std::string, int> sizes;
  for (const auto& ins : read_instances(path, jobs)) sizes[ins.instance_id] = ins.size();
  return sizes;
}

std::string agreement_to_table(const AgreementReport& rep) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "annotator_a" << std::setw(14) << "annotator_b"
     << std::right << std::setw(10) << "alpha" << "\n";
  for (const auto& p : rep.pairwise) {
    os << std::left << std::setw(14) << p.annotator_a << std::setw(14) << p.annotator_b
       << std::right << std::setw(10) << std::fixed << std::setprecision(4) << p.alpha << "\n";
  }
  os << std::left << std::setw(28) << "average" << std::right << std::setw(10) << std::fixed
     << std::setprecision(4) << rep.average << "\n";
  return os.str();
}

void add_import_meld(CLI::App& app) {
  auto cmd = app.add_subcommand("import-meld", "Convert a MELD-style CSV into dialogue JSONL");
  auto csv = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto prefix = std::make_shared<std::string>("dia");
  cmd->add_option("--csv", *csv, "input CSV file")->required();
  cmd->add_option("--out", *out, "output dialogues JSONL")->required();
  cmd->add_option("--id-prefix", *prefix, "dialogue id prefix (default dia)");
  cmd->callback([=] {
    const auto dialogues = import_meld_csv(*csv, *prefix);
    write_dialogues(dialogues, *out);
    std::cerr << "wrote " << dialogues.size() << " dialogues to " << *out << "\n";
  });
}

void add_build_instances(CLI::App& app) {
  auto cmd = app.add_subcommand("build-instances", "Detect emotion flips and emit EFR instances");
  auto dialogues = std::make_shared<std::string>();
  auto gold = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--dialogues", *dialogues, "dialogues JSONL")->required();
  cmd->add_option("--gold", *gold, "gold annotation JSONL to attach");
  cmd->add_option("--out", *out, "output instances JSONL")->required();
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    const auto ds = read_dialogues(*dialogues, *jobs);
    std::vector<EfrInstance> instances;
    if (gold->empty()) {
      instances = build_instances(ds);
    } else {
      const AnnotationFile g = read_annotations(*gold, *jobs);
      instances = build_instances(ds, &g);
    }
    write_instances(instances, *out);
    std::cerr << "wrote " << instances.size() << " instances to " << *out << "\n";
  });
}

void add_stats(CLI::App& app) {
  auto cmd = app.add_subcommand("stats", "Corpus statistics: flip matrix and label distributions");
  auto instances = std::make_shared<std::string>();
  auto format = std::make_shared<std::string>("table");
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--instances", *instances, "instances JSONL")->required();
  cmd->add_option("--format", *format, "json or table (default table)");
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    const auto rep = corpus_stats(read_instances(*instances, *jobs));
    if (*format == "json") {
      std::cout << stats_to_json(rep).dump(2) << "\n";
    } else if (*format == "table") {
      std::cout << stats_to_table(rep);
    } else {
      fail_validation("unknown format: \"" + *format + "\"");
    }
  });
}

void add_agreement(CLI::App& app) {
  auto cmd = app.add_subcommand("agreement", "Krippendorff's alpha between annotation files");
  auto files = std::make_shared<std::vector<std::string>>();
  auto layer = std::make_shared<std::string>();
  auto instances = std::make_shared<std::string>();
  auto format = std::make_shared<std::string>("table");
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--annotations", *files, "two or more annotation JSONL files")
      ->required()
      ->expected(2, -1);
  cmd->add_option("--layer", *layer, "trigger or instigator")->required();
  cmd->add_option("--instances", *instances,
                  "instances JSONL supplying utterance counts per instance");
  cmd->add_option("--format", *format, "json or table (default table)");
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    std::vector<AnnotationFile> anns;
    for (const auto& f : *files) anns.push_back(read_annotations(f, *jobs));
    std::map<std::string, int> sizes;
    if (!instances->empty()) sizes = sizes_from_instances(*instances, *jobs);
    const AgreementLayer l = parse_agreement_layer(*layer);
    const auto rep = krippendorff_alpha(anns, l, sizes);
    if (*format == "json") {
      std::cout << agreement_to_json(rep, l).dump(2) << "\n";
    } else if (*format == "table") {
      std::cout << agreement_to_table(rep);
    } else {
      fail_validation("unknown format: \"" + *format + "\"");
    }
  });
}

void add_train(CLI::App& app) {
  auto cmd = app.add_subcommand("train", "Train the model and write the best-dev checkpoint");
  auto train_path = std::make_shared<std::string>();
  auto dev_path = std::make_shared<std::string>();
  auto config = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto log_path = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto epochs = std::make_shared<int>(-1);
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--train", *train_path, "training instances JSONL")->required();
  cmd->add_option("--dev", *dev_path, "development instances JSONL")->required();
  cmd->add_option("--config", *config, "JSON config file")->required();
  cmd->add_option("--out", *out, "output checkpoint path")->required();
  cmd->add_option("--log", *log_path, "also write the epoch log JSONL here");
  cmd->add_option("--seed", *seed, "random seed (default 0)");
  cmd->add_option("--epochs", *epochs, "override the config epoch count");
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    AppConfig cfg = load_app_config(*config);
    if (*epochs >= 0) cfg.train.epochs = *epochs;
    const auto train_set = read_instances(*train_path, *jobs);
    const auto dev_set = read_instances(*dev_path, *jobs);
    std::unique_ptr<JsonlWriter> log;
    if (!log_path->empty()) log = std::make_unique<JsonlWriter>(*log_path);
    auto on_epoch = [&](const EpochLog& e) {
      const Json line = {{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"dev_wf1", e.dev_wf1}};
      std::cout << line.dump() << "\n";
      if (log) log->write(line);
    };
    const TrainResult res = train(train_set, dev_set, cfg.model, cfg.train, *seed, *jobs, on_epoch);
    if (log) log->close();
    save_checkpoint(res.model, *out);
    std::cerr << "best epoch " << res.best_epoch << " dev_wf1 " << res.best_dev_wf1 << ", wrote "
              << *out << "\n";
  });
}

void add_eval(CLI::App& app) {
  auto cmd = app.add_subcommand("eval", "Score a checkpoint on a test split");
  auto test_path = std::make_shared<std::string>();
  auto ckpt = std::make_shared<std::string>();
  auto scope = std::make_shared<std::string>("all");
  auto format = std::make_shared<std::string>("table");
  auto train_path = std::make_shared<std::string>();
  auto directionality = std::make_shared<bool>(false);
  auto top_k = std::make_shared<int>(3);
  auto bottom_k = std::make_shared<int>(3);
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--test", *test_path, "test instances JSONL")->required();
  cmd->add_option("--ckpt", *ckpt, "checkpoint path")->required();
  cmd->add_option("--scope", *scope, "all or triggers (default all)");
  cmd->add_flag("--directionality", *directionality, "add per-flip-direction metrics");
  cmd->add_option("--train", *train_path,
                  "training instances JSONL; adds the class-wise report ranked by its support");
  cmd->add_option("--top", *top_k, "classes from the top of the support ranking (default 3)");
  cmd->add_option("--bottom", *bottom_k,
                  "classes from the bottom of the support ranking (default 3)");
  cmd->add_option("--format", *format, "json or table (default table)");
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    const TgifModel model = load_checkpoint(*ckpt);
    const auto test_set = read_instances(*test_path, *jobs);
    const EvalScope sc = scope_from_flag(*scope);
    const auto preds = predict_all(model, test_set, *jobs);
    const auto pooled = pool_examples(test_set, preds, model.space(), sc);
    const Metrics m = weighted_prf(pooled.gold, pooled.pred, model.space());
    const bool json = *format == "json";
    if (!json && *format != "table") fail_validation("unknown format: \"" + *format + "\"");
    Json out = {{"scope", std::string(to_string(sc))}, {"metrics", metrics_to_json(m)}};
    std::string table = metrics_to_table(m);
    if (*directionality) {
      const auto rep = directionality_report(test_set, preds, model.space(), sc);
      out["directionality"] = directionality_to_json(rep);
      table += "\n" + directionality_to_table(rep);
    }
    if (!train_path->empty()) {
      const auto support = space_support(read_instances(*train_path, *jobs), model.space());
      const Json cw = classwise_report(m, model.space(), support, *top_k, *bottom_k);
      out["classwise"] = cw;
      if (!json) {
        std::ostringstream os;
        os << "\nclass-wise by training support\n";
        for (const auto& part : {"top", "bottom"}) {
          for (const auto& row : cw[part]) {
            os << "  " << std::left << std::setw(16) << row["label"].get<std::string>()
               << std::right << std::setw(9) << row["train_support"].get<long long>()
               << std::setw(9) << std::fixed << std::setprecision(4) << row["f1"].get<double>()
               << "\n";
          }
        }
        table += os.str();
      }
    }
    if (json) {
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << table;
    }
  });
}

void add_predict(CLI::App& app) {
  auto cmd = app.add_subcommand("predict", "Write per-utterance probabilities and label sets");
  auto instances = std::make_shared<std::string>();
  auto ckpt = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--instances", *instances, "instances JSONL")->required();
  cmd->add_option("--ckpt", *ckpt, "checkpoint path")->required();
  cmd->add_option("--out", *out, "output predictions JSONL")->required();
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    const TgifModel model = load_checkpoint(*ckpt);
    const auto ins = read_instances(*instances, *jobs);
    const auto preds = predict_all(model, ins, *jobs);
    JsonlWriter w(*out);
    for (const auto& p : preds) w.write(prediction_to_json(p, model.space()));
    w.close();
    std::cerr << "wrote " << preds.size() << " predictions to " << *out << "\n";
  });
}

void add_ablate(CLI::App& app) {
  auto cmd = app.add_subcommand("ablate", "Train nested module subsets under all label setups");
  auto train_path = std::make_shared<std::string>();
  auto dev_path = std::make_shared<std::string>();
  auto config = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto epochs = std::make_shared<int>(-1);
  auto format = std::make_shared<std::string>("table");
  auto jobs = std::make_shared<int>(1);
  cmd->add_option("--train", *train_path, "training instances JSONL")->required();
  cmd->add_option("--dev", *dev_path, "development instances JSONL")->required();
  cmd->add_option("--config", *config, "JSON config file")->required();
  cmd->add_option("--seed", *seed, "random seed (default 0)");
  cmd->add_option("--epochs", *epochs, "override the config epoch count");
  cmd->add_option("--format", *format, "json or table (default table)");
  cmd->add_option("--jobs", *jobs, "worker threads");
  cmd->callback([=] {
    AppConfig cfg = load_app_config(*config);
    if (*epochs >= 0) cfg.train.epochs = *epochs;
    const auto train_set = read_instances(*train_path, *jobs);
    const auto dev_set = read_instances(*dev_path, *jobs);
    auto on_cell = [](const std::string& row, const std::string& setup, double wf1) {
      std::cerr << row << " / " << setup << ": dev_wf1 " << wf1 << "\n";
    };
    const auto rep =
        ablation_report(train_set, dev_set, cfg.model, cfg.train, *seed, *jobs, on_cell);
    if (*format == "json") {
      std::cout << ablation_to_json(rep).dump(2) << "\n";
    } else if (*format == "table") {
      std::cout << ablation_to_table(rep);
    } else {
      fail_validation("unknown format: \"" + *format + "\"");
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instigator-based emotion flip reasoning toolkit"};
  app.require_subcommand(1);
  add_import_meld(app);
  add_build_instances(app);
  add_stats(app);
  add_agreement(app);
  add_train(app);
  add_eval(app);
  add_predict(app);
  add_ablate(app);
  try {
    app.parse(argc, argv);
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
