#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tgif/tgif.hpp"

using namespace tgif;
namespace fs = std::filesystem;

namespace {

std::string scratch() {
  const std::string dir = "test_scratch/cli";
  fs::create_directories(dir);
  return dir;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

std::string demo(const std::string& name) {
  return std::string(TGIF_REPO_DIR) + "/data/demo/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = scratch() + "/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int seq = 0;
  const std::string base = scratch() + "/run" + std::to_string(seq++);
  const std::string cmd =
      q(TGIF_CLI_PATH) + " " + args + " >" + q(base + ".out") + " 2>" + q(base + ".err");
  const int status = std::system(cmd.c_str());
  RunResult r;
  if (status != -1 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// A small checkpoint shared by the eval and predict cases.
std::string demo_ckpt() {
  const std::string path = scratch() + "/demo.ckpt";
  if (!fs::exists(path)) {
    run_cli("train --train " + q(demo("train_instances.jsonl")) + " --dev " +
            q(demo("dev_instances.jsonl")) + " --config " + q(demo("config.json")) + " --out " +
            q(path) + " --epochs 2 --seed 3");
  }
  return path;
}

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("frobnicate").code == 1);
  CHECK(run_cli("--help").code == 0);

  RunResult missing = run_cli("stats --instances " + q(scratch() + "/no_such.jsonl"));
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  // Unwritable output is a runtime failure, not a validation one.
  const std::string csv = write_file(
      "exit2.csv",
      "Sr No.,Utterance,Speaker,Emotion,Sentiment,Dialogue_ID,Utterance_ID\n"
      "1,hi,Abe,neutral,neutral,1,0\n");
  RunResult bad_out =
      run_cli("import-meld --csv " + q(csv) + " --out " + q(scratch() + "/no_dir/x.jsonl"));
  CHECK(bad_out.code == 2);
  CHECK(bad_out.err.find("error:") != std::string::npos);
}

TEST_CASE("meld import feeds instance building and stats") {
  const std::string csv = write_file(
      "meld.csv",
      "Sr No.,Utterance,Speaker,Emotion,Sentiment,Dialogue_ID,Utterance_ID\n"
      "1,hello there,Abe,neutral,neutral,1,0\n"
      "2,big news today,Bea,joy,positive,1,1\n"
      "3,you forgot my keys,Abe,anger,negative,1,2\n"
      "4,quiet evening,Cal,neutral,neutral,2,0\n");
  const std::string dialogues = scratch() + "/meld_dialogues.jsonl";
  RunResult imp = run_cli("import-meld --csv " + q(csv) + " --out " + q(dialogues) +
                          " --id-prefix m");
  REQUIRE(imp.code == 0);
  CHECK(imp.err.find("wrote 2 dialogues") != std::string::npos);

  auto ds = read_dialogues(dialogues, 1);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].dialogue_id == "m1");
  CHECK(ds[0].utterances.size() == 3);
  CHECK(ds[1].dialogue_id == "m2");

  const std::string instances = scratch() + "/meld_instances.jsonl";
  RunResult built = run_cli("build-instances --dialogues " + q(dialogues) + " --out " +
                            q(instances));
  REQUIRE(built.code == 0);

  // Abe flips neutral to anger in dialogue 1; dialogue 2 has no flip.
  auto ins = read_instances(instances, 1);
  REQUIRE(ins.size() == 1);
  CHECK(ins[0].instance_id == "m1#2");
  CHECK(ins[0].target_index == 2);
  CHECK(ins[0].source_emotion == Emotion::neutral);
  CHECK(ins[0].target_emotion == Emotion::anger);

  RunResult st = run_cli("stats --instances " + q(instances) + " --format json");
  REQUIRE(st.code == 0);
  Json j = Json::parse(st.out);
  CHECK(j["instances"] == 1);
  CHECK(j["flip_matrix"]["neutral"]["anger"] == 1);
  CHECK(j.contains("instigator_counts"));

  RunResult table = run_cli("stats --instances " + q(demo("train_instances.jsonl")));
  REQUIRE(table.code == 0);
  CHECK(table.out.find("flip matrix") != std::string::npos);
  CHECK(table.out.find("positive flips") != std::string::npos);
}

TEST_CASE("agreement command reports alpha per layer") {
  const std::string base = "agreement --annotations " + q(demo("annotations_a.jsonl")) + " " +
                           q(demo("annotations_b.jsonl")) + " --instances " +
                           q(demo("train_instances.jsonl"));

  RunResult trig = run_cli(base + " --layer trigger --format json");
  REQUIRE(trig.code == 0);
  Json j = Json::parse(trig.out);
  CHECK(j["layer"] == "trigger");
  REQUIRE(j["pairwise"].size() == 1);
  CHECK(j["pairwise"][0].contains("annotator_a"));
  const double avg = j["average"].get<double>();
  CHECK(avg >= -1.0);
  CHECK(avg <= 1.0);

  RunResult inst = run_cli(base + " --layer instigator --format json");
  REQUIRE(inst.code == 0);
  CHECK(Json::parse(inst.out)["layer"] == "instigator");

  RunResult table = run_cli(base + " --layer trigger");
  REQUIRE(table.code == 0);
  CHECK(table.out.find("annotator_a") != std::string::npos);
  CHECK(table.out.find("average") != std::string::npos);

  CHECK(run_cli(base + " --layer banana").code == 1);
}

TEST_CASE("train emits a deterministic epoch stream and checkpoint") {
  const std::string base = "train --train " + q(demo("train_instances.jsonl")) + " --dev " +
                           q(demo("dev_instances.jsonl")) + " --config " +
                           q(demo("config.json")) + " --epochs 2 --seed 3";
  const std::string ckpt1 = scratch() + "/t1.ckpt";
  const std::string ckpt2 = scratch() + "/t2.ckpt";
  const std::string log1 = scratch() + "/t1.log.jsonl";

  RunResult a = run_cli(base + " --out " + q(ckpt1) + " --log " + q(log1));
  REQUIRE(a.code == 0);
  CHECK(a.err.find("best epoch") != std::string::npos);

  auto stream = lines_of(a.out);
  REQUIRE(stream.size() == 2);
  for (std::size_t e = 0; e < stream.size(); ++e) {
    Json line = Json::parse(stream[e]);
    REQUIRE(line.size() == 3);
    CHECK(line["epoch"] == static_cast<int>(e) + 1);
    CHECK(line["train_loss"].is_number());
    CHECK(line["dev_wf1"].is_number());
  }
  CHECK(slurp(log1) == a.out);

  RunResult b = run_cli(base + " --out " + q(ckpt2));
  REQUIRE(b.code == 0);
  CHECK(b.out == a.out);
  const std::string bytes1 = slurp(ckpt1);
  CHECK(!bytes1.empty());
  CHECK(bytes1 == slurp(ckpt2));

  TgifModel model = load_checkpoint(ckpt1);
  CHECK(model.space().size() == 27);
}

TEST_CASE("eval scores a checkpoint in both formats") {
  const std::string ckpt = demo_ckpt();
  const std::string base =
      "eval --test " + q(demo("dev_instances.jsonl")) + " --ckpt " + q(ckpt);

  RunResult j = run_cli(base + " --format json");
  REQUIRE(j.code == 0);
  Json rep = Json::parse(j.out);
  CHECK(rep["scope"] == "all_utterances");
  REQUIRE(rep["metrics"]["per_class"].size() == 27);
  const double f1 = rep["metrics"]["f1"].get<double>();
  CHECK(f1 >= 0.0);
  CHECK(f1 <= 1.0);
  CHECK_FALSE(rep.contains("directionality"));
  CHECK_FALSE(rep.contains("classwise"));

  RunResult trig = run_cli(base + " --scope triggers --format json");
  REQUIRE(trig.code == 0);
  CHECK(Json::parse(trig.out)["scope"] == "triggers_only");

  RunResult full = run_cli(base + " --directionality --train " +
                           q(demo("train_instances.jsonl")) + " --top 2 --bottom 2 --format json");
  REQUIRE(full.code == 0);
  Json frep = Json::parse(full.out);
  CHECK(frep["directionality"]["negative_to_positive"].contains("instances"));
  CHECK(frep["classwise"]["top"].size() == 2);
  CHECK(frep["classwise"]["bottom"].size() == 2);
  CHECK(frep["classwise"]["ranking"].size() == 27);

  RunResult table = run_cli(base + " --directionality --train " +
                            q(demo("train_instances.jsonl")));
  REQUIRE(table.code == 0);
  CHECK(table.out.find("weighted") != std::string::npos);
  CHECK(table.out.find("negative_to_positive") != std::string::npos);
  CHECK(table.out.find("class-wise by training support") != std::string::npos);

  CHECK(run_cli(base + " --scope banana").code == 1);
  CHECK(run_cli(base + " --format banana").code == 1);
}

TEST_CASE("predict writes one json line per instance") {
  const std::string ckpt = demo_ckpt();
  const auto dev = read_instances(demo("dev_instances.jsonl"), 1);
  const std::string out1 = scratch() + "/preds1.jsonl";
  const std::string out2 = scratch() + "/preds2.jsonl";
  const std::string base = "predict --instances " + q(demo("dev_instances.jsonl")) + " --ckpt " +
                           q(ckpt) + " --out ";

  RunResult a = run_cli(base + q(out1));
  REQUIRE(a.code == 0);
  CHECK(a.err.find("wrote") != std::string::npos);

  auto lines = lines_of(slurp(out1));
  REQUIRE(lines.size() == dev.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Json line = Json::parse(lines[i]);
    CHECK(line["instance_id"] == dev[i].instance_id);
    REQUIRE(line["per_utterance"].size() == static_cast<std::size_t>(dev[i].size()));
    const Json& row = line["per_utterance"][0];
    CHECK(row["index"] == 0);
    REQUIRE(row["probs"].size() == 27);
    for (const auto& p : row["probs"]) {
      CHECK(p.get<double>() >= 0.0);
      CHECK(p.get<double>() <= 1.0);
    }
    CHECK(row["predicted"].is_array());
    CHECK(line["mask"].size() == 27);
  }

  RunResult b = run_cli(base + q(out2));
  REQUIRE(b.code == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("ablate runs the module grid") {
  RunResult r = run_cli("ablate --train " + q(demo("train_instances.jsonl")) + " --dev " +
                        q(demo("dev_instances.jsonl")) + " --config " + q(demo("config.json")) +
                        " --epochs 0 --seed 1 --format json");
  REQUIRE(r.code == 0);
  Json rep = Json::parse(r.out);
  REQUIRE(rep["rows"].size() == 4);
  CHECK(rep["rows"][0]["modules"] == "GUS");
  CHECK(rep["rows"][3]["modules"] == "+ SSES (TGIF)");
  for (const auto& row : rep["rows"]) {
    REQUIRE(row["dev_wf1"].size() == 3);
    CHECK(row["dev_wf1"].contains("fine27"));
    CHECK(row["dev_wf1"].contains("coarse_defn14"));
    CHECK(row["dev_wf1"].contains("coarse_count14"));
  }
  CHECK(r.err.find("GUS / fine27") != std::string::npos);
}
