#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tgif/checkpoint.hpp"

using namespace tgif;

namespace {

std::string scratch_path(const std::string& name) {
  auto dir = std::filesystem::path("test_scratch");
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Utterance utt(int index, std::string speaker, Emotion e, std::string text) {
  Utterance u;
  u.index = index;
  u.speaker = std::move(speaker);
  u.text = std::move(text);
  u.emotion = e;
  return u;
}

EfrInstance tiny_instance() {
  EfrInstance ins;
  ins.instance_id = "c#2";
  ins.dialogue_id = "c";
  ins.utterances = {
      utt(0, "a", Emotion::sadness, "it all went wrong"),
      utt(1, "b", Emotion::neutral, "tell me everything"),
      utt(2, "a", Emotion::joy, "actually it worked out"),
  };
  ins.target_index = 2;
  ins.target_speaker = "a";
  ins.source_emotion = Emotion::sadness;
  ins.target_emotion = Emotion::joy;
  ins.trigger_flags = {false, false, true};
  ins.instigators = {{}, {}, {"relief"}};
  return ins;
}

TgifModel tiny_model(std::uint64_t seed = 9) {
  TgifConfig c;
  c.d_model = 8;
  c.heads = 2;
  c.d_ff = 12;
  c.gru_hidden = 5;
  c.fusion_hidden = {7};
  c.max_speakers_per_instance = 3;
  Vocab vocab = Vocab::build({tiny_instance()}, c.max_tokens_per_utterance);
  return TgifModel(c, LabelSpace::fine27(), vocab, seed);
}

}  // namespace

TEST_CASE("checkpoint round-trips the model bit for bit") {
  TgifModel model = tiny_model();
  const std::string p1 = scratch_path("m1.ckpt");
  save_checkpoint(model, p1);

  TgifModel loaded = load_checkpoint(p1);
  CHECK(loaded.space() == model.space());
  CHECK(loaded.vocab().tokens() == model.vocab().tokens());
  CHECK(tgif_config_to_json(loaded.config()) == tgif_config_to_json(model.config()));
  REQUIRE(loaded.params().all().size() == model.params().all().size());
  for (const auto& [name, tensor] : model.params().all()) {
    CHECK(loaded.params().at(name) == tensor);
  }

  // forward passes agree exactly
  EfrInstance ins = tiny_instance();
  CHECK(loaded.predict(ins).probs == model.predict(ins).probs);

  // save -> load -> save produces identical bytes
  const std::string p2 = scratch_path("m2.ckpt");
  save_checkpoint(loaded, p2);
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("checkpoint survives a count-based label space") {
  std::array<long long, kFineLabelCount> counts{};
  counts[fine_index("confusion")] = 600;
  counts[fine_index("loss")] = 300;
  LabelSpace space = LabelSpace::coarse_count(counts);
  TgifConfig c;
  c.d_model = 8;
  c.heads = 2;
  c.d_ff = 12;
  c.gru_hidden = 5;
  c.fusion_hidden = {7};
  c.label_setup = LabelSetup::coarse_count14;
  Vocab vocab = Vocab::build({tiny_instance()}, c.max_tokens_per_utterance);
  TgifModel model(c, space, vocab, 4);

  const std::string path = scratch_path("count.ckpt");
  save_checkpoint(model, path);
  TgifModel loaded = load_checkpoint(path);
  CHECK(loaded.space().labels() == std::vector<std::string>{"confusion", "loss", "other"});
  for (int f = 0; f < kFineLabelCount; ++f) {
    CHECK(loaded.space().project_fine(f) == space.project_fine(f));
  }
}

TEST_CASE("corrupted checkpoints are rejected") {
  TgifModel model = tiny_model();
  const std::string path = scratch_path("base.ckpt");
  save_checkpoint(model, path);
  const std::string good = slurp(path);
  const std::string bad = scratch_path("bad.ckpt");

  SECTION("wrong magic") {
    std::string b = good;
    b[0] = 'X';
    spit(bad, b);
    CHECK_THROWS_WITH(load_checkpoint(bad), Catch::Matchers::ContainsSubstring("not a TGIF checkpoint"));
  }
  SECTION("unsupported version") {
    std::string b = good;
    b[9] = 99;  // little-endian u32 version right after the 9-byte magic
    spit(bad, b);
    CHECK_THROWS_WITH(load_checkpoint(bad), Catch::Matchers::ContainsSubstring("version"));
  }
  SECTION("truncated") {
    spit(bad, good.substr(0, good.size() / 2));
    CHECK_THROWS_WITH(load_checkpoint(bad), Catch::Matchers::ContainsSubstring("truncated"));
  }
  SECTION("trailing bytes") {
    spit(bad, good + "junk");
    CHECK_THROWS_WITH(load_checkpoint(bad), Catch::Matchers::ContainsSubstring("trailing bytes"));
  }
  SECTION("missing file") {
    CHECK_THROWS_WITH(load_checkpoint(scratch_path("nope.ckpt")),
                      Catch::Matchers::ContainsSubstring("cannot open"));
  }
}

TEST_CASE("checkpoints from a different architecture are rejected") {
  TgifModel model = tiny_model();
  const std::string path = scratch_path("arch.ckpt");
  save_checkpoint(model, path);
  std::string bytes = slurp(path);

  // shrink d_model in the embedded header json; tensor shapes then disagree
  const std::string needle = "\"d_model\":8";
  auto pos = bytes.find(needle);
  REQUIRE(pos != std::string::npos);
  bytes.replace(pos, needle.size(), "\"d_model\":4");
  // header_len stays valid because the replacement has equal length
  const std::string bad = scratch_path("arch_bad.ckpt");
  spit(bad, bytes);
  CHECK_THROWS_WITH(load_checkpoint(bad), Catch::Matchers::ContainsSubstring("shape"));
}
