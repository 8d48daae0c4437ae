#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgif/corpus.hpp"
#include "tgif/nn.hpp"
#include "tgif/params.hpp"
#include "tgif/tape.hpp"
#include "tgif/taxonomy.hpp"

namespace tgif {

struct TgifConfig {
  int d_model = 64;
  int heads = 4;
  int transformer_layers = 1;
  int d_ff = 128;
  int gru_hidden = 64;
  std::vector<int> fusion_hidden = {128, 64};
  int max_tokens_per_utterance = 50;
  int max_speakers_per_instance = 8;
  LabelSetup label_setup = LabelSetup::fine27;
  MaskMode mask_mode = MaskMode::polarity;
  double decision_threshold = 0.5;
  std::set<std::string> enabled_modules = {"GUS", "GES", "SSES", "GSS"};
  bool positional_encoding = true;
  double dropout = 0.0;

  bool enabled(const std::string& m) const { return enabled_modules.count(m) != 0; }

  void validate() const {
    require(d_model > 0 && heads > 0 && transformer_layers > 0 && d_ff > 0 && gru_hidden > 0,
            "config: model dimensions must be positive");
    require(d_model % heads == 0, "config: d_model must be divisible by heads");
    require(max_tokens_per_utterance > 0, "config: max_tokens_per_utterance must be positive");
    require(max_speakers_per_instance > 0, "config: max_speakers_per_instance must be positive");
    require(decision_threshold > 0.0 && decision_threshold < 1.0,
            "config: decision_threshold must lie in (0, 1)");
    require(dropout >= 0.0 && dropout < 1.0, "config: dropout must lie in [0, 1)");
    require(enabled(kGus), "config: the GUS module is mandatory");
    for (const auto& m : enabled_modules) {
      require(m == kGus || m == kGes || m == kSses || m == kGss,
              "config: unknown module \"" + m + "\"");
    }
    for (int h : fusion_hidden) require(h > 0, "config: fusion_hidden sizes must be positive");
  }

  static constexpr const char* kGus = "GUS";
  static constexpr const char* kGes = "GES";
  static constexpr const char* kSses = "SSES";
  static constexpr const char* kGss = "GSS";
};

// Token table built from training text: id 0 is padding, id 1 the unknown
// token, then the distinct lowercased tokens in sorted order.
class Vocab {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;

  static std::vector<std::string> tokenize(const std::string& text, int max_tokens) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
      if (!cur.empty() && static_cast<int>(out.size()) < max_tokens) out.push_back(cur);
      cur.clear();
    };
    for (char ch : text) {
      const unsigned char u = static_cast<unsigned char>(ch);
      if (std::isspace(u)) {
        flush();
      } else {
        cur += static_cast<char>(std::tolower(u));
      }
    }
    flush();
    return out;
  }

  static Vocab build(const std::vector<EfrInstance>& train, int max_tokens) {
    std::set<std::string> seen;
    for (const auto& ins : train) {
      for (const auto& u : ins.utterances) {
        for (auto& tok : tokenize(u.text, max_tokens)) seen.insert(std::move(tok));
      }
    }
    Vocab v;
    v.tokens_ = {"<pad>", "<unk>"};
    v.tokens_.insert(v.tokens_.end(), seen.begin(), seen.end());
    v.rebuild_index();
    return v;
  }

  static Vocab from_tokens(std::vector<std::string> tokens) {
    require(tokens.size() >= 2 && tokens[0] == "<pad>" && tokens[1] == "<unk>",
            "vocab: token list must start with <pad>, <unk>");
    Vocab v;
    v.tokens_ = std::move(tokens);
    v.rebuild_index();
    return v;
  }

  std::size_t id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
  }

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  void rebuild_index() {
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_[tokens_[i]] = i;
  }

  std::vector<std::string> tokens_;
  std::map<std::string, std::size_t> index_;
};

struct Prediction {
  std::string instance_id;
  Tensor probs;                          // [t, L]
  std::vector<bool> mask;                // length L
  std::vector<std::vector<int>> labels;  // per utterance, space label ids
};

// The four-encoder model. All parameters exist regardless of enabled_modules;
// a disabled encoder contributes a zero tensor of its nominal shape, so
// ablations change information content only.
class TgifModel {
 public:
  TgifModel(TgifConfig config, LabelSpace space, Vocab vocab, std::uint64_t seed)
      : cfg_(std::move(config)), space_(std::move(space)), vocab_(std::move(vocab)),
        params_(seed) {
    cfg_.validate();
    require(space_.setup() == cfg_.label_setup, "model: label space setup does not match config");
    build_params();
  }

  const TgifConfig& config() const { return cfg_; }
  const LabelSpace& space() const { return space_; }
  const Vocab& vocab() const { return vocab_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  struct Forward {
    Var probs;               // [t, L]
    std::vector<bool> mask;  // length L, all true when masking is off
  };

  // Builds the forward graph for one instance. dropout_rng enables dropout;
  // inference passes keep it null.
  Forward forward(Tape& tape, BoundParams& bp, const EfrInstance& ins,
                  Rng* dropout_rng = nullptr) const {
    using namespace ops;
    const std::size_t t = static_cast<std::size_t>(ins.size());
    const std::size_t dm = static_cast<std::size_t>(cfg_.d_model);
    const std::size_t gh = static_cast<std::size_t>(cfg_.gru_hidden);

    // speakers indexed by first appearance
    std::map<std::string, std::size_t> speaker_ix;
    std::vector<std::vector<std::size_t>> speaker_positions;
    for (std::size_t i = 0; i < t; ++i) {
      const std::string& sp = ins.utterances[i].speaker;
      auto it = speaker_ix.find(sp);
      if (it == speaker_ix.end()) {
        it = speaker_ix.emplace(sp, speaker_positions.size()).first;
        speaker_positions.emplace_back();
      }
      speaker_positions[it->second].push_back(i);
    }
    if (speaker_positions.size() > static_cast<std::size_t>(cfg_.max_speakers_per_instance)) {
      fail_validation("instance " + ins.instance_id + " has " +
                      std::to_string(speaker_positions.size()) +
                      " speakers, above max_speakers_per_instance = " +
                      std::to_string(cfg_.max_speakers_per_instance));
    }

    auto maybe_dropout = [&](Var v) {
      return dropout_rng ? ops::dropout(v, cfg_.dropout, *dropout_rng) : v;
    };

    // GUS: mean-pooled token embeddings per utterance, then the dialogue transformer
    std::vector<Var> pooled;
    for (std::size_t i = 0; i < t; ++i) {
      const auto toks = Vocab::tokenize(ins.utterances[i].text, cfg_.max_tokens_per_utterance);
      if (toks.empty()) {
        pooled.push_back(tape.constant(Tensor::zeros({1, dm})));
        continue;
      }
      std::vector<std::size_t> ids;
      for (const auto& tok : toks) ids.push_back(vocab_.id(tok));
      pooled.push_back(mean_axis(embedding_lookup(bp("embed"), ids), 0));
    }
    Var h_u = nn::transformer_encoder(bp, "gus", concat(pooled, 0), cfg_.transformer_layers,
                                      cfg_.heads, cfg_.positional_encoding);
    h_u = maybe_dropout(h_u);

    // GSS: speaker one-hots projected and encoded by the second transformer
    Var h_s;
    if (cfg_.enabled(TgifConfig::kGss)) {
      Tensor onehots = Tensor::zeros({t, static_cast<std::size_t>(cfg_.max_speakers_per_instance)});
      for (std::size_t i = 0; i < t; ++i) {
        onehots.at(i, speaker_ix.at(ins.utterances[i].speaker)) = 1.0;
      }
      Var projected = nn::linear(bp, "gss.proj", tape.constant(std::move(onehots)));
      h_s = maybe_dropout(nn::transformer_encoder(bp, "gss", projected, cfg_.transformer_layers,
                                                  cfg_.heads, cfg_.positional_encoding));
    } else {
      h_s = tape.constant(Tensor::zeros({t, dm}));
    }

    // shared emotion one-hot sequence
    Tensor emotions = Tensor::zeros({t, static_cast<std::size_t>(kEmotionCount)});
    for (std::size_t i = 0; i < t; ++i) {
      emotions.at(i, static_cast<std::size_t>(ins.utterances[i].emotion)) = 1.0;
    }
    Var e_seq = tape.constant(std::move(emotions));

    // GES: one GRU over the whole emotion sequence
    Var h_e = cfg_.enabled(TgifConfig::kGes)
                  ? maybe_dropout(nn::gru_sequence(bp, "ges", e_seq, gh))
                  : tape.constant(Tensor::zeros({t, gh}));

    // SSES: one GRU per speaker over that speaker's emotions, re-interleaved
    // into dialogue order
    Var h_se;
    if (cfg_.enabled(TgifConfig::kSses)) {
      std::vector<Var> blocks;
      std::vector<std::size_t> order;
      for (std::size_t k = 0; k < speaker_positions.size(); ++k) {
        blocks.push_back(gru_sequence_for_speaker(bp, k, e_seq, speaker_positions[k], gh));
        order.insert(order.end(), speaker_positions[k].begin(), speaker_positions[k].end());
      }
      Var stacked = blocks.size() == 1 ? blocks[0] : concat(blocks, 0);
      std::vector<std::size_t> undo(t);
      for (std::size_t j = 0; j < t; ++j) undo[order[j]] = j;
      h_se = maybe_dropout(gather_rows(stacked, undo));
    } else {
      h_se = tape.constant(Tensor::zeros({t, gh}));
    }

    // fusion step 1: dialogue-side and emotion-side combinations
    Var g = nn::linear(bp, "fuse.a", concat({h_u, h_s}, 1));
    Var m = nn::linear(bp, "fuse.b", concat({h_e, h_se}, 1));
    // fusion step 2: append the target's representation to every utterance
    Var z = concat({g, m}, 1);
    Var z_target = slice(z, 0, static_cast<std::size_t>(ins.target_index), 1);
    Var x = concat({z, repeat_rows(z_target, t)}, 1);
    for (std::size_t i = 0; i < cfg_.fusion_hidden.size(); ++i) {
      x = maybe_dropout(relu(nn::linear(bp, "fuse.h" + std::to_string(i), x)));
    }
    Var probs = sigmoid(nn::linear(bp, "head", x));

    std::vector<bool> mask(space_.size(), true);
    if (cfg_.mask_mode != MaskMode::off) {
      mask = allowed_mask(ins.source_emotion, ins.target_emotion, space_, cfg_.mask_mode);
      Tensor m_rows = Tensor::zeros({t, static_cast<std::size_t>(space_.size())});
      for (std::size_t i = 0; i < t; ++i) {
        for (int l = 0; l < space_.size(); ++l) m_rows.at(i, l) = mask[l] ? 1.0 : 0.0;
      }
      probs = mul(probs, tape.constant(std::move(m_rows)));
    }
    return {probs, std::move(mask)};
  }

  Prediction predict(const EfrInstance& ins) const {
    Tape tape;
    BoundParams bp(const_cast<ParamStore&>(params_), tape);
    Forward f = forward(tape, bp, ins);
    Prediction p;
    p.instance_id = ins.instance_id;
    p.probs = f.probs.val();
    p.mask = f.mask;
    p.labels.resize(ins.size());
    for (int i = 0; i < ins.size(); ++i) {
      for (int l = 0; l < space_.size(); ++l) {
        if (p.probs.at(i, l) > cfg_.decision_threshold) p.labels[i].push_back(l);
      }
    }
    return p;
  }

 private:
  void build_params() {
    const auto dm = static_cast<std::size_t>(cfg_.d_model);
    const auto gh = static_cast<std::size_t>(cfg_.gru_hidden);
    params_.create_xavier("embed", vocab_.size(), dm);
    nn::create_transformer(params_, "gus", cfg_.transformer_layers, dm,
                           static_cast<std::size_t>(cfg_.d_ff));
    nn::create_linear(params_, "gss.proj", static_cast<std::size_t>(cfg_.max_speakers_per_instance),
                      dm);
    nn::create_transformer(params_, "gss", cfg_.transformer_layers, dm,
                           static_cast<std::size_t>(cfg_.d_ff));
    nn::create_gru(params_, "ges", kEmotionCount, gh);
    for (int k = 0; k < cfg_.max_speakers_per_instance; ++k) {
      nn::create_gru(params_, "sses.s" + std::to_string(k), kEmotionCount, gh);
    }
    nn::create_linear(params_, "fuse.a", 2 * dm, dm);
    nn::create_linear(params_, "fuse.b", 2 * gh, gh);
    std::size_t width = 2 * (dm + gh);
    for (std::size_t i = 0; i < cfg_.fusion_hidden.size(); ++i) {
      nn::create_linear(params_, "fuse.h" + std::to_string(i), width,
                        static_cast<std::size_t>(cfg_.fusion_hidden[i]));
      width = static_cast<std::size_t>(cfg_.fusion_hidden[i]);
    }
    nn::create_linear(params_, "head", width, static_cast<std::size_t>(space_.size()));
  }

  Var gru_sequence_for_speaker(BoundParams& bp, std::size_t k, Var e_seq,
                               const std::vector<std::size_t>& positions,
                               std::size_t hidden) const {
    Var sub = ops::gather_rows(e_seq, positions);
    return nn::gru_sequence(bp, "sses.s" + std::to_string(k), sub, hidden);
  }

  TgifConfig cfg_;
  LabelSpace space_;
  Vocab vocab_;
  ParamStore params_;
};

// Gold labels as a [t, L] 0/1 matrix in the model's label space.
inline Tensor gold_matrix(const EfrInstance& ins, const LabelSpace& space) {
  Tensor y = Tensor::zeros({static_cast<std::size_t>(ins.size()),
                            static_cast<std::size_t>(space.size())});
  for (int i = 0; i < ins.size(); ++i) {
    for (int l : space.project(ins.instigators[i])) y.at(i, l) = 1.0;
  }
  return y;
}

inline const std::vector<std::string>& tgif_config_keys() {
  static const std::vector<std::string> keys = {
      "d_model",       "heads",         "transformer_layers",
      "d_ff",          "gru_hidden",    "fusion_hidden",
      "max_tokens_per_utterance",       "max_speakers_per_instance",
      "label_setup",   "mask_mode",     "decision_threshold",
      "enabled_modules",                "positional_encoding",
      "dropout"};
  return keys;
}

inline Json tgif_config_to_json(const TgifConfig& c) {
  Json j;
  j["d_model"] = c.d_model;
  j["heads"] = c.heads;
  j["transformer_layers"] = c.transformer_layers;
  j["d_ff"] = c.d_ff;
  j["gru_hidden"] = c.gru_hidden;
  j["fusion_hidden"] = c.fusion_hidden;
  j["max_tokens_per_utterance"] = c.max_tokens_per_utterance;
  j["max_speakers_per_instance"] = c.max_speakers_per_instance;
  j["label_setup"] = std::string(to_string(c.label_setup));
  j["mask_mode"] = std::string(to_string(c.mask_mode));
  j["decision_threshold"] = c.decision_threshold;
  j["enabled_modules"] = c.enabled_modules;
  j["positional_encoding"] = c.positional_encoding;
  j["dropout"] = c.dropout;
  return j;
}

// Reads the keys it knows from j, leaving defaults for absent ones. Unknown
// keys are the caller's concern (the CLI config file mixes in training keys).
inline TgifConfig tgif_config_from_json(const Json& j, const std::string& where) {
  RecordReader r{j, where};
  TgifConfig c;
  auto get_int = [&](const char* k, int& dst) {
    if (j.contains(k)) dst = static_cast<int>(r.integer(k));
  };
  auto get_num = [&](const char* k, double& dst) {
    if (!j.contains(k)) return;
    const Json& v = r.field(k);
    if (!v.is_number()) r.fail(std::string("field \"") + k + "\" must be a number");
    dst = v.get<double>();
  };
  get_int("d_model", c.d_model);
  get_int("heads", c.heads);
  get_int("transformer_layers", c.transformer_layers);
  get_int("d_ff", c.d_ff);
  get_int("gru_hidden", c.gru_hidden);
  get_int("max_tokens_per_utterance", c.max_tokens_per_utterance);
  get_int("max_speakers_per_instance", c.max_speakers_per_instance);
  if (j.contains("fusion_hidden")) {
    const Json& v = r.field("fusion_hidden");
    if (!v.is_array()) r.fail("field \"fusion_hidden\" must be an array of integers");
    c.fusion_hidden.clear();
    for (const auto& e : v) {
      if (!e.is_number_integer()) r.fail("field \"fusion_hidden\" must be an array of integers");
      c.fusion_hidden.push_back(e.get<int>());
    }
  }
  if (j.contains("label_setup")) c.label_setup = parse_label_setup(r.str("label_setup"));
  if (j.contains("mask_mode")) c.mask_mode = parse_mask_mode(r.str("mask_mode"));
  get_num("decision_threshold", c.decision_threshold);
  get_num("dropout", c.dropout);
  if (j.contains("enabled_modules")) {
    const Json& v = r.field("enabled_modules");
    if (!v.is_array()) r.fail("field \"enabled_modules\" must be an array of strings");
    c.enabled_modules.clear();
    for (const auto& e : v) {
      if (!e.is_string()) r.fail("field \"enabled_modules\" must be an array of strings");
      c.enabled_modules.insert(e.get<std::string>());
    }
  }
  if (j.contains("positional_encoding")) {
    const Json& v = r.field("positional_encoding");
    if (!v.is_boolean()) r.fail("field \"positional_encoding\" must be a boolean");
    c.positional_encoding = v.get<bool>();
  }
  c.validate();
  return c;
}

inline Json prediction_to_json(const Prediction& p, const LabelSpace& space) {
  Json per_utt = Json::array();
  for (std::size_t i = 0; i < p.probs.rows(); ++i) {
    Json probs = Json::array();
    for (std::size_t l = 0; l < p.probs.cols(); ++l) probs.push_back(p.probs.at(i, l));
    Json predicted = Json::array();
    for (int l : p.labels[i]) predicted.push_back(space.label(l));
    per_utt.push_back({{"index", static_cast<int>(i)}, {"probs", probs}, {"predicted", predicted}});
  }
  Json mask = Json::array();
  for (bool b : p.mask) mask.push_back(b);
  return {{"instance_id", p.instance_id}, {"per_utterance", per_utt}, {"mask", mask}};
}

}  // namespace tgif
