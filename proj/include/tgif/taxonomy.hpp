#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgif/emotion.hpp"
#include "tgif/error.hpp"
#include "tgif/taxonomy_data.hpp"

namespace tgif {

enum class Polarity { positive, negative, ambiguous };

inline std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    default: return "ambiguous";
  }
}

inline Polarity parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::positive;
  if (s == "negative") return Polarity::negative;
  if (s == "ambiguous") return Polarity::ambiguous;
  fail_validation("unknown polarity: \"" + std::string(s) + "\"");
}

inline std::optional<int> try_fine_index(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "humour") lower = "humor";
  for (int i = 0; i < kFineLabelCount; ++i) {
    if (lower == kFineLabels[i].name) return i;
  }
  return std::nullopt;
}

inline int fine_index(std::string_view name) {
  if (auto i = try_fine_index(name)) return *i;
  fail_validation("unknown instigator label: \"" + std::string(name) + "\"");
}

inline std::string_view fine_name(int index) { return kFineLabels[index].name; }

inline std::string_view coarse_of(std::string_view fine) {
  return kFineLabels[fine_index(fine)].coarse;
}

inline Polarity label_polarity(std::string_view fine) {
  return parse_polarity(kFineLabels[fine_index(fine)].polarity);
}

// Flip polarity follows the target emotion; a flip into neutral takes the
// opposite of the source's polarity. Covers intra-polarity flips (e.g.
// joy->surprise) by the same target rule.
inline Polarity flip_polarity(Emotion source, Emotion target) {
  require(source != target, "flip_polarity: source == target");
  const bool tgt_pos = target == Emotion::joy || target == Emotion::surprise;
  const bool tgt_neg = target == Emotion::anger || target == Emotion::fear ||
                       target == Emotion::disgust || target == Emotion::sadness;
  if (tgt_pos) return Polarity::positive;
  if (tgt_neg) return Polarity::negative;
  // target == neutral: source is one of the six non-neutral emotions
  const bool src_pos = source == Emotion::joy || source == Emotion::surprise;
  return src_pos ? Polarity::negative : Polarity::positive;
}

enum class LabelSetup { fine27, coarse_defn14, coarse_count14 };

inline std::string_view to_string(LabelSetup s) {
  switch (s) {
    case LabelSetup::fine27: return "fine27";
    case LabelSetup::coarse_defn14: return "coarse_defn14";
    default: return "coarse_count14";
  }
}

inline LabelSetup parse_label_setup(std::string_view s) {
  if (s == "fine27") return LabelSetup::fine27;
  if (s == "coarse_defn14") return LabelSetup::coarse_defn14;
  if (s == "coarse_count14") return LabelSetup::coarse_count14;
  fail_validation("unknown label setup: \"" + std::string(s) + "\"");
}

// A concrete output label space: the ordered class list plus the projection
// from fine labels onto it.
class LabelSpace {
 public:
  static LabelSpace fine27() {
    LabelSpace s;
    s.setup_ = LabelSetup::fine27;
    for (int i = 0; i < kFineLabelCount; ++i) {
      s.labels_.emplace_back(kFineLabels[i].name);
      s.fine_to_space_[i] = i;
    }
    s.build_index();
    return s;
  }

  static LabelSpace coarse_defn14() {
    LabelSpace s;
    s.setup_ = LabelSetup::coarse_defn14;
    for (auto name : kCoarseLabels) s.labels_.emplace_back(name);
    s.build_index();
    for (int i = 0; i < kFineLabelCount; ++i) {
      s.fine_to_space_[i] = s.index_[std::string(kFineLabels[i].coarse)];
    }
    return s;
  }

  // Count-based reduction: fine labels at or above the threshold keep their
  // own class; the rest merge into "other". An empty "other" is dropped.
  static LabelSpace coarse_count(const std::array<long long, kFineLabelCount>& train_counts,
                                 long long threshold = 250) {
    LabelSpace s;
    s.setup_ = LabelSetup::coarse_count14;
    std::vector<int> merged;
    for (int i = 0; i < kFineLabelCount; ++i) {
      if (train_counts[i] >= threshold) {
        s.fine_to_space_[i] = static_cast<int>(s.labels_.size());
        s.labels_.emplace_back(kFineLabels[i].name);
      } else {
        merged.push_back(i);
      }
    }
    if (!merged.empty()) {
      const int other = static_cast<int>(s.labels_.size());
      s.labels_.emplace_back("other");
      for (int i : merged) s.fine_to_space_[i] = other;
    }
    s.build_index();
    return s;
  }

  // Rebuilds a space from a stored label list (checkpoint headers). The list
  // must be one this class could have produced for the given setup.
  static LabelSpace from_labels(LabelSetup setup, const std::vector<std::string>& labels) {
    if (setup == LabelSetup::fine27 || setup == LabelSetup::coarse_defn14) {
      LabelSpace s = setup == LabelSetup::fine27 ? fine27() : coarse_defn14();
      require(labels == s.labels_, "label space: stored labels do not match the " +
                                       std::string(to_string(setup)) + " setup");
      return s;
    }
    LabelSpace s;
    s.setup_ = setup;
    s.labels_ = labels;
    const bool has_other = !s.labels_.empty() && s.labels_.back() == "other";
    const int n_named = s.size() - (has_other ? 1 : 0);
    std::array<int, kFineLabelCount> to_space{};
    to_space.fill(-1);
    int prev = -1;
    for (int i = 0; i < n_named; ++i) {
      const int f = fine_index(s.labels_[i]);
      require(f > prev, "label space: count-based labels must be distinct fine labels in order");
      to_space[f] = i;
      prev = f;
    }
    for (int f = 0; f < kFineLabelCount; ++f) {
      if (to_space[f] >= 0) continue;
      require(has_other, "label space: count-based space misses \"" +
                             std::string(kFineLabels[f].name) + "\" and has no \"other\"");
      to_space[f] = n_named;
    }
    require(!has_other || n_named < kFineLabelCount,
            "label space: count-based space has an empty \"other\"");
    s.fine_to_space_ = to_space;
    s.build_index();
    return s;
  }

  LabelSetup setup() const { return setup_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_[i]; }

  int index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) fail_validation("label not in space: \"" + label + "\"");
    return it->second;
  }

  int project_fine(int fine) const { return fine_to_space_[fine]; }

  // Projects a set of fine label names onto this space.
  std::vector<int> project(const std::vector<std::string>& fine_labels) const {
    std::vector<int> out;
    for (const auto& name : fine_labels) out.push_back(fine_to_space_[fine_index(name)]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool operator==(const LabelSpace& o) const {
    return setup_ == o.setup_ && labels_ == o.labels_;
  }

 private:
  void build_index() {
    for (int i = 0; i < size(); ++i) index_[labels_[i]] = i;
  }

  LabelSetup setup_ = LabelSetup::fine27;
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
  std::array<int, kFineLabelCount> fine_to_space_{};
};

enum class MaskMode { polarity, pair_table, off };

inline std::string_view to_string(MaskMode m) {
  switch (m) {
    case MaskMode::polarity: return "polarity";
    case MaskMode::pair_table: return "pair_table";
    default: return "off";
  }
}

inline MaskMode parse_mask_mode(std::string_view s) {
  if (s == "polarity") return MaskMode::polarity;
  if (s == "pair_table") return MaskMode::pair_table;
  if (s == "off") return MaskMode::off;
  fail_validation("unknown mask mode: \"" + std::string(s) + "\"");
}

// The set of fine labels admissible for a flip, before projection.
inline std::array<bool, kFineLabelCount> allowed_fine_set(Emotion source, Emotion target,
                                                          MaskMode mode) {
  require(source != target, "allowed_mask: source == target");
  std::array<bool, kFineLabelCount> fine{};
  if (mode == MaskMode::off) {
    fine.fill(true);
    return fine;
  }
  if (mode == MaskMode::polarity) {
    const Polarity flip = flip_polarity(source, target);
    for (int i = 0; i < kFineLabelCount; ++i) {
      const Polarity p = parse_polarity(kFineLabels[i].polarity);
      fine[i] = p == Polarity::ambiguous || p == flip;
    }
    return fine;
  }
  const std::string key =
      std::string(to_string(source)) + "->" + std::string(to_string(target));
  const auto& table = pair_table_data();
  auto it = table.find(key);
  if (it == table.end()) fail_validation("pair table has no entry for " + key);
  for (const auto& name : it->second) fine[fine_index(name)] = true;
  return fine;
}

// A space label is allowed when any of its fine members is allowed.
inline std::vector<bool> allowed_mask(Emotion source, Emotion target, const LabelSpace& space,
                                      MaskMode mode) {
  const auto fine = allowed_fine_set(source, target, mode);
  std::vector<bool> mask(space.size(), false);
  for (int i = 0; i < kFineLabelCount; ++i) {
    if (fine[i]) mask[space.project_fine(i)] = true;
  }
  return mask;
}

}  // namespace tgif
