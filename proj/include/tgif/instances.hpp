#pragma once

#include <array>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tgif/corpus.hpp"
#include "tgif/taxonomy.hpp"

namespace tgif {

struct FlipEvent {
  int target_index = 0;
  std::string target_speaker;
  Emotion source_emotion = Emotion::neutral;
  Emotion target_emotion = Emotion::neutral;

  bool operator==(const FlipEvent&) const = default;
};

// An utterance flips when its speaker's nearest preceding utterance in the
// same dialogue carries a different emotion. First utterances never flip.
inline std::vector<FlipEvent> detect_flips(const Dialogue& d) {
  std::vector<FlipEvent> flips;
  std::map<std::string, Emotion> last_emotion;
  for (const auto& u : d.utterances) {
    auto it = last_emotion.find(u.speaker);
    if (it != last_emotion.end() && it->second != u.emotion) {
      flips.push_back({u.index, u.speaker, it->second, u.emotion});
    }
    last_emotion[u.speaker] = u.emotion;
  }
  return flips;
}

inline std::string instance_id_for(const std::string& dialogue_id, int target_index) {
  return dialogue_id + "#" + std::to_string(target_index);
}

// Builds one instance per flip: the dialogue prefix up to the target.
// Gold trigger/instigator annotations attach by instance id when provided.
inline std::vector<EfrInstance> build_instances(const std::vector<Dialogue>& dialogues,
                                                const AnnotationFile* gold = nullptr) {
  std::vector<EfrInstance> out;
  for (const auto& d : dialogues) {
    for (const auto& flip : detect_flips(d)) {
      EfrInstance ins;
      ins.instance_id = instance_id_for(d.dialogue_id, flip.target_index);
      ins.dialogue_id = d.dialogue_id;
      ins.utterances.assign(d.utterances.begin(), d.utterances.begin() + flip.target_index + 1);
      ins.target_index = flip.target_index;
      ins.target_speaker = flip.target_speaker;
      ins.source_emotion = flip.source_emotion;
      ins.target_emotion = flip.target_emotion;
      ins.trigger_flags.assign(ins.size(), false);
      ins.instigators.assign(ins.size(), {});
      ins.split = d.split;
      if (gold) {
        auto it = gold->by_instance.find(ins.instance_id);
        if (it != gold->by_instance.end()) {
          const AnnotationRecord& rec = gold->records[it->second];
          for (int idx : rec.trigger_indices) {
            if (idx > ins.target_index) {
              fail_validation("gold for " + ins.instance_id + " marks trigger at index " +
                              std::to_string(idx) + " beyond the target");
            }
            ins.trigger_flags[idx] = true;
          }
          for (const auto& [idx, labels] : rec.instigators) {
            if (idx > ins.target_index) {
              fail_validation("gold for " + ins.instance_id + " names instigators at index " +
                              std::to_string(idx) + " beyond the target");
            }
            if (!ins.trigger_flags[idx]) {
              fail_validation("gold for " + ins.instance_id + " has instigators at index " +
                              std::to_string(idx) + " which is not a trigger");
            }
            ins.instigators[idx] = labels;
          }
        }
      }
      out.push_back(std::move(ins));
    }
  }
  return out;
}

struct StatsReport {
  long long n_instances = 0;
  long long n_triggers = 0;
  long long positive_flips = 0;
  long long negative_flips = 0;
  // flip_matrix[source][target], emotion index order; diagonal identically 0
  std::array<std::array<long long, kEmotionCount>, kEmotionCount> flip_matrix{};
  std::array<long long, kFineLabelCount> fine_counts{};
  std::array<long long, kCoarseLabelCount> coarse_defn_counts{};
  std::vector<std::pair<std::string, long long>> coarse_count_counts;  // space order
};

inline StatsReport corpus_stats(const std::vector<EfrInstance>& instances) {
  StatsReport rep;
  rep.n_instances = static_cast<long long>(instances.size());
  const LabelSpace coarse = LabelSpace::coarse_defn14();
  for (const auto& ins : instances) {
    const int s = static_cast<int>(ins.source_emotion);
    const int t = static_cast<int>(ins.target_emotion);
    rep.flip_matrix[s][t] += 1;
    if (flip_polarity(ins.source_emotion, ins.target_emotion) == Polarity::positive) {
      rep.positive_flips += 1;
    } else {
      rep.negative_flips += 1;
    }
    for (int i = 0; i < ins.size(); ++i) {
      if (ins.trigger_flags[i]) rep.n_triggers += 1;
      for (const auto& label : ins.instigators[i]) {
        const int fi = fine_index(label);
        rep.fine_counts[fi] += 1;
        rep.coarse_defn_counts[coarse.project_fine(fi)] += 1;
      }
    }
  }
  const LabelSpace counted = LabelSpace::coarse_count(rep.fine_counts);
  std::vector<long long> space_counts(counted.size(), 0);
  for (int fi = 0; fi < kFineLabelCount; ++fi) {
    space_counts[counted.project_fine(fi)] += rep.fine_counts[fi];
  }
  for (int i = 0; i < counted.size(); ++i) {
    rep.coarse_count_counts.emplace_back(counted.label(i), space_counts[i]);
  }
  return rep;
}

inline Json stats_to_json(const StatsReport& rep) {
  Json matrix = Json::object();
  for (int s = 0; s < kEmotionCount; ++s) {
    Json row = Json::object();
    for (int t = 0; t < kEmotionCount; ++t) {
      row[std::string(kEmotionNames[t])] = rep.flip_matrix[s][t];
    }
    matrix[std::string(kEmotionNames[s])] = row;
  }
  Json fine = Json::object();
  for (int i = 0; i < kFineLabelCount; ++i) {
    fine[std::string(kFineLabels[i].name)] = rep.fine_counts[i];
  }
  Json coarse = Json::object();
  for (int i = 0; i < kCoarseLabelCount; ++i) {
    coarse[std::string(kCoarseLabels[i])] = rep.coarse_defn_counts[i];
  }
  Json counted = Json::object();
  for (const auto& [label, count] : rep.coarse_count_counts) counted[label] = count;
  return {{"instances", rep.n_instances},
          {"triggers", rep.n_triggers},
          {"positive_flips", rep.positive_flips},
          {"negative_flips", rep.negative_flips},
          {"flip_matrix", matrix},
          {"instigator_counts",
           {{"fine27", fine}, {"coarse_defn14", coarse}, {"coarse_count", counted}}}};
}

inline std::string stats_to_table(const StatsReport& rep) {
  std::ostringstream os;
  os << "flip matrix (rows: source, cols: target)\n";
  const int w = 10;
  os << std::setw(w) << "";
  for (int t = 0; t < kEmotionCount; ++t) os << std::setw(w) << kEmotionNames[t];
  os << "\n";
  for (int s = 0; s < kEmotionCount; ++s) {
    os << std::setw(w) << kEmotionNames[s];
    for (int t = 0; t < kEmotionCount; ++t) os << std::setw(w) << rep.flip_matrix[s][t];
    os << "\n";
  }
  os << "\n";
  os << "instances: " << rep.n_instances << "\n";
  os << "triggers: " << rep.n_triggers << "\n";
  os << "positive flips: " << rep.positive_flips << "\n";
  os << "negative flips: " << rep.negative_flips << "\n\n";
  os << "instigator counts (fine27)\n";
  for (int i = 0; i < kFineLabelCount; ++i) {
    os << "  " << std::setw(12) << std::left << kFineLabels[i].name << std::right
       << std::setw(8) << rep.fine_counts[i] << "\n";
  }
  os << "instigator counts (coarse_defn14)\n";
  for (int i = 0; i < kCoarseLabelCount; ++i) {
    os << "  " << std::setw(12) << std::left << kCoarseLabels[i] << std::right << std::setw(8)
       << rep.coarse_defn_counts[i] << "\n";
  }
  os << "instigator counts (coarse_count, threshold 250)\n";
  for (const auto& [label, count] : rep.coarse_count_counts) {
    os << "  " << std::setw(12) << std::left << label << std::right << std::setw(8) << count
       << "\n";
  }
  return os.str();
}

}  // namespace tgif
