#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgif/emotion.hpp"
#include "tgif/error.hpp"
#include "tgif/jsonl.hpp"
#include "tgif/taxonomy.hpp"

namespace tgif {

struct Utterance {
  int index = 0;
  std::string speaker;
  std::string text;
  Emotion emotion = Emotion::neutral;

  bool operator==(const Utterance&) const = default;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Utterance> utterances;
  std::string split;  // optional passthrough tag, may be empty

  bool operator==(const Dialogue&) const = default;
};

// A dialogue prefix ending at an emotion-flip target, plus gold labels.
// trigger_flags and instigators are indexed per utterance; an utterance with a
// non-empty instigator set is always a trigger.
struct EfrInstance {
  std::string instance_id;
  std::string dialogue_id;
  std::vector<Utterance> utterances;
  int target_index = 0;
  std::string target_speaker;
  Emotion source_emotion = Emotion::neutral;
  Emotion target_emotion = Emotion::neutral;
  std::vector<bool> trigger_flags;
  std::vector<std::vector<std::string>> instigators;
  std::string split;

  int size() const { return static_cast<int>(utterances.size()); }

  bool operator==(const EfrInstance&) const = default;
};

struct AnnotationRecord {
  std::string annotator_id;
  std::string instance_id;
  std::vector<int> trigger_indices;                    // sorted, unique
  std::map<int, std::vector<std::string>> instigators; // index -> sorted labels

  bool operator==(const AnnotationRecord&) const = default;
};

struct AnnotationFile {
  std::string annotator_id;
  std::vector<AnnotationRecord> records;  // file order
  std::map<std::string, int> by_instance; // instance_id -> index into records

  bool operator==(const AnnotationFile& o) const {
    return annotator_id == o.annotator_id && records == o.records;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> canonical_labels(const RecordReader& r, const Json& arr,
                                                 const std::string& field) {
  if (!arr.is_array()) r.fail("field \"" + field + "\" must be an array of label names");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) r.fail("field \"" + field + "\" must contain strings");
    auto idx = try_fine_index(v.get<std::string>());
    if (!idx) r.fail("unknown instigator label \"" + v.get<std::string>() + "\" in \"" + field + "\"");
    out.emplace_back(fine_name(*idx));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Utterance> parse_utterances(const RecordReader& r) {
  const Json& arr = r.field("utterances");
  if (!arr.is_array() || arr.empty()) r.fail("\"utterances\" must be a non-empty array");
  std::vector<Utterance> out;
  int expect = 0;
  for (const auto& item : arr) {
    RecordReader u{item, r.where};
    if (!item.is_object()) r.fail("utterance entries must be objects");
    u.check_keys({"index", "speaker", "text", "emotion"});
    Utterance utt;
    utt.index = static_cast<int>(u.integer("index"));
    if (utt.index != expect) {
      u.fail("utterance indices must be contiguous from 0; expected " + std::to_string(expect) +
             ", got " + std::to_string(utt.index));
    }
    utt.speaker = u.str("speaker");
    if (trim(utt.speaker).empty()) u.fail("speaker must be non-empty");
    utt.text = u.str("text");
    auto emo = try_parse_emotion(u.str("emotion"));
    if (!emo) u.fail("unknown emotion name \"" + u.str("emotion") + "\" in field \"emotion\"");
    utt.emotion = *emo;
    out.push_back(std::move(utt));
    ++expect;
  }
  return out;
}

inline Json utterances_json(const std::vector<Utterance>& utts) {
  Json arr = Json::array();
  for (const auto& u : utts) {
    arr.push_back({{"index", u.index},
                   {"speaker", u.speaker},
                   {"text", u.text},
                   {"emotion", std::string(to_string(u.emotion))}});
  }
  return arr;
}

}  // namespace detail

inline Dialogue parse_dialogue_record(const std::string& path, std::size_t lineno,
                                      const std::string& line) {
  Json j = parse_json_line(path, lineno, line);
  RecordReader r{j, path + ":" + std::to_string(lineno)};
  r.check_keys({"dialogue_id", "utterances", "split"});
  Dialogue d;
  d.dialogue_id = r.str("dialogue_id");
  if (d.dialogue_id.empty()) r.fail("dialogue_id must be non-empty");
  d.utterances = detail::parse_utterances(r);
  if (j.contains("split")) d.split = r.str("split");
  return d;
}

inline EfrInstance parse_instance_record(const std::string& path, std::size_t lineno,
                                         const std::string& line) {
  Json j = parse_json_line(path, lineno, line);
  RecordReader r{j, path + ":" + std::to_string(lineno)};
  r.check_keys({"instance_id", "dialogue_id", "utterances", "target_index", "target_speaker",
                "source_emotion", "target_emotion", "triggers", "instigators", "split"});
  EfrInstance ins;
  ins.instance_id = r.str("instance_id");
  if (ins.instance_id.empty()) r.fail("instance_id must be non-empty");
  ins.dialogue_id = r.str("dialogue_id");
  ins.utterances = detail::parse_utterances(r);
  const int t = ins.size();
  ins.target_index = static_cast<int>(r.integer("target_index"));
  if (ins.target_index != t - 1) {
    r.fail("target_index must equal the last utterance index " + std::to_string(t - 1));
  }
  ins.target_speaker = r.str("target_speaker");
  ins.source_emotion = parse_emotion(r.str("source_emotion"));
  ins.target_emotion = parse_emotion(r.str("target_emotion"));
  const Utterance& tgt = ins.utterances[ins.target_index];
  if (tgt.speaker != ins.target_speaker) r.fail("target_speaker does not match the target utterance");
  if (tgt.emotion != ins.target_emotion) r.fail("target_emotion does not match the target utterance");
  if (ins.source_emotion == ins.target_emotion) r.fail("source_emotion must differ from target_emotion");
  // the flip is relative to the target speaker's latest prior utterance
  int prev = -1;
  for (int i = ins.target_index - 1; i >= 0; --i) {
    if (ins.utterances[i].speaker == ins.target_speaker) {
      prev = i;
      break;
    }
  }
  if (prev < 0) r.fail("target speaker has no utterance before the target");
  if (ins.utterances[prev].emotion != ins.source_emotion) {
    r.fail("source_emotion does not match the target speaker's previous utterance");
  }

  ins.trigger_flags.assign(t, false);
  const Json& trig = r.field("triggers");
  if (!trig.is_array()) r.fail("\"triggers\" must be an array of utterance indices");
  for (const auto& v : trig) {
    if (!v.is_number_integer()) r.fail("\"triggers\" must contain integers");
    long long idx = v.get<long long>();
    if (idx < 0 || idx >= t) r.fail("trigger index " + std::to_string(idx) + " out of range");
    ins.trigger_flags[static_cast<int>(idx)] = true;
  }
  ins.instigators.assign(t, {});
  const Json& inst = r.field("instigators");
  if (!inst.is_object()) r.fail("\"instigators\" must be an object keyed by utterance index");
  for (auto it = inst.begin(); it != inst.end(); ++it) {
    int idx = -1;
    try {
      std::size_t pos = 0;
      idx = std::stoi(it.key(), &pos);
      if (pos != it.key().size()) idx = -1;
    } catch (...) {
      idx = -1;
    }
    if (idx < 0 || idx >= t) r.fail("instigator key \"" + it.key() + "\" is not a valid utterance index");
    ins.instigators[idx] = detail::canonical_labels(r, it.value(), "instigators");
    if (!ins.instigators[idx].empty() && !ins.trigger_flags[idx]) {
      r.fail("utterance " + std::to_string(idx) + " has instigators but is not a trigger");
    }
  }
  if (j.contains("split")) ins.split = r.str("split");
  return ins;
}

inline AnnotationRecord parse_annotation_record(const std::string& path, std::size_t lineno,
                                                const std::string& line) {
  Json j = parse_json_line(path, lineno, line);
  RecordReader r{j, path + ":" + std::to_string(lineno)};
  r.check_keys({"annotator_id", "instance_id", "triggers", "instigators"});
  AnnotationRecord rec;
  rec.annotator_id = r.str("annotator_id");
  if (rec.annotator_id.empty()) r.fail("annotator_id must be non-empty");
  rec.instance_id = r.str("instance_id");
  const Json& trig = r.field("triggers");
  if (!trig.is_array()) r.fail("\"triggers\" must be an array of utterance indices");
  for (const auto& v : trig) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      r.fail("\"triggers\" must contain non-negative integers");
    }
    rec.trigger_indices.push_back(static_cast<int>(v.get<long long>()));
  }
  std::sort(rec.trigger_indices.begin(), rec.trigger_indices.end());
  rec.trigger_indices.erase(std::unique(rec.trigger_indices.begin(), rec.trigger_indices.end()),
                            rec.trigger_indices.end());
  const Json& inst = r.field("instigators");
  if (!inst.is_object()) r.fail("\"instigators\" must be an object keyed by utterance index");
  for (auto it = inst.begin(); it != inst.end(); ++it) {
    int idx = -1;
    try {
      std::size_t pos = 0;
      idx = std::stoi(it.key(), &pos);
      if (pos != it.key().size()) idx = -1;
    } catch (...) {
      idx = -1;
    }
    if (idx < 0) r.fail("instigator key \"" + it.key() + "\" is not a valid utterance index");
    auto labels = detail::canonical_labels(r, it.value(), "instigators");
    if (!labels.empty()) rec.instigators[idx] = std::move(labels);
  }
  return rec;
}

inline std::vector<Dialogue> read_dialogues(const std::string& path, int jobs = 1) {
  const auto lines = read_lines(path);
  auto out = map_lines<Dialogue>(lines, jobs, [&](std::size_t i, const std::string& line) {
    return parse_dialogue_record(path, i + 1, line);
  });
  std::set<std::string> seen;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!seen.insert(out[i].dialogue_id).second) {
      fail_validation(path + ":" + std::to_string(i + 1) + ": duplicate dialogue_id \"" +
                      out[i].dialogue_id + "\"");
    }
  }
  return out;
}

inline std::vector<EfrInstance> read_instances(const std::string& path, int jobs = 1) {
  const auto lines = read_lines(path);
  auto out = map_lines<EfrInstance>(lines, jobs, [&](std::size_t i, const std::string& line) {
    return parse_instance_record(path, i + 1, line);
  });
  std::set<std::string> seen;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!seen.insert(out[i].instance_id).second) {
      fail_validation(path + ":" + std::to_string(i + 1) + ": duplicate instance_id \"" +
                      out[i].instance_id + "\"");
    }
  }
  return out;
}

inline AnnotationFile read_annotations(const std::string& path, int jobs = 1) {
  const auto lines = read_lines(path);
  auto recs = map_lines<AnnotationRecord>(lines, jobs, [&](std::size_t i, const std::string& line) {
    return parse_annotation_record(path, i + 1, line);
  });
  AnnotationFile file;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i == 0) file.annotator_id = recs[i].annotator_id;
    if (recs[i].annotator_id != file.annotator_id) {
      fail_validation(path + ":" + std::to_string(i + 1) +
                      ": mixed annotator_id values in one file");
    }
    if (file.by_instance.count(recs[i].instance_id)) {
      fail_validation(path + ":" + std::to_string(i + 1) + ": duplicate instance_id \"" +
                      recs[i].instance_id + "\"");
    }
    file.by_instance[recs[i].instance_id] = static_cast<int>(i);
    file.records.push_back(std::move(recs[i]));
  }
  if (file.records.empty()) fail_validation(path + ": annotation file is empty");
  return file;
}

inline Json dialogue_to_json(const Dialogue& d) {
  Json j = {{"dialogue_id", d.dialogue_id}, {"utterances", detail::utterances_json(d.utterances)}};
  if (!d.split.empty()) j["split"] = d.split;
  return j;
}

inline Json instance_to_json(const EfrInstance& ins) {
  Json triggers = Json::array();
  for (int i = 0; i < ins.size(); ++i) {
    if (ins.trigger_flags[i]) triggers.push_back(i);
  }
  Json instig = Json::object();
  for (int i = 0; i < ins.size(); ++i) {
    if (!ins.instigators[i].empty()) instig[std::to_string(i)] = ins.instigators[i];
  }
  Json j = {{"instance_id", ins.instance_id},
            {"dialogue_id", ins.dialogue_id},
            {"utterances", detail::utterances_json(ins.utterances)},
            {"target_index", ins.target_index},
            {"target_speaker", ins.target_speaker},
            {"source_emotion", std::string(to_string(ins.source_emotion))},
            {"target_emotion", std::string(to_string(ins.target_emotion))},
            {"triggers", triggers},
            {"instigators", instig}};
  if (!ins.split.empty()) j["split"] = ins.split;
  return j;
}

inline Json annotation_to_json(const AnnotationRecord& rec) {
  Json instig = Json::object();
  for (const auto& [idx, labels] : rec.instigators) instig[std::to_string(idx)] = labels;
  return {{"annotator_id", rec.annotator_id},
          {"instance_id", rec.instance_id},
          {"triggers", rec.trigger_indices},
          {"instigators", instig}};
}

inline void write_dialogues(const std::vector<Dialogue>& dialogues, const std::string& path) {
  JsonlWriter w(path);
  for (const auto& d : dialogues) w.write(dialogue_to_json(d));
  w.close();
}

inline void write_instances(const std::vector<EfrInstance>& instances, const std::string& path) {
  JsonlWriter w(path);
  for (const auto& ins : instances) w.write(instance_to_json(ins));
  w.close();
}

inline void write_annotations(const std::vector<AnnotationRecord>& records,
                              const std::string& path) {
  JsonlWriter w(path);
  for (const auto& rec : records) w.write(annotation_to_json(rec));
  w.close();
}

}  // namespace tgif
