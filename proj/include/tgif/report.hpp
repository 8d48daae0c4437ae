#pragma once

#include <array>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "tgif/metrics.hpp"
#include "tgif/train.hpp"

namespace tgif {

// Gold support per space label over a split, pooled per utterance.
inline std::vector<long long> space_support(const std::vector<EfrInstance>& instances,
                                            const LabelSpace& space) {
  std::vector<long long> counts(space.size(), 0);
  for (const auto& ins : instances) {
    for (int i = 0; i < ins.size(); ++i) {
      for (int c : space.project(ins.instigators[i])) ++counts[c];
    }
  }
  return counts;
}

// Class ids ordered by descending support, ties broken by label name.
inline std::vector<int> support_ranking(const std::vector<long long>& support,
                                        const LabelSpace& space) {
  require(support.size() == static_cast<std::size_t>(space.size()),
          "report: support vector does not match the label space");
  std::vector<int> order(space.size());
  for (int i = 0; i < space.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (support[a] != support[b]) return support[a] > support[b];
    return space.label(a) < space.label(b);
  });
  return order;
}

inline Json classwise_report(const Metrics& m, const LabelSpace& space,
                             const std::vector<long long>& train_support, int top_k,
                             int bottom_k) {
  require(top_k >= 0 && top_k <= space.size(), "report: top_k exceeds class count");
  require(bottom_k >= 0 && bottom_k <= space.size(), "report: bottom_k exceeds class count");
  require(m.per_class.size() == static_cast<std::size_t>(space.size()),
          "report: metrics do not match the label space");
  const auto order = support_ranking(train_support, space);
  auto row = [&](int c) {
    return Json{{"label", space.label(c)},
                {"train_support", train_support[c]},
                {"f1", m.per_class[c].f1()}};
  };
  Json top = Json::array(), bottom = Json::array(), ranking = Json::array();
  for (int c : order) ranking.push_back(space.label(c));
  for (int k = 0; k < top_k; ++k) top.push_back(row(order[k]));
  for (int k = 0; k < bottom_k; ++k) bottom.push_back(row(order[space.size() - bottom_k + k]));
  return {{"ranking", ranking}, {"top", top}, {"bottom", bottom}};
}

enum class FlipBucket { negative_to_positive, positive_to_negative, other };

inline std::string_view to_string(FlipBucket b) {
  switch (b) {
    case FlipBucket::negative_to_positive: return "negative_to_positive";
    case FlipBucket::positive_to_negative: return "positive_to_negative";
    default: return "other";
  }
}

// Cross-polarity flips go to the bucket named by their flip polarity;
// flips inside one polarity class land in "other".
inline FlipBucket flip_bucket(Emotion source, Emotion target) {
  auto positive = [](Emotion e) { return e == Emotion::joy || e == Emotion::surprise; };
  auto negative = [](Emotion e) {
    return e == Emotion::anger || e == Emotion::disgust || e == Emotion::fear ||
           e == Emotion::sadness;
  };
  if ((positive(source) && positive(target)) || (negative(source) && negative(target))) {
    return FlipBucket::other;
  }
  return flip_polarity(source, target) == Polarity::positive ? FlipBucket::negative_to_positive
                                                             : FlipBucket::positive_to_negative;
}

struct DirectionalityReport {
  std::array<Metrics, 3> metrics;       // indexed by FlipBucket
  std::array<long long, 3> instances{}; // bucket sizes
};

inline DirectionalityReport directionality_report(const std::vector<EfrInstance>& instances,
                                                  const std::vector<Prediction>& preds,
                                                  const LabelSpace& space, EvalScope scope) {
  require(instances.size() == preds.size(), "report: instance and prediction counts differ");
  DirectionalityReport rep;
  for (int b = 0; b < 3; ++b) {
    std::vector<EfrInstance> sub;
    std::vector<Prediction> sub_preds;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto bucket = flip_bucket(instances[i].source_emotion, instances[i].target_emotion);
      if (static_cast<int>(bucket) != b) continue;
      sub.push_back(instances[i]);
      sub_preds.push_back(preds[i]);
    }
    rep.instances[b] = static_cast<long long>(sub.size());
    const auto pooled = pool_examples(sub, sub_preds, space, scope);
    rep.metrics[b] = weighted_prf(pooled.gold, pooled.pred, space);
  }
  return rep;
}

inline Json directionality_to_json(const DirectionalityReport& rep) {
  Json out;
  for (int b = 0; b < 3; ++b) {
    Json entry = metrics_to_json(rep.metrics[b]);
    entry.erase("per_class");
    entry["instances"] = rep.instances[b];
    out[std::string(to_string(static_cast<FlipBucket>(b)))] = entry;
  }
  return out;
}

struct AblationReport {
  std::vector<std::string> rows;
  std::vector<std::string> setups;
  std::vector<std::array<double, 3>> wf1;  // rows x setups
};

// Four nested module sets under each label setup, all with the same seed.
inline AblationReport ablation_report(
    const std::vector<EfrInstance>& train_set, const std::vector<EfrInstance>& dev_set,
    const TgifConfig& base, const TrainConfig& tc, std::uint64_t seed, int jobs = 1,
    const std::function<void(const std::string&, const std::string&, double)>& on_cell = {}) {
  using C = TgifConfig;
  const std::vector<std::pair<std::string, std::set<std::string>>> rows = {
      {"GUS", {C::kGus}},
      {"+ GES", {C::kGus, C::kGes}},
      {"+ GSS", {C::kGus, C::kGes, C::kGss}},
      {"+ SSES (TGIF)", {C::kGus, C::kGes, C::kGss, C::kSses}},
  };
  const std::array<LabelSetup, 3> setups = {LabelSetup::fine27, LabelSetup::coarse_defn14,
                                            LabelSetup::coarse_count14};
  AblationReport rep;
  for (const auto& [name, modules] : rows) rep.rows.push_back(name);
  for (LabelSetup s : setups) rep.setups.emplace_back(to_string(s));
  for (const auto& [name, modules] : rows) {
    std::array<double, 3> cells{};
    for (std::size_t si = 0; si < setups.size(); ++si) {
      TgifConfig cfg = base;
      cfg.enabled_modules = modules;
      cfg.label_setup = setups[si];
      TrainResult res = train(train_set, dev_set, cfg, tc, seed, jobs);
      cells[si] = dev_weighted_f1(res.model, dev_set, jobs);
      if (on_cell) on_cell(name, rep.setups[si], cells[si]);
    }
    rep.wf1.push_back(cells);
  }
  return rep;
}

inline Json ablation_to_json(const AblationReport& rep) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < rep.rows.size(); ++r) {
    Json cells;
    for (std::size_t s = 0; s < rep.setups.size(); ++s) cells[rep.setups[s]] = rep.wf1[r][s];
    rows.push_back({{"modules", rep.rows[r]}, {"dev_wf1", cells}});
  }
  return {{"rows", rows}};
}

namespace detail {

inline std::string fmt4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace detail

inline std::string metrics_to_table(const Metrics& m) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "class" << std::right << std::setw(9) << "support"
     << std::setw(11) << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1"
     << "\n";
  for (const auto& c : m.per_class) {
    os << std::left << std::setw(16) << c.label << std::right << std::setw(9) << c.support()
       << std::setw(11) << detail::fmt4(c.precision()) << std::setw(9) << detail::fmt4(c.recall())
       << std::setw(9) << detail::fmt4(c.f1()) << "\n";
  }
  os << std::left << std::setw(16) << "weighted" << std::right << std::setw(9) << m.support
     << std::setw(11) << detail::fmt4(m.precision) << std::setw(9) << detail::fmt4(m.recall)
     << std::setw(9) << detail::fmt4(m.f1) << "\n";
  return os.str();
}

inline std::string directionality_to_table(const DirectionalityReport& rep) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "bucket" << std::right << std::setw(10) << "instances"
     << std::setw(9) << "support" << std::setw(11) << "precision" << std::setw(9) << "recall"
     << std::setw(9) << "f1" << "\n";
  for (int b = 0; b < 3; ++b) {
    const Metrics& m = rep.metrics[b];
    os << std::left << std::setw(24) << std::string(to_string(static_cast<FlipBucket>(b)))
       << std::right << std::setw(10) << rep.instances[b] << std::setw(9) << m.support
       << std::setw(11) << detail::fmt4(m.precision) << std::setw(9) << detail::fmt4(m.recall)
       << std::setw(9) << detail::fmt4(m.f1) << "\n";
  }
  return os.str();
}

inline std::string ablation_to_table(const AblationReport& rep) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "modules";
  for (const auto& s : rep.setups) os << std::right << std::setw(16) << s;
  os << "\n";
  for (std::size_t r = 0; r < rep.rows.size(); ++r) {
    os << std::left << std::setw(16) << rep.rows[r];
    for (std::size_t s = 0; s < rep.setups.size(); ++s) {
      os << std::right << std::setw(16) << detail::fmt4(rep.wf1[r][s]);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace tgif
