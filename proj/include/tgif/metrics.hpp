#pragma once

#include <string>
#include <vector>

#include "tgif/model.hpp"
#include "tgif/taxonomy.hpp"

namespace tgif {

enum class EvalScope { all_utterances, triggers_only };

inline std::string_view to_string(EvalScope s) {
  return s == EvalScope::all_utterances ? "all_utterances" : "triggers_only";
}

inline EvalScope parse_eval_scope(std::string_view s) {
  if (s == "all_utterances") return EvalScope::all_utterances;
  if (s == "triggers_only") return EvalScope::triggers_only;
  fail_validation("unknown eval scope: \"" + std::string(s) + "\"");
}

struct ClassMetrics {
  std::string label;
  long long tp = 0, fp = 0, fn = 0;

  long long support() const { return tp + fn; }
  double precision() const { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }
  double recall() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

struct Metrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0;  // support-weighted
  long long support = 0;
  std::vector<ClassMetrics> per_class;
};

// Multi-label scores over pooled (utterance, class) decisions. gold and pred
// hold sorted space-label ids per pooled utterance.
inline Metrics weighted_prf(const std::vector<std::vector<int>>& gold,
                            const std::vector<std::vector<int>>& pred,
                            const LabelSpace& space) {
  require(gold.size() == pred.size(), "metrics: gold and prediction counts differ");
  Metrics m;
  m.per_class.resize(space.size());
  for (int c = 0; c < space.size(); ++c) m.per_class[c].label = space.label(c);
  std::vector<char> g(space.size()), p(space.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::fill(g.begin(), g.end(), 0);
    std::fill(p.begin(), p.end(), 0);
    for (int c : gold[i]) g.at(c) = 1;
    for (int c : pred[i]) p.at(c) = 1;
    for (int c = 0; c < space.size(); ++c) {
      if (g[c] && p[c]) ++m.per_class[c].tp;
      if (!g[c] && p[c]) ++m.per_class[c].fp;
      if (g[c] && !p[c]) ++m.per_class[c].fn;
    }
  }
  double wp = 0.0, wr = 0.0, wf = 0.0;
  for (const auto& cm : m.per_class) {
    m.support += cm.support();
    wp += double(cm.support()) * cm.precision();
    wr += double(cm.support()) * cm.recall();
    wf += double(cm.support()) * cm.f1();
  }
  if (m.support > 0) {
    m.precision = wp / double(m.support);
    m.recall = wr / double(m.support);
    m.f1 = wf / double(m.support);
  }
  return m;
}

struct PooledSets {
  std::vector<std::vector<int>> gold, pred;
};

// Pairs instances with their predictions and pools utterances per scope.
inline PooledSets pool_examples(const std::vector<EfrInstance>& instances,
                                const std::vector<Prediction>& preds, const LabelSpace& space,
                                EvalScope scope) {
  require(instances.size() == preds.size(), "metrics: instance and prediction counts differ");
  PooledSets out;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const EfrInstance& ins = instances[k];
    require(preds[k].instance_id == ins.instance_id,
            "metrics: prediction order does not match instances");
    require(preds[k].labels.size() == static_cast<std::size_t>(ins.size()),
            "metrics: prediction length mismatch for " + ins.instance_id);
    for (int i = 0; i < ins.size(); ++i) {
      if (scope == EvalScope::triggers_only && !ins.trigger_flags[i]) continue;
      out.gold.push_back(space.project(ins.instigators[i]));
      out.pred.push_back(preds[k].labels[i]);
    }
  }
  return out;
}

inline Json metrics_to_json(const Metrics& m) {
  Json per_class = Json::array();
  for (const auto& c : m.per_class) {
    per_class.push_back({{"label", c.label},
                         {"tp", c.tp},
                         {"fp", c.fp},
                         {"fn", c.fn},
                         {"support", c.support()},
                         {"precision", c.precision()},
                         {"recall", c.recall()},
                         {"f1", c.f1()}});
  }
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"support", m.support},
          {"per_class", per_class}};
}

}  // namespace tgif
