#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgif/corpus.hpp"
#include "tgif/error.hpp"

namespace tgif {

enum class AgreementLayer { trigger, instigator };

inline AgreementLayer parse_agreement_layer(std::string_view s) {
  if (s == "trigger") return AgreementLayer::trigger;
  if (s == "instigator") return AgreementLayer::instigator;
  fail_validation("unknown agreement layer: \"" + std::string(s) + "\"");
}

struct AgreementReport {
  struct Pair {
    std::string annotator_a;
    std::string annotator_b;
    double alpha = 0.0;
  };
  std::vector<Pair> pairwise;
  double average = 0.0;
};

namespace detail {

// Krippendorff's alpha from a coincidence matrix over encoded values.
// units: one (value, value) pair per pairable unit (two coders).
// dist: symmetric difference function with dist(c, c) == 0.
inline double alpha_two_coders(const std::vector<std::pair<int, int>>& units, int n_values,
                               const std::function<double(int, int)>& dist) {
  std::vector<std::vector<double>> o(n_values, std::vector<double>(n_values, 0.0));
  for (const auto& [a, b] : units) {
    // m_u = 2, so each ordered pair contributes 1/(m_u - 1) = 1
    o[a][b] += 1.0;
    o[b][a] += 1.0;
  }
  std::vector<double> n_c(n_values, 0.0);
  double n = 0.0;
  for (int c = 0; c < n_values; ++c) {
    for (int k = 0; k < n_values; ++k) n_c[c] += o[c][k];
    n += n_c[c];
  }
  double d_obs = 0.0;
  for (int c = 0; c < n_values; ++c) {
    for (int k = 0; k < n_values; ++k) {
      if (o[c][k] != 0.0) d_obs += o[c][k] * dist(c, k);
    }
  }
  d_obs /= n;
  double d_exp = 0.0;
  for (int c = 0; c < n_values; ++c) {
    for (int k = 0; k < n_values; ++k) d_exp += n_c[c] * n_c[k] * dist(c, k);
  }
  d_exp /= n * (n - 1.0);
  if (d_exp == 0.0) return 1.0;  // a single observed value: perfect agreement
  return 1.0 - d_obs / d_exp;
}

// MASI distance between label sets: 1 - Jaccard * monotonicity, where the
// monotonicity factor is 1 for equal sets, 2/3 for subset/superset, 1/3 for a
// partial overlap, and 0 for disjoint non-empty sets.
inline double masi_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::vector<std::string> inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
  const double jaccard = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  double m = 0.0;
  if (a == b) {
    m = 1.0;
  } else if (inter.size() == a.size() || inter.size() == b.size()) {
    m = 2.0 / 3.0;
  } else if (!inter.empty()) {
    m = 1.0 / 3.0;
  }
  return 1.0 - jaccard * m;
}

}  // namespace detail

// Pairwise alpha over every annotator pair plus the arithmetic mean.
// instance_sizes supplies the utterance count per instance; instances missing
// from the map fall back to (highest index mentioned by any annotator) + 1.
inline AgreementReport krippendorff_alpha(const std::vector<AnnotationFile>& files,
                                          AgreementLayer layer,
                                          const std::map<std::string, int>& instance_sizes = {}) {
  require(files.size() >= 2, "agreement needs at least two annotators");

  using LabelSet = std::vector<std::string>;
  AgreementReport report;
  for (std::size_t fa = 0; fa + 1 < files.size(); ++fa) {
    for (std::size_t fb = fa + 1; fb < files.size(); ++fb) {
      const AnnotationFile& A = files[fa];
      const AnnotationFile& B = files[fb];
      std::vector<std::string> shared;
      for (const auto& [id, _] : A.by_instance) {
        if (B.by_instance.count(id)) shared.push_back(id);
      }
      if (shared.empty()) {
        fail_validation("annotators " + A.annotator_id + " and " + B.annotator_id +
                        " share no instances");
      }

      std::map<LabelSet, int> value_ids;
      std::vector<LabelSet> values;
      auto encode = [&](const LabelSet& v) {
        auto it = value_ids.find(v);
        if (it != value_ids.end()) return it->second;
        const int id = static_cast<int>(values.size());
        value_ids[v] = id;
        values.push_back(v);
        return id;
      };

      std::vector<std::pair<int, int>> units;
      for (const auto& id : shared) {
        const AnnotationRecord& ra = A.records[A.by_instance.at(id)];
        const AnnotationRecord& rb = B.records[B.by_instance.at(id)];
        int t = 0;
        if (auto it = instance_sizes.find(id); it != instance_sizes.end()) {
          t = it->second;
        } else {
          for (int idx : ra.trigger_indices) t = std::max(t, idx + 1);
          for (int idx : rb.trigger_indices) t = std::max(t, idx + 1);
          for (const auto& [idx, _] : ra.instigators) t = std::max(t, idx + 1);
          for (const auto& [idx, _] : rb.instigators) t = std::max(t, idx + 1);
        }
        for (int u = 0; u < t; ++u) {
          if (layer == AgreementLayer::trigger) {
            const bool ta = std::binary_search(ra.trigger_indices.begin(),
                                               ra.trigger_indices.end(), u);
            const bool tb = std::binary_search(rb.trigger_indices.begin(),
                                               rb.trigger_indices.end(), u);
            units.emplace_back(encode(ta ? LabelSet{"1"} : LabelSet{}),
                               encode(tb ? LabelSet{"1"} : LabelSet{}));
          } else {
            auto ia = ra.instigators.find(u);
            auto ib = rb.instigators.find(u);
            units.emplace_back(encode(ia == ra.instigators.end() ? LabelSet{} : ia->second),
                               encode(ib == rb.instigators.end() ? LabelSet{} : ib->second));
          }
        }
      }

      std::function<double(int, int)> dist;
      if (layer == AgreementLayer::trigger) {
        dist = [](int a, int b) { return a == b ? 0.0 : 1.0; };
      } else {
        dist = [&values](int a, int b) { return detail::masi_distance(values[a], values[b]); };
      }
      const double alpha = detail::alpha_two_coders(units, static_cast<int>(values.size()), dist);
      report.pairwise.push_back({A.annotator_id, B.annotator_id, alpha});
    }
  }
  double sum = 0.0;
  for (const auto& p : report.pairwise) sum += p.alpha;
  report.average = sum / static_cast<double>(report.pairwise.size());
  return report;
}

inline Json agreement_to_json(const AgreementReport& rep, AgreementLayer layer) {
  Json pairs = Json::array();
  for (const auto& p : rep.pairwise) {
    pairs.push_back({{"annotator_a", p.annotator_a}, {"annotator_b", p.annotator_b},
                     {"alpha", p.alpha}});
  }
  return {{"layer", layer == AgreementLayer::trigger ? "trigger" : "instigator"},
          {"pairwise", pairs},
          {"average", rep.average}};
}

}  // namespace tgif
