#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// Canonical instigator taxonomy tables: the 27 fine labels with their coarse
// parent, polarity, and a short gloss, plus the observed per-flip label table.
// "humor" is the canonical spelling; parsers also accept "humour".
// The same data ships as taxonomy/fine27.json and taxonomy/pair_table.json.

namespace tgif {

struct FineLabelInfo {
  std::string_view name;
  std::string_view coarse;
  std::string_view polarity;
  std::string_view definition;
};

inline constexpr int kFineLabelCount = 27;
inline constexpr int kCoarseLabelCount = 14;

// Alphabetical; index order is the fine27 label-space order.
inline constexpr std::array<FineLabelInfo, kFineLabelCount> kFineLabels = {{
    {"abuse", "threat", "negative", "hostile or degrading treatment directed at someone"},
    {"adoration", "dazzle", "positive", "deep fondness or admiration for someone or something"},
    {"annoyance", "annoyance", "negative", "irritation at something bothersome"},
    {"awkwardness", "awkwardness", "ambiguous", "discomfort from a socially clumsy situation"},
    {"benefit", "benefit", "positive", "a gain or favorable outcome for oneself"},
    {"boredom", "others", "ambiguous", "weariness from a dull or tedious situation"},
    {"calmness", "ease", "positive", "a settled, untroubled state"},
    {"challenge", "others", "ambiguous", "a demand to prove or justify oneself"},
    {"cheer", "cheer", "positive", "lighthearted encouragement or festivity"},
    {"confusion", "confusion", "ambiguous", "inability to make sense of what is happening"},
    {"curiosity", "curiosity", "ambiguous", "an urge to know or learn more"},
    {"desire", "excitement", "positive", "a strong wish for something"},
    {"excitement", "excitement", "positive", "aroused enthusiasm or eagerness"},
    {"guilt", "nervousness", "negative", "self-blame for a wrong one has done"},
    {"horror", "threat", "negative", "intense revulsion or dread"},
    {"humor", "cheer", "positive", "something funny or amusing"},
    {"impressed", "dazzle", "positive", "admiration at an ability or accomplishment"},
    {"loss", "loss", "negative", "deprivation of someone or something valued"},
    {"nervousness", "nervousness", "negative", "unease or apprehension about what may happen"},
    {"nostalgia", "others", "ambiguous", "wistful longing for the past"},
    {"pain", "annoyance", "negative", "physical or emotional hurt"},
    {"relief", "ease", "positive", "release from distress or worry"},
    {"satisfaction", "excitement", "positive", "contentment from a fulfilled expectation"},
    {"scold", "nervousness", "negative", "an angry reprimand"},
    {"shock", "shock", "negative", "a sudden, unexpected jolt"},
    {"sympathy", "others", "negative", "shared sorrow for another's misfortune"},
    {"threat", "threat", "negative", "a sign of impending harm"},
}};

// Alphabetical; index order is the coarse label-space order.
inline constexpr std::array<std::string_view, kCoarseLabelCount> kCoarseLabels = {
    "annoyance", "awkwardness", "benefit", "cheer",       "confusion",
    "curiosity", "dazzle",      "ease",    "excitement",  "loss",
    "nervousness", "others",    "shock",   "threat"};

// Label sets observed per (source, target) emotion flip, keyed "source->target".
// Descriptive data: cells are not constrained to the polarity partition.
inline const std::map<std::string, std::vector<std::string>>& pair_table_data() {
  static const std::map<std::string, std::vector<std::string>> table = {
    {"anger->disgust",
     {"annoyance", "awkwardness", "calmness", "challenge", "cheer", "loss", "sympathy", "threat"}},
    {"anger->fear",
     {"annoyance", "awkwardness", "challenge", "guilt", "horror", "loss", "nervousness", "threat"}},
    {"anger->joy",
     {"adoration", "annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "desire", "excitement", "guilt", "humor", "impressed",
      "satisfaction"}},
    {"anger->neutral",
     {"annoyance", "awkwardness", "benefit", "boredom", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "desire", "excitement", "guilt", "impressed", "loss",
      "nervousness", "relief", "satisfaction", "sympathy", "threat"}},
    {"anger->sadness",
     {"adoration", "annoyance", "awkwardness", "calmness", "challenge", "cheer", "confusion",
      "curiosity", "excitement", "guilt", "horror", "impressed", "loss", "nervousness", "scold",
      "shock", "sympathy", "threat"}},
    {"anger->surprise",
     {"annoyance", "awkwardness", "calmness", "confusion", "curiosity", "excitement", "guilt",
      "horror", "loss", "nervousness", "pain", "relief", "scold", "shock", "sympathy", "threat"}},
    {"disgust->anger",
     {"annoyance", "awkwardness", "challenge", "confusion", "loss", "scold", "sympathy", "threat"}},
    {"disgust->fear",
     {"horror", "nervousness", "threat"}},
    {"disgust->joy",
     {"adoration", "awkwardness", "benefit", "cheer", "confusion", "curiosity", "excitement",
      "horror", "impressed", "relief"}},
    {"disgust->neutral",
     {"annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer", "confusion",
      "curiosity", "desire", "excitement", "guilt", "nervousness", "scold", "sympathy"}},
    {"disgust->sadness",
     {"annoyance", "awkwardness", "confusion", "loss", "sympathy", "threat"}},
    {"disgust->surprise",
     {"annoyance", "awkwardness", "boredom", "calmness", "challenge", "confusion", "curiosity",
      "excitement", "shock"}},
    {"fear->anger",
     {"annoyance", "awkwardness", "calmness", "confusion", "curiosity", "excitement", "guilt",
      "horror", "loss", "nervousness", "scold", "threat"}},
    {"fear->disgust",
     {"awkwardness"}},
    {"fear->joy",
     {"adoration", "benefit", "cheer", "curiosity", "desire", "excitement", "humor",
      "nervousness", "sympathy"}},
    {"fear->neutral",
     {"adoration", "annoyance", "awkwardness", "calmness", "cheer", "confusion", "curiosity",
      "excitement", "nervousness", "relief", "satisfaction", "sympathy", "threat"}},
    {"fear->sadness",
     {"annoyance", "awkwardness", "calmness", "challenge", "confusion", "desire", "guilt",
      "horror", "humor", "loss", "nervousness", "shock", "sympathy", "threat"}},
    {"fear->surprise",
     {"annoyance", "awkwardness", "benefit", "calmness", "cheer", "curiosity", "excitement",
      "guilt", "humor", "nervousness", "shock", "threat"}},
    {"joy->anger",
     {"abuse", "annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "excitement", "guilt", "horror", "loss", "nervousness", "scold",
      "shock", "sympathy", "threat"}},
    {"joy->disgust",
     {"annoyance", "awkwardness", "calmness", "challenge", "curiosity", "excitement", "humor",
      "impressed", "loss", "nervousness", "threat"}},
    {"joy->fear",
     {"awkwardness", "calmness", "cheer", "desire", "excitement", "horror", "loss", "nervousness",
      "threat"}},
    {"joy->neutral",
     {"adoration", "annoyance", "awkwardness", "benefit", "boredom", "calmness", "challenge",
      "cheer", "confusion", "curiosity", "desire", "excitement", "guilt", "humor", "impressed",
      "loss", "nervousness", "nostalgia", "relief", "satisfaction", "sympathy"}},
    {"joy->sadness",
     {"adoration", "annoyance", "awkwardness", "calmness", "cheer", "confusion", "curiosity",
      "desire", "excitement", "guilt", "loss", "nervousness", "sympathy", "threat"}},
    {"joy->surprise",
     {"adoration", "annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "excitement", "guilt", "horror", "humor", "impressed",
      "nervousness", "satisfaction", "shock", "threat"}},
    {"neutral->anger",
     {"abuse", "annoyance", "awkwardness", "boredom", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "desire", "excitement", "guilt", "horror", "humor", "loss",
      "nervousness", "relief", "scold", "shock", "sympathy", "threat"}},
    {"neutral->disgust",
     {"annoyance", "awkwardness", "boredom", "calmness", "challenge", "confusion", "curiosity",
      "desire", "horror", "loss", "shock", "threat"}},
    {"neutral->fear",
     {"annoyance", "awkwardness", "benefit", "calmness", "challenge", "confusion", "curiosity",
      "desire", "excitement", "guilt", "horror", "nervousness", "pain", "scold", "shock",
      "threat"}},
    {"neutral->joy",
     {"adoration", "annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "desire", "excitement", "humor", "impressed", "nervousness",
      "nostalgia", "relief", "satisfaction", "shock", "sympathy"}},
    {"neutral->sadness",
     {"annoyance", "awkwardness", "calmness", "challenge", "confusion", "curiosity", "desire",
      "excitement", "guilt", "horror", "loss", "nervousness", "nostalgia", "shock", "sympathy",
      "threat"}},
    {"neutral->surprise",
     {"adoration", "annoyance", "awkwardness", "benefit", "boredom", "calmness", "challenge",
      "cheer", "confusion", "curiosity", "desire", "excitement", "horror", "humor", "impressed",
      "loss", "nervousness", "relief", "shock", "threat"}},
    {"sadness->anger",
     {"annoyance", "awkwardness", "calmness", "challenge", "confusion", "curiosity", "desire",
      "excitement", "guilt", "horror", "loss", "nervousness", "shock", "sympathy", "threat"}},
    {"sadness->disgust",
     {"abuse", "annoyance", "awkwardness", "confusion", "loss"}},
    {"sadness->fear",
     {"annoyance", "awkwardness", "calmness", "challenge", "confusion", "guilt", "horror", "loss",
      "nervousness", "shock", "sympathy", "threat"}},
    {"sadness->joy",
     {"adoration", "annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "desire", "excitement", "humor", "impressed", "relief",
      "satisfaction"}},
    {"sadness->neutral",
     {"adoration", "annoyance", "awkwardness", "boredom", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "excitement", "guilt", "impressed", "loss", "nervousness",
      "nostalgia", "relief", "satisfaction", "sympathy"}},
    {"sadness->surprise",
     {"annoyance", "awkwardness", "calmness", "challenge", "cheer", "confusion", "curiosity",
      "desire", "excitement", "guilt", "horror", "impressed", "loss", "shock", "sympathy",
      "threat"}},
    {"surprise->anger",
     {"annoyance", "awkwardness", "calmness", "cheer", "confusion", "curiosity", "excitement",
      "guilt", "horror", "loss", "nervousness", "relief", "scold", "shock", "sympathy", "threat"}},
    {"surprise->disgust",
     {"annoyance", "awkwardness", "challenge", "confusion", "horror", "loss", "nervousness",
      "nostalgia", "shock", "sympathy", "threat"}},
    {"surprise->fear",
     {"awkwardness", "calmness", "challenge", "desire", "excitement", "guilt", "horror",
      "nervousness", "threat"}},
    {"surprise->joy",
     {"adoration", "annoyance", "awkwardness", "benefit", "calmness", "challenge", "cheer",
      "confusion", "curiosity", "desire", "excitement", "humor", "impressed", "nervousness",
      "nostalgia", "relief", "satisfaction", "shock"}},
    {"surprise->neutral",
     {"annoyance", "awkwardness", "calmness", "challenge", "cheer", "confusion", "curiosity",
      "desire", "excitement", "guilt", "humor", "impressed", "loss", "nervousness", "relief",
      "satisfaction", "shock", "sympathy", "threat"}},
    {"surprise->sadness",
     {"adoration", "annoyance", "awkwardness", "benefit", "calmness", "cheer", "confusion",
      "curiosity", "excitement", "guilt", "horror", "loss", "nervousness", "nostalgia", "scold",
      "shock", "sympathy", "threat"}},
  };
  return table;
}

}  // namespace tgif
