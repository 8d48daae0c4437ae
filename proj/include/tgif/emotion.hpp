#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "tgif/error.hpp"

namespace tgif {

// Index order is alphabetical and fixed; one-hot encodings use these indices.
enum class Emotion : int {
  anger = 0,
  disgust = 1,
  fear = 2,
  joy = 3,
  neutral = 4,
  sadness = 5,
  surprise = 6,
};

inline constexpr int kEmotionCount = 7;

inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "disgust", "fear", "joy", "neutral", "sadness", "surprise"};

inline constexpr std::array<Emotion, kEmotionCount> kAllEmotions = {
    Emotion::anger,   Emotion::disgust, Emotion::fear,    Emotion::joy,
    Emotion::neutral, Emotion::sadness, Emotion::surprise};

inline std::string_view to_string(Emotion e) { return kEmotionNames[static_cast<int>(e)]; }

inline std::optional<Emotion> try_parse_emotion(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (int i = 0; i < kEmotionCount; ++i) {
    if (lower == kEmotionNames[i]) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

inline Emotion parse_emotion(std::string_view name) {
  if (auto e = try_parse_emotion(name)) return *e;
  fail_validation("unknown emotion name: \"" + std::string(name) + "\"");
}

inline std::array<double, kEmotionCount> one_hot(Emotion e) {
  std::array<double, kEmotionCount> v{};
  v[static_cast<int>(e)] = 1.0;
  return v;
}

}  // namespace tgif
