#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "tgif/corpus.hpp"
#include "tgif/error.hpp"

namespace tgif {

// RFC 4180 CSV reader: quoted fields may contain commas, quotes ("" escapes)
// and line breaks. Rows are returned raw; the caller interprets columns.
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_validation("cannot open file: " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  const std::size_t n = content.size();
  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(row);
    row.clear();
  };
  while (i < n) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < n && content[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        field += c;
        ++i;
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < n && content[i + 1] == '\n') {
      end_row();
      i += 2;
    } else if (c == '\n' || c == '\r') {
      end_row();
      ++i;
    } else {
      field += c;
      field_started = true;
      ++i;
    }
  }
  if (quoted) fail_validation(path + ": unterminated quoted field at end of file");
  if (field_started || !row.empty()) end_row();
  return rows;
}

// One-way MELD CSV -> dialogue conversion. Groups rows by Dialogue_ID in
// first-appearance order, orders utterances by numeric Utterance_ID, and
// re-indexes them 0..n-1.
inline std::vector<Dialogue> import_meld_csv(const std::string& path,
                                             const std::string& id_prefix = "dia") {
  const auto rows = read_csv(path);
  if (rows.empty()) fail_validation(path + ": empty CSV");
  const auto& header = rows[0];
  auto column = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return static_cast<int>(c);
    }
    fail_validation(path + ": missing required column \"" + name + "\"");
  };
  const int col_text = column("Utterance");
  const int col_speaker = column("Speaker");
  const int col_emotion = column("Emotion");
  const int col_dia = column("Dialogue_ID");
  const int col_utt = column("Utterance_ID");

  struct Row {
    long long utt_id;
    Utterance utt;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> groups;
  for (std::size_t rix = 1; rix < rows.size(); ++rix) {
    const auto& r = rows[rix];
    if (r.size() == 1 && r[0].empty()) continue;  // stray blank line
    const std::string where = path + ": row " + std::to_string(rix + 1);
    const int need = std::max({col_text, col_speaker, col_emotion, col_dia, col_utt});
    if (static_cast<int>(r.size()) <= need) fail_validation(where + ": too few columns");
    Row row;
    try {
      row.utt_id = std::stoll(r[col_utt]);
    } catch (...) {
      fail_validation(where + ": Utterance_ID is not an integer: \"" + r[col_utt] + "\"");
    }
    row.utt.text = r[col_text];
    row.utt.speaker = detail::trim(r[col_speaker]);
    if (row.utt.speaker.empty()) fail_validation(where + ": empty Speaker");
    auto emo = try_parse_emotion(r[col_emotion]);
    if (!emo) fail_validation(where + ": unknown Emotion \"" + r[col_emotion] + "\"");
    row.utt.emotion = *emo;
    const std::string& dia = r[col_dia];
    if (!groups.count(dia)) order.push_back(dia);
    groups[dia].push_back(std::move(row));
  }

  std::vector<Dialogue> out;
  for (const auto& dia : order) {
    auto& rows_of = groups[dia];
    std::stable_sort(rows_of.begin(), rows_of.end(),
                     [](const Row& a, const Row& b) { return a.utt_id < b.utt_id; });
    Dialogue d;
    d.dialogue_id = id_prefix + dia;
    for (std::size_t i = 0; i < rows_of.size(); ++i) {
      rows_of[i].utt.index = static_cast<int>(i);
      d.utterances.push_back(std::move(rows_of[i].utt));
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace tgif
