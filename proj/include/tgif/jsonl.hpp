#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tgif/error.hpp"

namespace tgif {

using Json = nlohmann::json;

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_validation("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline Json parse_json_line(const std::string& path, std::size_t lineno, const std::string& line) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    fail_validation(path + ":" + std::to_string(lineno) + ": malformed JSON");
  }
  if (!j.is_object()) {
    fail_validation(path + ":" + std::to_string(lineno) + ": record is not a JSON object");
  }
  return j;
}

// Applies fn to indices 0..n-1, optionally across jobs threads. Results keep
// index order; on failure the error from the lowest offending index is
// rethrown, so the outcome does not depend on jobs.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::optional<std::pair<std::size_t, Error>>> errors(jobs);
  std::vector<std::thread> workers;
  const std::size_t stride = static_cast<std::size_t>(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n; i += stride) {
        try {
          out[i] = fn(i);
        } catch (const Error& e) {
          if (!errors[w] || i < errors[w]->first) errors[w] = {i, e};
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  std::optional<std::pair<std::size_t, Error>> first;
  for (const auto& e : errors) {
    if (e && (!first || e->first < first->first)) first = e;
  }
  if (first) throw first->second;
  return out;
}

template <typename T>
std::vector<T> map_lines(const std::vector<std::string>& lines, int jobs,
                         const std::function<T(std::size_t, const std::string&)>& fn) {
  return parallel_map<T>(lines.size(), jobs, [&](std::size_t i) { return fn(i, lines[i]); });
}

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) fail_runtime("cannot open file for writing: " + path);
  }

  void write(const Json& j) {
    // invalid UTF-8 in raw text (e.g. CSV imports) is replaced with U+FFFD
    out_ << j.dump(-1, ' ', false, Json::error_handler_t::replace) << "\n";
  }

  void close() {
    out_.close();
    if (!out_) fail_runtime("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

// Field accessors that report path:line:field on type errors.
struct RecordReader {
  const Json& j;
  std::string where;

  [[noreturn]] void fail(const std::string& msg) const { fail_validation(where + ": " + msg); }

  const Json& field(const std::string& name) const {
    auto it = j.find(name);
    if (it == j.end()) fail("missing field \"" + name + "\"");
    return *it;
  }

  std::string str(const std::string& name) const {
    const Json& v = field(name);
    if (!v.is_string()) fail("field \"" + name + "\" must be a string");
    return v.get<std::string>();
  }

  long long integer(const std::string& name) const {
    const Json& v = field(name);
    if (!v.is_number_integer()) fail("field \"" + name + "\" must be an integer");
    return v.get<long long>();
  }

  void check_keys(const std::vector<std::string>& allowed) const {
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const auto& k : allowed) {
        if (it.key() == k) {
          ok = true;
          break;
        }
      }
      if (!ok) fail("unknown field \"" + it.key() + "\"");
    }
  }
};

}  // namespace tgif
