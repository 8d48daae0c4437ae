#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tgif/model.hpp"

namespace tgif {

// Checkpoint layout (all integers and doubles little-endian):
//   magic "TGIF-CKPT", u32 version
//   u64 header_len, header JSON: {"config", "label_space", "seed", "vocab"}
//   u64 n_params, then per tensor in name order:
//     u64 name_len, name bytes, u32 rank, u64 dims[rank], f64 data[...]
inline constexpr char kCheckpointMagic[] = "TGIF-CKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  put_u64(out, bits);
}

class ByteReader {
 public:
  ByteReader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::string take(std::size_t n, const std::string& what) {
    if (pos_ + n > bytes_.size()) {
      fail_validation(path_ + ": checkpoint truncated while reading " + what);
    }
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t u32(const std::string& what) {
    const std::string b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }

  std::uint64_t u64(const std::string& what) {
    const std::string b = take(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }

  double f64(const std::string& what) {
    const std::uint64_t bits = u64(what);
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }

  bool done() const { return pos_ == bytes_.size(); }

  const std::string& path() const { return path_; }

 private:
  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline void save_checkpoint(const TgifModel& model, const std::string& path) {
  using detail::put_u32;
  using detail::put_u64;
  Json header;
  header["config"] = tgif_config_to_json(model.config());
  header["label_space"] = {{"setup", std::string(to_string(model.space().setup()))},
                           {"labels", model.space().labels()}};
  header["seed"] = model.params().seed();
  header["vocab"] = model.vocab().tokens();
  const std::string header_bytes = header.dump();

  std::string out;
  out.append(kCheckpointMagic, sizeof(kCheckpointMagic) - 1);
  put_u32(out, kCheckpointVersion);
  put_u64(out, header_bytes.size());
  out += header_bytes;
  const auto& params = model.params().all();
  put_u64(out, params.size());
  for (const auto& [name, tensor] : params) {
    put_u64(out, name.size());
    out += name;
    put_u32(out, static_cast<std::uint32_t>(tensor.rank()));
    for (std::size_t d : tensor.shape) put_u64(out, d);
    for (double v : tensor.data) detail::put_f64(out, v);
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) fail_runtime("cannot open file for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  f.close();
  if (!f) fail_runtime("write failed: " + path);
}

inline TgifModel load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail_validation("cannot open file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  detail::ByteReader r(std::move(bytes), path);

  constexpr std::size_t magic_len = sizeof(kCheckpointMagic) - 1;
  if (r.take(magic_len, "magic") != std::string(kCheckpointMagic, magic_len)) {
    fail_validation(path + ": not a TGIF checkpoint");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    fail_validation(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint64_t header_len = r.u64("header length");
  Json header = Json::parse(r.take(header_len, "header"), nullptr, false);
  if (header.is_discarded() || !header.is_object()) {
    fail_validation(path + ": malformed checkpoint header");
  }
  RecordReader hr{header, path + ": header"};
  hr.check_keys({"config", "label_space", "seed", "vocab"});
  TgifConfig cfg = tgif_config_from_json(hr.field("config"), path + ": header config");
  const Json& ls = hr.field("label_space");
  RecordReader lr{ls, path + ": header label_space"};
  const LabelSetup setup = parse_label_setup(lr.str("setup"));
  std::vector<std::string> labels;
  for (const auto& e : lr.field("labels")) labels.push_back(e.get<std::string>());
  LabelSpace space = LabelSpace::from_labels(setup, std::move(labels));
  std::vector<std::string> tokens;
  for (const auto& e : hr.field("vocab")) tokens.push_back(e.get<std::string>());
  const std::uint64_t seed = hr.field("seed").get<std::uint64_t>();

  TgifModel model(std::move(cfg), std::move(space), Vocab::from_tokens(std::move(tokens)), seed);

  const std::uint64_t n_params = r.u64("parameter count");
  if (n_params != model.params().all().size()) {
    fail_validation(path + ": checkpoint holds " + std::to_string(n_params) +
                    " tensors, model expects " + std::to_string(model.params().all().size()));
  }
  for (std::uint64_t i = 0; i < n_params; ++i) {
    const std::uint64_t name_len = r.u64("tensor name length");
    const std::string name = r.take(name_len, "tensor name");
    if (!model.params().has(name)) fail_validation(path + ": unexpected tensor \"" + name + "\"");
    Tensor& tensor = model.params().at(name);
    const std::uint32_t rank = r.u32("rank of " + name);
    std::vector<std::size_t> shape;
    for (std::uint32_t k = 0; k < rank; ++k) {
      shape.push_back(static_cast<std::size_t>(r.u64("shape of " + name)));
    }
    if (shape != tensor.shape) {
      fail_validation(path + ": tensor \"" + name + "\" has shape " + Tensor::shape_str(shape) +
                      ", model expects " + Tensor::shape_str(tensor.shape));
    }
    for (std::size_t k = 0; k < tensor.size(); ++k) {
      tensor.data[k] = r.f64("data of " + name);
    }
  }
  if (!r.done()) fail_validation(path + ": trailing bytes after last tensor");
  return model;
}

}  // namespace tgif
