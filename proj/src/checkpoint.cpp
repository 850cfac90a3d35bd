#include "sdcl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sdcl/digest.hpp"
#include "sdcl/error.hpp"

namespace sdcl {

namespace {

constexpr char kMagic[8] = {'S', 'D', 'C', 'L', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* field) {
    need(8, field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char* field) { return std::bit_cast<double>(u64(field)); }
  void skip(std::size_t n) { pos_ += n; }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void need(std::size_t n, const char* field) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("truncated checkpoint while reading ") + field, pos_);
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const ModelState& state) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kCheckpointVersion);
  w.u32(state.spec.activation == Activation::relu ? 0 : 1);
  w.u64(state.spec.input_dim);
  w.u64(state.spec.num_classes);
  w.u64(state.spec.seed);
  w.u64(state.epoch_tag);
  w.u64(state.spec.hidden_dims.size());
  for (std::size_t h : state.spec.hidden_dims) w.u64(h);
  w.u64(state.parameters.size());
  for (double p : state.parameters) w.f64(p);
  w.u64(fnv1a64(w.bytes()));
  return std::move(w.bytes());
}

ModelState decode_checkpoint(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(sizeof kMagic, "magic");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("not a checkpoint (bad magic)", 0);
  }
  r.skip(sizeof kMagic);
  const std::size_t version_offset = r.pos();
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) throw UnsupportedVersionError(version, version_offset);

  ModelState state;
  const std::size_t act_offset = r.pos();
  const std::uint32_t act = r.u32("activation");
  if (act > 1) throw FormatError("unknown activation code", act_offset);
  state.spec.activation = act == 0 ? Activation::relu : Activation::tanh;
  state.spec.input_dim = r.u64("input_dim");
  state.spec.num_classes = r.u64("num_classes");
  state.spec.seed = r.u64("seed");
  state.epoch_tag = r.u64("epoch_tag");
  const std::size_t hidden_offset = r.pos();
  const std::uint64_t hidden = r.u64("hidden count");
  if (hidden > r.remaining() / 8) throw FormatError("hidden layer count exceeds file size", hidden_offset);
  for (std::uint64_t i = 0; i < hidden; ++i) state.spec.hidden_dims.push_back(r.u64("hidden width"));
  const std::size_t count_offset = r.pos();
  const std::uint64_t count = r.u64("parameter count");
  if (count > r.remaining() / 8) throw FormatError("parameter count exceeds file size", count_offset);
  try {
    state.spec.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid model header: ") + e.what(), 16);
  }
  if (count != state.spec.parameter_count()) {
    throw FormatError("parameter count does not match architecture", count_offset);
  }
  state.parameters.resize(count);
  for (auto& p : state.parameters) p = r.f64("parameters");
  const std::size_t checksum_offset = r.pos();
  const std::uint64_t expected = fnv1a64(bytes.first(checksum_offset));
  if (r.u64("checksum") != expected) throw FormatError("checksum mismatch", checksum_offset);
  if (r.remaining() != 0) throw FormatError("trailing bytes after checksum", r.pos());
  return state;
}

void save_state(const ModelState& state, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

ModelState load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace sdcl
