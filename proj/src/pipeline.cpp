#include "stgl/pipeline.hpp"

#include <cstring>
#include <fstream>

namespace stgl {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'G', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("checkpoint truncated");
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  write_pod(os, static_cast<std::uint8_t>(ckpt.spec.kind));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.hidden));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.time_dim));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.k));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.k2));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.hops));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.layers));
  write_pod(os, static_cast<std::int32_t>(ckpt.spec.mlp_hidden));
  write_pod(os, static_cast<std::uint8_t>(ckpt.spec.sampling));
  write_pod(os, static_cast<std::uint8_t>(ckpt.spec.direction));
  write_pod(os, static_cast<std::uint8_t>(ckpt.spec.fixed_alpha ? 1 : 0));
  write_pod(os, static_cast<std::uint8_t>(ckpt.spec.activation));
  write_pod(os, ckpt.seed);
  write_pod(os, static_cast<std::uint64_t>(ckpt.params.size()));
  os.write(reinterpret_cast<const char*>(ckpt.params.data()),
           static_cast<std::streamsize>(sizeof(double) * ckpt.params.size()));
  if (!os) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw IoError("not a checkpoint file: " + path.string());
  if (read_pod<std::uint32_t>(is) != kVersion) throw IoError("unsupported checkpoint version");

  Checkpoint ckpt;
  ckpt.spec.kind = static_cast<MethodKind>(read_pod<std::uint8_t>(is));
  ckpt.spec.hidden = read_pod<std::int32_t>(is);
  ckpt.spec.time_dim = read_pod<std::int32_t>(is);
  ckpt.spec.k = read_pod<std::int32_t>(is);
  ckpt.spec.k2 = read_pod<std::int32_t>(is);
  ckpt.spec.hops = read_pod<std::int32_t>(is);
  ckpt.spec.layers = read_pod<std::int32_t>(is);
  ckpt.spec.mlp_hidden = read_pod<std::int32_t>(is);
  ckpt.spec.sampling = static_cast<SampleMode>(read_pod<std::uint8_t>(is));
  ckpt.spec.direction = static_cast<Direction>(read_pod<std::uint8_t>(is));
  ckpt.spec.fixed_alpha = read_pod<std::uint8_t>(is) != 0;
  ckpt.spec.activation = static_cast<Activation>(read_pod<std::uint8_t>(is));
  ckpt.seed = read_pod<std::uint64_t>(is);
  const auto n = read_pod<std::uint64_t>(is);
  ckpt.params.resize(static_cast<Eigen::Index>(n));
  is.read(reinterpret_cast<char*>(ckpt.params.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  if (!is) throw IoError("checkpoint truncated");
  return ckpt;
}

}  // namespace stgl
