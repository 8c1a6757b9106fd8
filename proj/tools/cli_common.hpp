#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "stgl/config.hpp"
#include "stgl/pipeline.hpp"

namespace stgl::cli {

using nlohmann::json;

/// Usage/validation problems map to exit code 2, runtime failures to 1.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Relative data paths resolve against STGL_DATA_DIR when set.
inline std::filesystem::path resolve_data_path(const std::filesystem::path& p) {
  if (p.is_absolute() || std::filesystem::exists(p)) return p;
  if (const char* root = std::getenv("STGL_DATA_DIR")) {
    const std::filesystem::path candidate = std::filesystem::path(root) / p;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return p;
}

inline std::uint64_t fnv1a_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) return 0;
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 14];
  while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!is) break;
  }
  return h;
}

inline std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

/// Written with status "running" before the work starts and finalized after,
/// so an aborted run is visible as such.
class RunManifest {
 public:
  RunManifest(std::filesystem::path path, std::string command, json config)
      : path_(std::move(path)) {
    body_["command"] = std::move(command);
    body_["build"] = "stgl 0.1.0";
    body_["config"] = std::move(config);
    body_["started"] = iso_now();
    body_["status"] = "running";
    body_["outputs"] = json::array();
    flush();
  }

  void set(const std::string& key, json value) {
    body_[key] = std::move(value);
    flush();
  }

  void add_output(const std::filesystem::path& p) {
    body_["outputs"].push_back(p.string());
    flush();
  }

  void finalize(double seconds) {
    body_["status"] = "complete";
    body_["finished"] = iso_now();
    body_["seconds"] = seconds;
    flush();
  }

 private:
  void flush() const { write_json(path_, body_); }

  std::filesystem::path path_;
  json body_;
};

inline void append_csv_row(const std::filesystem::path& path, const std::string& header,
                           const std::string& row) {
  static std::mutex mu;
  const std::lock_guard<std::mutex> lock(mu);
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream os(path, std::ios::app);
  if (!os) throw IoError("cannot append to " + path.string());
  if (fresh) os << header << "\n";
  os << row << "\n";
}

inline const char* to_string(SampleMode m) { return m == SampleMode::recent ? "recent" : "uniform"; }
inline const char* to_string(Direction d) { return d == Direction::bidirected ? "bi" : "di"; }

inline SampleMode sample_mode_from_string(const std::string& s) {
  if (s == "recent") return SampleMode::recent;
  if (s == "uniform") return SampleMode::uniform;
  throw UsageError("unknown sampling mode '" + s + "' (recent|uniform)");
}

inline Direction direction_from_string(const std::string& s) {
  if (s == "bi" || s == "bidirected") return Direction::bidirected;
  if (s == "di" || s == "directed") return Direction::directed;
  throw UsageError("unknown graph direction '" + s + "' (bi|di)");
}

inline json spec_to_json(const ModelSpec& spec) {
  return json{{"method", stgl::to_string(spec.kind)},
              {"hidden", spec.hidden},
              {"time_dim", spec.time_dim},
              {"k", spec.k},
              {"k2", spec.k2},
              {"hops", spec.hops},
              {"layers", spec.layers},
              {"mlp_hidden", spec.mlp_hidden},
              {"sampling", to_string(spec.sampling)},
              {"direction", to_string(spec.direction)},
              {"fixed_alpha", spec.fixed_alpha},
              {"activation", stgl::to_string(spec.activation)}};
}

}  // namespace stgl::cli
