// Copyright 2026 The Dilemma Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "run_dir.h"

#include <unistd.h>

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace dilemma_lab::cli {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(const void* data, std::size_t size) {
    EVP_DigestUpdate(ctx_, data, size);
  }
  std::string HexDigest() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[md[i] >> 4];
      out += kHex[md[i] & 0xf];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

void AtomicWrite(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void AtomicWriteJson(const fs::path& path, const nlohmann::json& j) {
  AtomicWrite(path, j.dump(2) + "\n");
}

nlohmann::json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

std::string Sha256Bytes(std::string_view bytes) {
  Sha256 h;
  h.Update(bytes.data(), bytes.size());
  return h.HexDigest();
}

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.Update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.HexDigest();
}

bool IsVolatileArtifact(const fs::path& relative) {
  const std::string name = relative.filename().string();
  return name == "manifest.json" || name == "timing.json" ||
         name.find(".tmp.") != std::string::npos;
}

nlohmann::json WriteManifest(const fs::path& run_dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), run_dir);
    if (IsVolatileArtifact(rel)) continue;
    files[rel.generic_string()] = Sha256File(entry.path());
  }
  std::string listing;
  for (const auto& [path, hash] : files) {
    listing += path + '\0' + hash + '\n';
  }
  nlohmann::json manifest{{"algorithm", "sha256"},
                          {"files", files},
                          {"digest", Sha256Bytes(listing)}};
  AtomicWriteJson(run_dir / "manifest.json", manifest);
  return manifest;
}

fs::path ResolveOutputRoot(const std::optional<std::string>& flag,
                           const std::string& config_output_dir) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("DILEMMA_LAB_OUT"); env && *env) {
    return env;
  }
  return config_output_dir;
}

fs::path DirectoryStageStore::PathFor(std::uint64_t seed, int index) const {
  return root_ / ("seed_" + std::to_string(seed)) /
         ("stage_" + std::to_string(index) + ".cbor");
}

StageRecord ReadStageRecord(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const std::vector<std::uint8_t> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const nlohmann::json j = nlohmann::json::from_cbor(bytes);
  if (j.value("format", "") != DirectoryStageStore::kFormat) {
    throw std::runtime_error("unsupported checkpoint format in " +
                             path.string());
  }
  return StageRecordFromJson(j.at("record"));
}

std::optional<StageRecord> DirectoryStageStore::Load(std::uint64_t seed,
                                                     int index) {
  const fs::path path = PathFor(seed, index);
  if (!fs::exists(path)) return std::nullopt;
  return ReadStageRecord(path);
}

void DirectoryStageStore::Save(std::uint64_t seed, int index,
                               const StageRecord& record) {
  const nlohmann::json j{{"format", kFormat},
                         {"seed", seed},
                         {"index", index},
                         {"record", StageRecordToJson(record)}};
  const std::vector<std::uint8_t> bytes = nlohmann::json::to_cbor(j);
  AtomicWrite(PathFor(seed, index),
              std::string_view(reinterpret_cast<const char*>(bytes.data()),
                               bytes.size()));
}

std::string FormatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string WelfareCsv(const std::vector<TrainingRun>& runs) {
  std::string out = "seed,stage,s,episode,collective_reward\n";
  for (const auto& run : runs) {
    for (const auto& stage : run.stages) {
      const std::string prefix = std::to_string(run.seed) + "," +
                                 stage.plan.label + "," +
                                 FormatNumber(stage.plan.s) + ",";
      for (std::size_t e = 0; e < stage.welfare.size(); ++e) {
        out += prefix;
        out += std::to_string(e);
        out += ',';
        out += FormatNumber(stage.welfare[e]);
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace dilemma_lab::cli
