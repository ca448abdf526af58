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

#ifndef DILEMMA_LAB_TOOLS_RUN_DIR_H_
#define DILEMMA_LAB_TOOLS_RUN_DIR_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/training.h"

namespace dilemma_lab::cli {

namespace fs = std::filesystem;

// Writes to a temporary sibling and renames it into place.
void AtomicWrite(const fs::path& path, std::string_view bytes);
void AtomicWriteJson(const fs::path& path, const nlohmann::json& j);
nlohmann::json ReadJsonFile(const fs::path& path);

// Lower-case hex SHA-256 of a file's bytes.
std::string Sha256File(const fs::path& path);
std::string Sha256Bytes(std::string_view bytes);

// Files excluded from the manifest: wall-clock metadata and the manifest.
bool IsVolatileArtifact(const fs::path& relative);

// manifest.json: {"algorithm": "sha256", "files": {path: hash}, "digest":
// hash over the sorted (path, hash) list}.
nlohmann::json WriteManifest(const fs::path& run_dir);

// Output root: --out, then $DILEMMA_LAB_OUT, then the config's output_dir.
fs::path ResolveOutputRoot(const std::optional<std::string>& flag,
                           const std::string& config_output_dir);

// Stage checkpoints under <root>/seed_<seed>/stage_<index>.cbor. Records are
// CBOR-encoded StageRecordToJson trees wrapped in a versioned envelope.
// Safe for concurrent use with distinct seeds.
class DirectoryStageStore final : public StageStore {
 public:
  static constexpr const char* kFormat = "dilemma_lab.stage_record.v1";

  explicit DirectoryStageStore(fs::path root) : root_(std::move(root)) {}

  std::optional<StageRecord> Load(std::uint64_t seed, int index) override;
  void Save(std::uint64_t seed, int index, const StageRecord& record) override;

  fs::path PathFor(std::uint64_t seed, int index) const;

 private:
  fs::path root_;
};

StageRecord ReadStageRecord(const fs::path& path);

// Welfare trajectories: seed,stage,s,episode,collective_reward.
std::string WelfareCsv(const std::vector<TrainingRun>& runs);

// Full-precision decimal form used in every CSV.
std::string FormatNumber(double v);

}  // namespace dilemma_lab::cli

#endif  // DILEMMA_LAB_TOOLS_RUN_DIR_H_
