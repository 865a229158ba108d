#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace paircause {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit content hash; stable across platforms and documented in
// the manifest as "fnv1a64".
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

// Every run writes one manifest next to its outputs: the command, a config
// snapshot, input digests, seeds, tool version, and timestamp.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::vector<std::uint64_t> seeds;
  std::string timestamp;  // ISO 8601 UTC, filled by write if empty

  nlohmann::json to_json() const;
};

// Write-then-rename; the destination never holds a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

void write_manifest(const std::filesystem::path& out_dir,
                    const RunManifest& manifest);

std::string iso8601_now();

}  // namespace paircause
