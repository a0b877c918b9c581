#pragma once

// On-disk artifact store. Each pipeline stage owns whole subdirectories and
// commits them atomically; manifest.json lists every file with its CRC32.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace precut::store {

std::uint32_t crc32_bytes(std::span<const std::uint8_t> bytes, std::uint32_t crc = 0);
std::uint32_t crc32_text(std::string_view text, std::uint32_t crc = 0);
std::uint32_t crc32_file(const std::filesystem::path& path);
std::string hex32(std::uint32_t v);

struct FileEntry {
  std::string crc32;
  std::uintmax_t size = 0;
  friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

struct StageRecord {
  std::string digest;             // inputs the stage was run from
  std::vector<std::string> dirs;  // owned subdirectories
};

class Store {
 public:
  // Creates the directory and an empty manifest when absent.
  static Store init(const std::filesystem::path& root);
  // Requires an existing manifest. With `verify`, every listed file is
  // re-checksummed; a mismatch or missing file throws Error naming it.
  static Store open(const std::filesystem::path& root, bool verify = true);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(const std::string& rel) const { return root_ / rel; }

  bool has_stage(const std::string& name) const { return stages_.count(name) > 0; }
  std::optional<StageRecord> stage(const std::string& name) const;
  const std::map<std::string, StageRecord>& stages() const { return stages_; }
  const std::map<std::string, FileEntry>& files() const { return files_; }
  // Checksum of a listed file; throws when absent.
  const FileEntry& file(const std::string& rel) const;

  // Runs `write` against a staging root, then swaps each of `dirs` into
  // place and rewrites the manifest. On failure nothing visible changes.
  void commit(const std::string& stage, const std::string& digest, const std::vector<std::string>& dirs,
              const std::function<void(const std::filesystem::path& staging)>& write);
  // Drops a stage record and its directories.
  void remove_stage(const std::string& stage);

  void verify() const;
  std::string read_text(const std::string& rel) const;

 private:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}
  void load_manifest();
  void save_manifest() const;

  std::filesystem::path root_;
  std::map<std::string, FileEntry> files_;
  std::map<std::string, StageRecord> stages_;
};

}  // namespace precut::store
