#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "precut/error.hpp"
#include "precut/store.hpp"

namespace precut::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kFormat = "precut-store/1";

std::string unique_suffix() {
  static std::atomic<int> counter{0};
  return std::to_string(::getpid()) + "-" + std::to_string(counter++);
}

bool under(const std::string& rel, const std::string& dir) {
  return rel.size() > dir.size() && rel.compare(0, dir.size(), dir) == 0 && rel[dir.size()] == '/';
}

void validate_dir(const std::string& d) {
  if (d.empty() || d.front() == '/' || d.front() == '.' || d.find("..") != std::string::npos || d.back() == '/') {
    throw Error("invalid store directory name '" + d + "'");
  }
}

}  // namespace

Store Store::init(const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error("cannot create store " + root.string() + ": " + ec.message());
  Store s(root);
  if (fs::exists(root / kManifest)) {
    s.load_manifest();
  } else {
    s.save_manifest();
  }
  return s;
}

Store Store::open(const fs::path& root, bool verify) {
  if (!fs::is_directory(root)) throw Error("store not found: " + root.string());
  if (!fs::exists(root / kManifest)) throw Error("missing manifest: " + (root / kManifest).string());
  Store s(root);
  s.load_manifest();
  if (verify) s.verify();
  return s;
}

std::optional<StageRecord> Store::stage(const std::string& name) const {
  auto it = stages_.find(name);
  if (it == stages_.end()) return std::nullopt;
  return it->second;
}

const FileEntry& Store::file(const std::string& rel) const {
  auto it = files_.find(rel);
  if (it == files_.end()) throw Error("file not in store manifest: " + rel);
  return it->second;
}

void Store::load_manifest() {
  std::ifstream in(root_ / kManifest);
  if (!in) throw Error("missing manifest: " + (root_ / kManifest).string());
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kFormat) throw Error("unsupported store format in " + root_.string());
    files_.clear();
    stages_.clear();
    for (const auto& [rel, e] : j.at("files").items()) {
      files_[rel] = {e.at("crc32").get<std::string>(), e.at("size").get<std::uintmax_t>()};
    }
    for (const auto& [name, e] : j.at("stages").items()) {
      stages_[name] = {e.at("digest").get<std::string>(), e.at("dirs").get<std::vector<std::string>>()};
    }
  } catch (const json::exception& e) {
    throw Error("malformed manifest in " + root_.string() + ": " + e.what());
  }
}

void Store::save_manifest() const {
  json files = json::object();
  for (const auto& [rel, e] : files_) files[rel] = {{"crc32", e.crc32}, {"size", e.size}};
  json stages = json::object();
  for (const auto& [name, s] : stages_) stages[name] = {{"digest", s.digest}, {"dirs", s.dirs}};
  const json j = {{"format", kFormat}, {"stages", stages}, {"files", files}};
  const fs::path tmp = root_ / (std::string(kManifest) + ".tmp-" + unique_suffix());
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(1) << "\n";
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, root_ / kManifest);
}

void Store::commit(const std::string& stage, const std::string& digest, const std::vector<std::string>& dirs,
                   const std::function<void(const fs::path&)>& write) {
  for (const auto& d : dirs) validate_dir(d);
  const fs::path staging = root_ / (".staging-" + unique_suffix());
  const fs::path trash = root_ / (".trash-" + unique_suffix());
  fs::create_directories(staging);
  std::map<std::string, FileEntry> fresh;
  try {
    write(staging);
    for (const auto& d : dirs) {
      fs::create_directories(staging / d);
      std::vector<fs::path> paths;
      for (const auto& e : fs::recursive_directory_iterator(staging / d)) {
        if (e.is_regular_file()) paths.push_back(e.path());
      }
      std::sort(paths.begin(), paths.end());
      for (const auto& p : paths) {
        const std::string rel = fs::relative(p, staging).generic_string();
        fresh[rel] = {hex32(crc32_file(p)), fs::file_size(p)};
      }
    }
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  // Directories the stage owned before but no longer produces go too.
  std::vector<std::string> dropped;
  if (auto prev = stages_.find(stage); prev != stages_.end()) {
    for (const auto& d : prev->second.dirs) {
      if (std::find(dirs.begin(), dirs.end(), d) == dirs.end()) dropped.push_back(d);
    }
  }
  for (const auto& d : dropped) {
    if (fs::exists(root_ / d)) {
      fs::create_directories((trash / d).parent_path());
      fs::rename(root_ / d, trash / d);
    }
  }
  std::vector<std::string> touched = dirs;
  touched.insert(touched.end(), dropped.begin(), dropped.end());
  for (const auto& d : dirs) {
    if (fs::exists(root_ / d)) {
      fs::create_directories((trash / d).parent_path());
      fs::rename(root_ / d, trash / d);
    }
    fs::create_directories((root_ / d).parent_path());
    fs::rename(staging / d, root_ / d);
  }
  for (auto it = files_.begin(); it != files_.end();) {
    const bool owned =
        std::any_of(touched.begin(), touched.end(), [&](const std::string& d) { return under(it->first, d); });
    it = owned ? files_.erase(it) : std::next(it);
  }
  files_.insert(fresh.begin(), fresh.end());
  stages_[stage] = {digest, dirs};
  save_manifest();
  std::error_code ec;
  fs::remove_all(trash, ec);
  fs::remove_all(staging, ec);
}

void Store::remove_stage(const std::string& stage) {
  auto it = stages_.find(stage);
  if (it == stages_.end()) return;
  const auto dirs = it->second.dirs;
  stages_.erase(it);
  for (auto f = files_.begin(); f != files_.end();) {
    const bool owned = std::any_of(dirs.begin(), dirs.end(), [&](const std::string& d) { return under(f->first, d); });
    f = owned ? files_.erase(f) : std::next(f);
  }
  save_manifest();
  std::error_code ec;
  for (const auto& d : dirs) fs::remove_all(root_ / d, ec);
}

void Store::verify() const {
  for (const auto& [rel, e] : files_) {
    const fs::path p = root_ / rel;
    if (!fs::is_regular_file(p)) throw Error("store file missing: " + rel);
    if (fs::file_size(p) != e.size || hex32(crc32_file(p)) != e.crc32) throw Error("checksum mismatch: " + rel);
  }
}

std::string Store::read_text(const std::string& rel) const {
  std::ifstream in(root_ / rel, std::ios::binary);
  if (!in) throw Error("cannot read store file " + rel);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace precut::store
