#pragma once

// Stage orchestration over a Store: ingest -> mmp -> network -> layout ->
// render, plus frameworks. Stages are checksum-gated and restartable.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "precut/classes.hpp"
#include "precut/ingest.hpp"
#include "precut/netbuild.hpp"
#include "precut/store.hpp"
#include "precut/tiler.hpp"

namespace precut::pipeline {

struct Config {
  std::filesystem::path compounds;
  std::filesystem::path activities;
  std::filesystem::path store;
  ingest::RuleOfFive rule_of_five;
  int max_value_heavy = 10;
  int ring_min_compounds = 10;
  net::LayoutParams layout;
  std::uint64_t seed = 1;
  int z_max = tiler::kDefaultZMax;
  // all, center, ring, or a target class name (gpcr, kinase, ...).
  std::vector<std::string> networks{"all", "center", "gpcr", "kinase", "ring"};
  tiler::RenderStyle style;
};

// Every problem found, empty when valid.
std::vector<std::string> validate(const Config& cfg);
// Throws Error listing every validation problem at once.
void check(const Config& cfg);

enum class Outcome { Ran, UpToDate };

Outcome run_ingest(const Config& cfg);
Outcome run_mmp(const Config& cfg);
Outcome run_network(const Config& cfg);
Outcome run_frameworks(const Config& cfg);
Outcome run_layout(const Config& cfg);
Outcome run_render(const Config& cfg);
// All stages in order.
void run_all(const Config& cfg, bool frameworks = true);

struct NetworkStats {
  std::string name;
  int nodes = 0;
  int edges = 0;
  int mst_edges = -1;  // -1 before layout
  int components = 0;
  int z_max = -1;      // -1 before render
  long tiles = 0;
};

struct StoreStats {
  int compounds = 0;
  int activities = 0;
  int fragment_records = 0;
  int mmps = 0;
  std::vector<std::string> stages;
  std::vector<NetworkStats> networks;
};

StoreStats stats(const std::filesystem::path& store);
std::string stats_json(const StoreStats& s);
std::string stats_text(const StoreStats& s);

// Store-relative paths.
std::string graph_dir(const std::string& network);
std::string layout_dir(const std::string& network);
std::string tile_dir(const std::string& network);
// Networks with a committed graph, sorted by name.
std::vector<std::string> store_networks(const store::Store& s);

}  // namespace precut::pipeline
