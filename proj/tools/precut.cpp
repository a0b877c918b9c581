#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "precut/error.hpp"
#include "precut/pipeline.hpp"
#include "precut/server.hpp"

using namespace precut;

namespace {

// CLASS=#rrggbb
void apply_palette(const std::vector<std::string>& entries, Palette& palette, std::vector<std::string>& errors) {
  for (const auto& e : entries) {
    const auto eq = e.find('=');
    const auto cls = eq == std::string::npos ? std::nullopt : parse_class(e.substr(0, eq));
    unsigned r, g, b;
    if (!cls || std::sscanf(e.c_str() + eq + 1, "#%2x%2x%2x", &r, &g, &b) != 3 || e.size() != eq + 8) {
      errors.push_back("bad palette entry '" + e + "' (expected CLASS=#rrggbb)");
      continue;
    }
    palette[static_cast<int>(*cls)] = Rgba{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b), 255};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"precut: pre-rendered matched molecular pair networks"};
  app.set_config("--config", "", "TOML-style config file; keys are the long option names");
  app.require_subcommand(1);
  app.fallthrough();

  pipeline::Config cfg;
  std::string log_level = "info";
  std::vector<std::string> palette;
  app.add_option("--store", cfg.store, "Store directory")->envname("PRECUT_STORE");
  app.add_option("--compounds", cfg.compounds, "compounds.tsv (compound_id, smiles[, logp])");
  app.add_option("--activities", cfg.activities, "activities.tsv");
  app.add_option("--seed", cfg.seed, "Layout seed");
  app.add_option("--zmax", cfg.z_max, "Highest zoom level");
  app.add_option("--max-value-heavy", cfg.max_value_heavy, "Largest value fragment, heavy atoms");
  app.add_option("--ring-min-compounds", cfg.ring_min_compounds, "Ring fragments need this many compounds");
  app.add_option("--networks", cfg.networks, "Network variants: all center ring or a target class")->delimiter(',');
  app.add_option("--max-mw", cfg.rule_of_five.max_molecular_weight);
  app.add_option("--max-hbd", cfg.rule_of_five.max_hbd);
  app.add_option("--max-hba", cfg.rule_of_five.max_hba);
  app.add_option("--max-logp", cfg.rule_of_five.max_logp);
  app.add_option("--layout-rest-length", cfg.layout.rest_length);
  app.add_option("--layout-cutoff", cfg.layout.cutoff, "Repulsion cutoff in rest lengths");
  app.add_option("--layout-iterations", cfg.layout.iterations);
  app.add_option("--layout-attraction", cfg.layout.attraction);
  app.add_option("--layout-repulsion", cfg.layout.repulsion);
  app.add_option("--layout-step", cfg.layout.step);
  app.add_option("--node-radius", cfg.style.node_radius_px, "Node radius in px per zoom level")->delimiter(',');
  app.add_option("--edge-width", cfg.style.edge_width_px, "Edge width in px per zoom level")->delimiter(',');
  app.add_option("--palette", palette, "Colour override CLASS=#rrggbb")->delimiter(',');
  app.add_option("--log-level", log_level)->check(CLI::IsMember({"debug", "info", "warn", "error"}));

  auto* ingest = app.add_subcommand("ingest", "Load, filter and annotate the corpus");
  auto* mmp = app.add_subcommand("mmp", "Fragment index and matched molecular pairs");
  auto* network = app.add_subcommand("network", "Build the network variants");
  auto* frameworks = app.add_subcommand("frameworks", "Framework hierarchy network");
  auto* layout = app.add_subcommand("layout", "Force-directed layout of every network");
  auto* render = app.add_subcommand("render", "Tile pyramids");
  auto* run = app.add_subcommand("run", "Every stage in order");
  bool no_frameworks = false;
  run->add_flag("--no-frameworks", no_frameworks, "Skip the frameworks stage");
  auto* stats = app.add_subcommand("stats", "Counts per network");
  std::string format = "text";
  stats->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  auto* serve = app.add_subcommand("serve", "HTTP API over a rendered store");
  server::ServeOptions serve_options;
  serve->add_option("--bind", serve_options.bind)->envname("PRECUT_BIND");
  serve->add_option("--port", serve_options.port)->envname("PRECUT_PORT")->check(CLI::Range(1, 65535));

  CLI11_PARSE(app, argc, argv);

  auto logger = spdlog::stderr_color_mt("precut");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    std::vector<std::string> errors;
    apply_palette(palette, cfg.style.palette, errors);
    for (auto& e : pipeline::validate(cfg)) errors.push_back(std::move(e));
    if (!errors.empty()) {
      std::string msg = "invalid configuration:";
      for (const auto& e : errors) msg += "\n  - " + e;
      throw Error(msg);
    }
    if (*ingest) pipeline::run_ingest(cfg);
    if (*mmp) pipeline::run_mmp(cfg);
    if (*network) pipeline::run_network(cfg);
    if (*frameworks) pipeline::run_frameworks(cfg);
    if (*layout) pipeline::run_layout(cfg);
    if (*render) pipeline::run_render(cfg);
    if (*run) pipeline::run_all(cfg, !no_frameworks);
    if (*stats) {
      const auto s = pipeline::stats(cfg.store);
      std::cout << (format == "json" ? pipeline::stats_json(s) : pipeline::stats_text(s));
    }
    if (*serve) {
      const server::Api api(cfg.store);
      server::serve(api, serve_options);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
