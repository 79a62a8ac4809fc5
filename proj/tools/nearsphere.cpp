// nearsphere <command> [--config FILE] [--out DIR]
//
// Exit status: 0 when every assertion of the command holds, 1 when one fails
// (the first is named on stderr), 2 for configuration problems.

#include "nearsphere/driver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for quantitative isoperimetry and Alexandrov stability near the ball"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen", "generate a corpus from config.corpus.spec"},
      {"convexify", "construct F for every set of the corpus and check the stability inequality"},
      {"alexandrov", "mean-curvature stability reports for every set of the corpus"},
      {"counterexample", "sharpness experiment on E_theta"},
      {"plane", "planar hull inequalities for a polygon corpus"},
      {"selftest", "run the acceptance criteria"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "output directory (overrides NSPH_OUT_DIR and the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  nsph::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      const fs::path p(config_path);
      cfg = nsph::run_config_from_json(nsph::read_json_file(p), p.parent_path());
    }
    if (const char* env = std::getenv("NSPH_OUT_DIR"); env && *env) cfg.output_dir = env;
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    const nsph::Artifacts a = nsph::run_command(command, cfg);
    nsph::write_artifacts(a, cfg.output_dir);
    nsph::write_text_file(cfg.output_dir / (command + "_config.json"), nsph::dump(nsph::to_json(cfg)));
    std::cout << a.summary << "\n";
    for (const auto& [name, text] : a.files) std::cout << "  wrote " << (cfg.output_dir / name).generic_string() << "\n";
    if (!a.failures.empty()) std::cerr << "assertion failed: " << a.failures.front() << "\n";
    return a.exit_code();
  } catch (const nsph::SchemaError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
