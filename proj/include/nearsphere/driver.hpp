#pragma once

// Command layer shared by the CLI and the self-test: a run configuration, the
// six commands, and their artifacts (file name -> contents). Commands do not
// touch the file system except to read a corpus manifest; write_artifacts
// puts the results on disk.

#include "nearsphere/io.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nsph {

struct RunConfig {
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0: hardware concurrency
  bool svg_timestamp = false;
  std::optional<std::filesystem::path> corpus_manifest;
  std::optional<CorpusSpec> corpus_spec;
  PipelineConfig pipeline;
  AlexConfig alexandrov;
  CounterexampleConfig counterexample;
  std::vector<double> thetas{0.3, 0.2, 0.1};
  int plane_overlays = 4;            // overlay figures for the first entries
  std::vector<int> selftest_criteria;  // empty: all
};

/// Relative paths are resolved against base_dir (the config file's folder).
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json to_json(const RunConfig& c);

/// Raised for an empty or missing corpus; maps to the configuration exit code.
class EmptyCorpus : public SchemaError {
 public:
  EmptyCorpus() : SchemaError("empty corpus") {}
};

struct Artifacts {
  std::map<std::string, std::string> files;
  std::vector<std::string> failures;  // assertion names, first failure first
  std::string summary;

  int exit_code() const { return failures.empty() ? 0 : 1; }
};

std::vector<CorpusEntry> load_entries(const RunConfig& c);

/// Runs f(i) for i in [0, n) on up to `threads` workers; f must not share
/// mutable state. Exceptions are rethrown after all workers stop.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

Artifacts cmd_gen(const RunConfig& c);
Artifacts cmd_convexify(const RunConfig& c);
Artifacts cmd_alexandrov(const RunConfig& c);
Artifacts cmd_counterexample(const RunConfig& c);
Artifacts cmd_plane(const RunConfig& c);
Artifacts cmd_selftest(const RunConfig& c);

/// Dispatch by name; unknown names raise SchemaError.
Artifacts run_command(const std::string& command, const RunConfig& c);

void write_artifacts(const Artifacts& a, const std::filesystem::path& dir);

}  // namespace nsph
