#pragma once

// JSON persistence. Field files carry coefficients in ascending degree, then
// ascending order m; for n = 2 order m = -l is the sine and m = +l the cosine.
// Readers are strict: unknown keys and wrong types raise SchemaError.

#include "nearsphere/alexandrov.hpp"
#include "nearsphere/corpus.hpp"
#include "nearsphere/counterex.hpp"
#include "nearsphere/pipeline.hpp"
#include "nearsphere/planar.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsph {

using Json = nlohmann::ordered_json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checked access to a JSON object. Each get marks its key as used; finish()
/// rejects anything left over.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where);
  bool has(const std::string& key) const { return j_.contains(key); }
  const Json& raw(const std::string& key);
  double num(const std::string& key);
  double num(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::uint64_t u64(const std::string& key, std::uint64_t fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string str(const std::string& key);
  std::string str(const std::string& key, const std::string& fallback);
  std::vector<double> nums(const std::string& key);
  void finish() const;
  const std::string& where() const { return where_; }

 private:
  const Json& j_;
  std::string where_;
  std::vector<std::string> used_;
};

std::string dump(const Json& j);  // two-space indent, trailing newline
Json read_json_file(const std::filesystem::path& p);
std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

Json field_to_json(const SpectralCoeffs& c);
/// Accepts "repr": "spectral" or "grid" (values at the native grid nodes).
SpectralCoeffs field_from_json(const Json& j);
Json set_to_json(const NearlySphericalSet& E);
NearlySphericalSet set_from_json(const Json& j);
Json polygon_to_json(const Polygon& P);
Polygon polygon_from_json(const Json& j);

Json to_json(const CorpusSpec& s);
CorpusSpec corpus_spec_from_json(const Json& j);
Json to_json(const MinimizeConfig& c);
MinimizeConfig minimize_config_from_json(const Json& j, MinimizeConfig base = {});
Json to_json(const PipelineConfig& c);
PipelineConfig pipeline_config_from_json(const Json& j);
Json to_json(const CounterexampleConfig& c);
CounterexampleConfig counterexample_config_from_json(const Json& j, CounterexampleConfig base = {});
Json to_json(const AlexConfig& c);
AlexConfig alex_config_from_json(const Json& j);

Json to_json(const CNorms& n);
Json to_json(const StabilityReport& r);
Json to_json(const PipelineResult& r);  // everything but the sets themselves
Json to_json(const AlexReport& r);
Json to_json(const PlaneReport& r);
Json to_json(const NormBrackets& b);
Json to_json(const SharpnessRow& r);
Json to_json(const SharpnessReport& r);

Json entry_to_json(const CorpusEntry& e);
CorpusEntry entry_from_json(const Json& j);

/// manifest.json and one <id>.json per entry, as file name -> contents.
std::map<std::string, std::string> corpus_files(const CorpusSpec& spec, const std::vector<CorpusEntry>& entries);
/// Writes <dir>/manifest.json and one <id>.json per entry.
void save_corpus(const std::filesystem::path& dir, const CorpusSpec& spec, const std::vector<CorpusEntry>& entries);

struct LoadedCorpus {
  CorpusSpec spec;
  std::vector<CorpusEntry> entries;
};
/// Reads a manifest and its member files (paths relative to the manifest).
LoadedCorpus load_corpus(const std::filesystem::path& manifest);

}  // namespace nsph
