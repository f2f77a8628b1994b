#pragma once

// Command implementations behind the sicvpr executable. Each run_* function
// reads its inputs, writes its outputs and throws sicvpr::Error subclasses on
// failure; tools/sicvpr.cpp maps those to exit codes.

#include "sicvpr/descriptor.hpp"
#include "sicvpr/metrics.hpp"
#include "sicvpr/music.hpp"
#include "sicvpr/seqmatch.hpp"
#include "sicvpr/sic.hpp"
#include "sicvpr/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sicvpr {

enum class Mode { kSic, kMusic, kSeqSlam, kArgmax };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

struct TechniqueInput {
  std::string id;
  std::filesystem::path path;
  bool distance = false;
};

// Parses "id=path" or "id=path:distance".
TechniqueInput parse_technique_spec(const std::string& spec);

struct RunConfig {
  std::vector<TechniqueInput> techniques;
  Mode mode = Mode::kMusic;
  SicParams sic;
  SeqParams seq;
  Index allowance = 0;
  std::optional<std::filesystem::path> gt;
  std::filesystem::path out = ".";
  bool stream = false;
  bool scale = true;
  ConfidenceSource confidence = ConfidenceSource::kTheta;

  void validate() const;
};

struct MatchOutput {
  std::vector<MatchDecision> decisions;
  std::vector<double> frame_ms;
  // Q x K theta table; only filled by batch SIC.
  std::vector<ConsistencyResult> sic_results;
  std::optional<EvalReport> report;
};

// Output files in config.out:
//   decisions.csv   query_index,technique_id,match_index,theta,confidence
//   run.txt         mode and parameters
//   timing.csv      query_index,ms per frame
//   selection.csv   query_index,technique_id (music)
//   theta_table.csv per query, K "ref_index:theta" cells (batch sic)
//   pr.csv, summary.txt, summary.csv when a ground truth is given
MatchOutput run_match(const RunConfig& config);

void write_decisions_csv(const std::vector<MatchDecision>& decisions,
                         const std::filesystem::path& path);
std::vector<MatchDecision> read_decisions_csv(const std::filesystem::path& path);
void write_selection_csv(const std::vector<MatchDecision>& decisions,
                         const std::filesystem::path& path);
void write_theta_table(const std::vector<ConsistencyResult>& results,
                       const std::filesystem::path& path);

struct EvalConfig {
  std::filesystem::path decisions;
  std::filesystem::path gt;
  Index allowance = 0;
  std::filesystem::path out = ".";
};

// Thresholds on the decisions' confidence column. Writes pr.csv, pr.svg,
// summary.txt, summary.csv and, for MuSIC output, selection.csv.
EvalReport run_eval(const EvalConfig& config);

struct BenchConfig {
  std::vector<Index> sizes{500, 1000, 2000, 5000, 10000, 20000};
  SicParams sic;
  SeqParams seq;
  // Timed frames per map size, after the history buffers are full.
  Index queries = 100;
  Index techniques = 4;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
};

struct BenchRow {
  std::string matcher;
  std::string stage;
  Index map_size = 0;
  double ms_per_frame = 0.0;
};

// Per-frame cost of the online matchers against map size. Matrix generation
// is excluded; normalizing and storing the incoming row is included.
std::vector<BenchRow> run_bench(const BenchConfig& config);

struct SynthCommand {
  SynthConfig config;
  std::filesystem::path out = ".";
  std::string format = "simm";
};

// Writes matrix.simm (or matrix.csv), gt.csv and config.txt.
SynthData run_synth(const SynthCommand& command);

struct DescribeConfig {
  std::filesystem::path queries;
  std::filesystem::path references;
  DescriptorParams params;
  std::filesystem::path out = "matrix.simm";
};

SimilarityMatrix run_describe(const DescribeConfig& config);

}  // namespace sicvpr
