#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhp/keyspace.hpp"
#include "hhp/stream.hpp"

namespace hhp {

// Configuration error (bad flag combination, unknown name, invalid shape).
// The CLI maps these to exit code 1; InputError maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { kGenerate, kRun, kEvaluate, kBounds, kBench };

// One flat knob bag shared by all subcommands; each command reads the slice
// it needs. Defaults mirror the shipped sketch dimensions (q=4, m=256,
// window 100K, per-algorithm m').
struct RunConfig {
  std::string input;
  std::string output;
  std::vector<std::string> algos;  // subset of {shp, maxcount, boyermoore,
                                   //            maxstable, exact}
  std::string key = "src";
  std::string value = "bytes";
  int k = 10;
  std::uint64_t window = 100000;
  int q = 4;
  int m = 256;
  int m_prime = 0;  // 0: per-algorithm default (maxcount 50, boyermoore 256)
  int gamma = 3;
  int thinning_gamma = 5;
  int estimator_gamma = 7;
  int L = 201;
  int r = 0;                 // bounds: recovery order, 0 means r = k
  std::uint64_t trials = 0;  // bounds: Monte-Carlo trials, 0 = analytic only
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> sweep_windows;  // evaluate: window-size sweep
  // generate
  std::uint64_t n_records = 100000;
  double zipf = 1.0;
  std::uint32_t background_keys = 10000;
  std::uint64_t bytes_per_record = 1000;
  std::vector<PlantedHitter> hitters;
  std::vector<PlantedScanner> scanners;
};

// Applies per-command algorithm defaults and validates the selection against
// the signal (set:* values pair with maxstable, scalar values with the
// counter sketches; evaluate needs the exact oracle). Throws ConfigError.
std::vector<std::string> resolve_algos(const RunConfig& cfg, Command cmd);

SignalSpec resolve_signal(const RunConfig& cfg);  // throws ConfigError

// Hash dimensions for one algorithm, applying the per-algorithm m' default.
HashConfig hash_config_for(const RunConfig& cfg, const std::string& algo);

// Per-window, per-algorithm scores at the configured k.
struct MetricsRow {
  std::uint64_t window = 0;
  std::string algo;
  int k = 0;
  double ident_rate = 0.0;
  bool exact = false;
  double mean_est_accuracy = 0.0;
  std::size_t sketch_bytes = 0;
  std::size_t oracle_bytes = 0;
};

// Mean over windows of the identification metrics at one query depth.
struct PerKAggregate {
  std::string algo;
  int k = 0;
  double ident_rate = 0.0;
  double exact_rate = 0.0;
  double mean_est_accuracy = 0.0;
};

struct EvaluateResult {
  std::vector<MetricsRow> rows;       // windows x algorithms, configured k
  std::vector<PerKAggregate> per_k;   // algorithms x k'=1..k
  std::uint64_t windows = 0;
  std::uint64_t skipped_records = 0;  // set:ttl signals on ttl-less records
};

EvaluateResult evaluate_trace(std::span<const FlowRecord> records,
                              const RunConfig& cfg);

// Streams one JSON report line per (window, algorithm, entry) to out.
// Returns the number of windows processed.
std::uint64_t run_trace(std::span<const FlowRecord> records,
                        const RunConfig& cfg, std::ostream& out);

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace hhp
