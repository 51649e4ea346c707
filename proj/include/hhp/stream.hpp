#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hhp/keyspace.hpp"

namespace hhp {

// Input error (malformed CSV, unreadable file). Distinct from configuration
// errors so the CLI can map them to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One flow record:
//   ts,src,dst,sport,dport,proto,packets,bytes[,ttl]
// Addresses are dotted quads, big-endian when folded to 32 bits
// (a.b.c.d -> a*2^24 + b*2^16 + c*2^8 + d).
struct FlowRecord {
  double ts = 0.0;
  Key src = 0;
  Key dst = 0;
  std::uint16_t sport = 0;
  std::uint16_t dport = 0;
  std::uint8_t proto = 0;
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
  std::int16_t ttl = -1;  // -1: column absent
};

Key ip_from_string(const std::string& s);
std::string ip_to_string(Key ip);

FlowRecord parse_record(const std::string& line);
std::string format_record(const FlowRecord& r);

enum class KeySpec { kSrc, kDst, kSrcDstPair };
enum class ValueSpec {
  kBytes,
  kPackets,
  kOccurrences,
  kSetDst,
  kSetDport,
  kSetTtl,
};

struct SignalSpec {
  KeySpec key = KeySpec::kSrc;
  ValueSpec value = ValueSpec::kBytes;
};

inline bool is_set_signal(ValueSpec v) {
  return v == ValueSpec::kSetDst || v == ValueSpec::kSetDport ||
         v == ValueSpec::kSetTtl;
}

std::optional<KeySpec> key_spec_from_name(const std::string& name);
std::optional<ValueSpec> value_spec_from_name(const std::string& name);
const char* key_spec_name(KeySpec k);
const char* value_spec_name(ValueSpec v);

// Permutation power used to fold (src, dst) pairs into 32 bits as
// permute(src) XOR permute_fold(dst). The fold is not invertible; reports
// over pair keys are flagged.
inline constexpr std::uint32_t kFoldGamma = 11;

struct Extracted {
  Key key = 0;
  std::uint64_t magnitude = 0;  // scalar signals
  std::uint32_t element = 0;    // set signals
};

// Pulls (key, update) out of a record. Empty when a set:ttl signal meets a
// record without a ttl column; callers skip the record and count it.
std::optional<Extracted> extract(const FlowRecord& r, const SignalSpec& spec,
                                 const PermutationParams& params);

// Synthetic trace: Zipf-weighted background keys plus planted hitters that
// receive an exact share of the records (and, records being constant-size,
// of the bytes). Scanners emit one record per distinct destination.
struct PlantedHitter {
  Key key = 0;
  double share = 0.0;  // fraction of total records/bytes
};

struct PlantedScanner {
  Key key = 0;
  std::uint32_t set_size = 0;  // distinct destinations contacted
};

struct SyntheticConfig {
  std::uint64_t n_records = 100000;
  double zipf_exponent = 1.0;
  std::uint32_t background_keys = 10000;
  std::vector<PlantedHitter> hitters;
  std::vector<PlantedScanner> scanners;
  std::uint64_t seed = 1;
  std::uint64_t bytes_per_record = 1000;
};

std::vector<FlowRecord> generate(const SyntheticConfig& cfg);

// Non-overlapping batches in stream order; the last batch may be partial.
struct WindowView {
  std::uint64_t index = 0;
  bool partial = false;
  std::span<const FlowRecord> records;
};

std::vector<WindowView> make_windows(std::span<const FlowRecord> stream,
                                     std::uint64_t window_size);

// CSV file I/O; paths ending in .gz are read/written through zlib.
std::vector<FlowRecord> read_trace(const std::string& path);
void write_trace(const std::string& path,
                 const std::vector<FlowRecord>& records);

}  // namespace hhp
