#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hhp/keyspace.hpp"

namespace hhp {

enum class Unit : std::uint8_t { kBytes, kPackets, kOccurrences };

inline const char* unit_name(Unit u) {
  switch (u) {
    case Unit::kBytes: return "bytes";
    case Unit::kPackets: return "packets";
    case Unit::kOccurrences: return "occurrences";
  }
  return "bytes";
}

struct Magnitude {
  std::uint64_t value = 0;
  Unit unit = Unit::kBytes;
};

struct ReportEntry {
  Key key = 0;
  double estimate = 0.0;
};

// Ranked query result. Entries are sorted by estimate descending and there
// are at most k of them; duplicates are possible for max-count (exclusion
// zeroes one cell per row per round, so a hitter spanning several cells of
// one bin can resurface) and are surfaced, not filtered.
struct HeavyHitterReport {
  std::string algo;
  std::uint64_t window = 0;
  std::string unit = "bytes";
  bool zero_signal = false;     // no updates seen in the window
  bool overflow_fault = false;  // an accumulator would have wrapped
  bool approximate = false;     // produced via a heuristic (candidate merge)
  bool folded_keys = false;     // keys are xor-folded pairs, not addresses
  std::vector<ReportEntry> entries;
};

}  // namespace hhp
