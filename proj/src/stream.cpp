#include "hhp/stream.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "hhp/rng.hpp"

namespace hhp {

namespace {

std::vector<std::string_view> split_fields(const std::string& line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.emplace_back(line.data() + start, line.size() - start);
      break;
    }
    out.emplace_back(line.data() + start, pos - start);
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_num(std::string_view f, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size())
    throw InputError(std::string("bad ") + what + ": '" + std::string(f) +
                     "'");
  return v;
}

template <typename T>
void append_num(std::string& s, T v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  s.append(buf, ptr);
}

}  // namespace

Key ip_from_string(const std::string& s) {
  if (s.find('.') == std::string::npos)
    return parse_num<std::uint32_t>(std::string_view(s), "address");
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t pos = s.find('.', start);
    if (pos == std::string::npos) throw InputError("bad address: '" + s + "'");
    parts.emplace_back(s.data() + start, pos - start);
    start = pos + 1;
  }
  parts.emplace_back(s.data() + start, s.size() - start);
  Key ip = 0;
  for (const auto& p : parts) {
    auto b = parse_num<std::uint32_t>(p, "address octet");
    if (b > 255) throw InputError("bad address: '" + s + "'");
    ip = (ip << 8) | b;
  }
  return ip;
}

std::string ip_to_string(Key ip) {
  std::string s;
  for (int i = 3; i >= 0; --i) {
    append_num(s, (ip >> (8 * i)) & 0xFF);
    if (i) s.push_back('.');
  }
  return s;
}

FlowRecord parse_record(const std::string& line) {
  static const char* kFields[9] = {"ts",    "src",     "dst",
                                   "sport", "dport",   "proto",
                                   "packets", "bytes", "ttl"};
  std::vector<std::string_view> f = split_fields(line);
  // Field errors carry the 1-based field position and name.
  auto where = [&](std::size_t i) {
    return "field " + std::to_string(i + 1) + " (" + kFields[i] + ")";
  };
  FlowRecord r;
  std::size_t have = std::min<std::size_t>(f.size(), 9);
  for (std::size_t i = 0; i < have; ++i) {
    try {
      switch (i) {
        case 0: r.ts = parse_num<double>(f[0], "ts"); break;
        case 1: r.src = ip_from_string(std::string(f[1])); break;
        case 2: r.dst = ip_from_string(std::string(f[2])); break;
        case 3: r.sport = parse_num<std::uint16_t>(f[3], "sport"); break;
        case 4: r.dport = parse_num<std::uint16_t>(f[4], "dport"); break;
        case 5: r.proto = parse_num<std::uint8_t>(f[5], "proto"); break;
        case 6: r.packets = parse_num<std::uint64_t>(f[6], "packets"); break;
        case 7: r.bytes = parse_num<std::uint64_t>(f[7], "bytes"); break;
        case 8: {
          auto ttl = parse_num<std::uint32_t>(f[8], "ttl");
          if (ttl > 255) throw InputError("out of range: " + std::string(f[8]));
          r.ttl = std::int16_t(ttl);
          break;
        }
      }
    } catch (const InputError& e) {
      throw InputError(where(i) + ": " + e.what());
    }
  }
  if (f.size() != 8 && f.size() != 9)
    throw InputError("expected 8 or 9 fields, got " +
                     std::to_string(f.size()));
  if (r.bytes > 0 && r.packets < 1)
    throw InputError(where(6) + ": zero packets with nonzero bytes");
  return r;
}

std::string format_record(const FlowRecord& r) {
  std::string s;
  // to_chars emits the shortest representation that parses back to the same
  // double, keeping parse(format(r)) an identity.
  append_num(s, r.ts);
  s.push_back(',');
  s += ip_to_string(r.src);
  s.push_back(',');
  s += ip_to_string(r.dst);
  s.push_back(',');
  append_num(s, r.sport);
  s.push_back(',');
  append_num(s, r.dport);
  s.push_back(',');
  append_num(s, std::uint32_t(r.proto));
  s.push_back(',');
  append_num(s, r.packets);
  s.push_back(',');
  append_num(s, r.bytes);
  if (r.ttl >= 0) {
    s.push_back(',');
    append_num(s, std::uint32_t(r.ttl));
  }
  return s;
}

std::optional<KeySpec> key_spec_from_name(const std::string& name) {
  if (name == "src") return KeySpec::kSrc;
  if (name == "dst") return KeySpec::kDst;
  if (name == "src_dst_pair") return KeySpec::kSrcDstPair;
  return std::nullopt;
}

std::optional<ValueSpec> value_spec_from_name(const std::string& name) {
  if (name == "bytes") return ValueSpec::kBytes;
  if (name == "packets") return ValueSpec::kPackets;
  if (name == "occurrences") return ValueSpec::kOccurrences;
  if (name == "set:dst") return ValueSpec::kSetDst;
  if (name == "set:dport") return ValueSpec::kSetDport;
  if (name == "set:ttl") return ValueSpec::kSetTtl;
  return std::nullopt;
}

const char* key_spec_name(KeySpec k) {
  switch (k) {
    case KeySpec::kSrc: return "src";
    case KeySpec::kDst: return "dst";
    case KeySpec::kSrcDstPair: return "src_dst_pair";
  }
  return "src";
}

const char* value_spec_name(ValueSpec v) {
  switch (v) {
    case ValueSpec::kBytes: return "bytes";
    case ValueSpec::kPackets: return "packets";
    case ValueSpec::kOccurrences: return "occurrences";
    case ValueSpec::kSetDst: return "set:dst";
    case ValueSpec::kSetDport: return "set:dport";
    case ValueSpec::kSetTtl: return "set:ttl";
  }
  return "bytes";
}

std::optional<Extracted> extract(const FlowRecord& r, const SignalSpec& spec,
                                 const PermutationParams& params) {
  static const PermutationParams kFold = make_params(kFoldGamma);
  Extracted e;
  switch (spec.key) {
    case KeySpec::kSrc: e.key = r.src; break;
    case KeySpec::kDst: e.key = r.dst; break;
    case KeySpec::kSrcDstPair:
      e.key = permute(r.src, params) ^ permute(r.dst, kFold);
      break;
  }
  switch (spec.value) {
    case ValueSpec::kBytes: e.magnitude = r.bytes; break;
    case ValueSpec::kPackets: e.magnitude = r.packets; break;
    case ValueSpec::kOccurrences: e.magnitude = 1; break;
    case ValueSpec::kSetDst: e.element = r.dst; break;
    case ValueSpec::kSetDport: e.element = r.dport; break;
    case ValueSpec::kSetTtl:
      if (r.ttl < 0) return std::nullopt;
      e.element = std::uint32_t(r.ttl);
      break;
  }
  return e;
}

std::vector<FlowRecord> generate(const SyntheticConfig& cfg) {
  double share_sum = 0.0;
  for (const auto& h : cfg.hitters) {
    if (h.share <= 0.0) throw std::invalid_argument("hitter share must be > 0");
    share_sum += h.share;
  }
  if (share_sum >= 1.0)
    throw std::invalid_argument("planted shares must sum below 1");
  if (cfg.background_keys < 1)
    throw std::invalid_argument("need at least one background key");

  // Slot plan: each planted hitter gets an exact record count, each scanner
  // one record per distinct destination, the rest is Zipf background.
  const std::uint64_t n = cfg.n_records;
  std::uint64_t planted = 0;
  std::vector<std::uint64_t> hitter_records(cfg.hitters.size());
  for (std::size_t i = 0; i < cfg.hitters.size(); ++i) {
    hitter_records[i] = std::uint64_t(std::llround(cfg.hitters[i].share * n));
    planted += hitter_records[i];
  }
  for (const auto& sc : cfg.scanners) planted += sc.set_size;
  if (planted > n)
    throw std::invalid_argument("planted records exceed the stream length");

  // Slot codes: 0..H-1 hitters, H..H+S-1 scanners, H+S background.
  const std::uint32_t H = std::uint32_t(cfg.hitters.size());
  const std::uint32_t S = std::uint32_t(cfg.scanners.size());
  std::vector<std::uint32_t> slots;
  slots.reserve(n);
  for (std::uint32_t i = 0; i < H; ++i)
    slots.insert(slots.end(), hitter_records[i], i);
  for (std::uint32_t i = 0; i < S; ++i)
    slots.insert(slots.end(), cfg.scanners[i].set_size, H + i);
  slots.insert(slots.end(), n - planted, H + S);

  SplitMix64 rng(mix64(cfg.seed));
  for (std::uint64_t i = n; i > 1; --i)  // Fisher-Yates
    std::swap(slots[i - 1], slots[rng.bounded(i)]);

  // Background population: distinct keys with Zipf weights.
  std::vector<Key> bg_keys(cfg.background_keys);
  {
    std::unordered_set<Key> seen;
    for (auto& k : bg_keys) {
      do { k = rng.next_u32(); } while (!seen.insert(k).second);
    }
  }
  std::vector<double> cum(cfg.background_keys);
  {
    double acc = 0.0;
    for (std::uint32_t j = 0; j < cfg.background_keys; ++j) {
      acc += 1.0 / std::pow(double(j + 1), cfg.zipf_exponent);
      cum[j] = acc;
    }
    for (auto& c : cum) c /= acc;
  }

  std::vector<std::uint32_t> scanner_progress(S, 0);
  std::vector<FlowRecord> out;
  out.reserve(n);
  static const std::uint16_t kPorts[4] = {80, 443, 53, 8080};
  for (std::uint64_t i = 0; i < n; ++i) {
    FlowRecord r;
    r.ts = 0.001 * double(i);
    r.proto = 6;
    r.ttl = 64;
    r.packets = 1;
    r.bytes = cfg.bytes_per_record;
    r.sport = std::uint16_t(1024 + rng.bounded(60000));
    r.dport = kPorts[rng.bounded(4)];
    std::uint32_t slot = slots[i];
    if (slot < H) {
      r.src = cfg.hitters[slot].key;
      r.dst = Key(mix64(std::uint64_t(r.src) ^ 0xd57ULL));
    } else if (slot < H + S) {
      const auto& sc = cfg.scanners[slot - H];
      r.src = sc.key;
      // Sequential offsets from a per-scanner base: exactly set_size
      // distinct destinations.
      r.dst = Key(mix64(std::uint64_t(sc.key))) + scanner_progress[slot - H]++;
    } else {
      std::uint32_t j = std::uint32_t(
          std::lower_bound(cum.begin(), cum.end(), rng.uniform()) -
          cum.begin());
      if (j >= cfg.background_keys) j = cfg.background_keys - 1;
      r.src = bg_keys[j];
      // Background sources touch at most 3 distinct destinations.
      r.dst = Key(mix64(std::uint64_t(r.src) ^ rng.bounded(3)));
    }
    out.push_back(r);
  }
  return out;
}

std::vector<WindowView> make_windows(std::span<const FlowRecord> stream,
                                     std::uint64_t window_size) {
  if (window_size < 1) throw std::invalid_argument("window size must be >= 1");
  std::vector<WindowView> out;
  std::uint64_t index = 0;
  for (std::size_t off = 0; off < stream.size(); off += window_size) {
    std::size_t len = std::min<std::size_t>(window_size, stream.size() - off);
    out.push_back({index++, len < window_size, stream.subspan(off, len)});
  }
  return out;
}

std::vector<FlowRecord> read_trace(const std::string& path) {
  std::vector<FlowRecord> out;
  std::uint64_t lineno = 0;
  auto feed = [&out, &lineno, &path](const std::string& line) {
    ++lineno;
    if (line.empty()) return;
    try {
      out.push_back(parse_record(line));
    } catch (const InputError& e) {
      throw InputError(path + ": line " + std::to_string(lineno) + ": " +
                       e.what());
    }
  };
  if (path.size() > 3 && path.ends_with(".gz")) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw InputError("cannot open '" + path + "'");
    char buf[4096];
    std::string line;
    while (gzgets(gz, buf, sizeof(buf))) {
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        feed(line);
        line.clear();
      }
    }
    feed(line);
    gzclose(gz);
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) feed(line);
  }
  return out;
}

void write_trace(const std::string& path,
                 const std::vector<FlowRecord>& records) {
  if (path.size() > 3 && path.ends_with(".gz")) {
    gzFile gz = gzopen(path.c_str(), "wb");
    if (!gz) throw InputError("cannot open '" + path + "' for write");
    for (const auto& r : records) {
      std::string line = format_record(r);
      line.push_back('\n');
      if (gzwrite(gz, line.data(), unsigned(line.size())) <= 0) {
        gzclose(gz);
        throw InputError("short write to '" + path + "'");
      }
    }
    gzclose(gz);
  } else {
    std::ofstream outf(path);
    if (!outf) throw InputError("cannot open '" + path + "' for write");
    for (const auto& r : records) outf << format_record(r) << '\n';
    if (!outf) throw InputError("short write to '" + path + "'");
  }
}

}  // namespace hhp
