#include "hhp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hhp/bounds.hpp"
#include "hhp/oracle.hpp"
#include "hhp/report.hpp"
#include "hhp/rng.hpp"
#include "hhp/sketch_boyermoore.hpp"
#include "hhp/sketch_maxcount.hpp"
#include "hhp/sketch_maxstable.hpp"
#include "hhp/sketch_shp.hpp"

namespace hhp {

namespace {

const std::set<std::string> kKnownAlgos = {"shp", "maxcount", "boyermoore",
                                           "maxstable", "exact"};

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string unit_for(ValueSpec v) {
  switch (v) {
    case ValueSpec::kBytes: return "bytes";
    case ValueSpec::kPackets: return "packets";
    case ValueSpec::kOccurrences: return "occurrences";
    default: return "elements";
  }
}

// Element source for set signals ("set:dst" -> "dst").
std::string element_tag(ValueSpec v) {
  std::string name = value_spec_name(v);
  return name.substr(name.find(':') + 1);
}

}  // namespace

SignalSpec resolve_signal(const RunConfig& cfg) {
  auto k = key_spec_from_name(cfg.key);
  if (!k) throw ConfigError("unknown key spec '" + cfg.key + "'");
  auto v = value_spec_from_name(cfg.value);
  if (!v) throw ConfigError("unknown value spec '" + cfg.value + "'");
  return {*k, *v};
}

std::vector<std::string> resolve_algos(const RunConfig& cfg, Command cmd) {
  SignalSpec spec = resolve_signal(cfg);
  bool set_signal = is_set_signal(spec.value);

  std::vector<std::string> algos;
  if (cfg.algos.empty()) {
    if (set_signal)
      algos = {"maxstable"};
    else
      algos = {"shp", "maxcount", "boyermoore"};
    if (cmd == Command::kEvaluate) algos.push_back("exact");
  } else {
    for (const auto& a : cfg.algos) {
      if (!kKnownAlgos.count(a)) throw ConfigError("unknown algorithm '" + a + "'");
      if (std::find(algos.begin(), algos.end(), a) == algos.end())
        algos.push_back(a);
    }
  }

  for (const auto& a : algos) {
    if (a == "maxstable" && !set_signal)
      throw ConfigError("maxstable needs a set:* value spec");
    if ((a == "shp" || a == "maxcount" || a == "boyermoore") && set_signal)
      throw ConfigError("'" + a + "' needs a scalar value spec");
  }
  if (cmd == Command::kEvaluate &&
      std::find(algos.begin(), algos.end(), "exact") == algos.end())
    throw ConfigError("evaluate needs the 'exact' oracle in the algorithms");

  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  if (cfg.q < 1 || cfg.q > 4) throw ConfigError("q must be in 1..4");
  if (cfg.m < 1) throw ConfigError("m must be >= 1");
  if (cfg.m_prime < 0) throw ConfigError("m' must be >= 1");
  if (cfg.gamma < 1 || cfg.thinning_gamma < 1 || cfg.estimator_gamma < 1)
    throw ConfigError("permutation powers must be >= 1");
  if (cfg.L < 1 || cfg.L % 2 == 0) throw ConfigError("L must be odd");
  if (cfg.window < 1) throw ConfigError("window must be >= 1");
  for (auto w : cfg.sweep_windows)
    if (w < 1) throw ConfigError("sweep window sizes must be >= 1");
  for (const auto& a : algos) {
    if ((a == "shp" || a == "maxcount" || a == "maxstable") && cfg.m != 256)
      throw ConfigError("'" + a + "' indexes bins by octet value; m must be 256");
    if (a == "maxcount" && cfg.thinning_gamma == cfg.gamma)
      throw ConfigError("maxcount needs a thinning power distinct from gamma");
    if (a == "boyermoore") {
      if (cfg.k > cfg.m)
        throw ConfigError("boyermoore reports at most one key per substream; k must be <= m");
      if (cfg.thinning_gamma == cfg.estimator_gamma ||
          cfg.thinning_gamma == cfg.gamma || cfg.estimator_gamma == cfg.gamma)
        throw ConfigError(
            "boyermoore needs distinct permutation, thinning, and estimator powers");
    }
  }
  return algos;
}

HashConfig hash_config_for(const RunConfig& cfg, const std::string& algo) {
  HashConfig h;
  h.q = std::uint32_t(cfg.q);
  h.m = std::uint32_t(cfg.m);
  h.m_prime = cfg.m_prime > 0 ? std::uint32_t(cfg.m_prime)
                              : (algo == "boyermoore" ? 256u : 50u);
  h.gamma = std::uint32_t(cfg.gamma);
  h.thinning_gamma = std::uint32_t(cfg.thinning_gamma);
  h.estimator_gamma = std::uint32_t(cfg.estimator_gamma);
  return h;
}

namespace {

// Everything one window needs: the requested sketches plus (optionally) the
// exact oracle, fed record by record in stream order.
struct WindowState {
  std::optional<ShpSketch> shp;
  std::optional<MaxCountSketch> maxcount;
  std::optional<BoyerMooreSketch> boyermoore;
  std::optional<MaxStableSketch> maxstable;
  std::optional<GroundTruth> truth;
  std::uint64_t skipped = 0;

  WindowState(const RunConfig& cfg, const std::vector<std::string>& algos,
              const SignalSpec& spec, const PermutationParams& params) {
    for (const auto& a : algos) {
      if (a == "shp") shp.emplace(hash_config_for(cfg, a), params);
      else if (a == "maxcount") maxcount.emplace(hash_config_for(cfg, a), params);
      else if (a == "boyermoore") boyermoore.emplace(hash_config_for(cfg, a), params);
      else if (a == "maxstable")
        maxstable.emplace(hash_config_for(cfg, a), params,
                          std::uint32_t(cfg.L), mix64(cfg.seed));
      else if (a == "exact")
        truth.emplace(is_set_signal(spec.value) ? GroundTruth::Mode::kDistinct
                                                : GroundTruth::Mode::kScalar);
    }
  }

  void feed(std::span<const FlowRecord> records, const SignalSpec& spec,
            const PermutationParams& params) {
    for (const auto& r : records) {
      auto e = extract(r, spec, params);
      if (!e) {
        ++skipped;
        continue;
      }
      if (shp) shp->update(e->key, e->magnitude);
      if (maxcount) maxcount->update(e->key, e->magnitude);
      if (boyermoore) boyermoore->update(e->key, e->magnitude);
      if (maxstable) maxstable->update(e->key, e->element);
      if (truth) {
        if (truth->mode() == GroundTruth::Mode::kScalar)
          truth->update(e->key, e->magnitude);
        else
          truth->update_element(e->key, e->element);
      }
    }
  }

  HeavyHitterReport report_for(const std::string& algo, unsigned k,
                               std::uint64_t window, const SignalSpec& spec,
                               const std::string& unit) const {
    HeavyHitterReport rep;
    if (algo == "shp") rep = shp->topk(k);
    else if (algo == "maxcount") rep = maxcount->topk(k);
    else if (algo == "boyermoore") rep = boyermoore->topk(std::min<unsigned>(k, boyermoore->config().m));
    else if (algo == "maxstable") rep = maxstable->report();
    else {
      rep.algo = "exact";
      rep.entries = truth->topk(k);
    }
    rep.window = window;
    rep.unit = unit;
    rep.folded_keys = spec.key == KeySpec::kSrcDstPair;
    return rep;
  }

  Footprint footprint_for(const std::string& algo) const {
    if (algo == "shp") return memory_footprint(*shp);
    if (algo == "maxcount") return memory_footprint(*maxcount);
    if (algo == "boyermoore") return memory_footprint(*boyermoore);
    if (algo == "maxstable") return memory_footprint(*maxstable);
    return memory_footprint(*truth);
  }
};

}  // namespace

EvaluateResult evaluate_trace(std::span<const FlowRecord> records,
                              const RunConfig& cfg) {
  std::vector<std::string> algos = resolve_algos(cfg, Command::kEvaluate);
  SignalSpec spec = resolve_signal(cfg);
  PermutationParams params = make_params(std::uint32_t(cfg.gamma));
  std::string unit = unit_for(spec.value);

  EvaluateResult out;
  // per-algo, per-k running sums over windows
  struct Sums {
    double ident = 0, exact = 0, acc = 0;
  };
  std::vector<std::vector<Sums>> sums(algos.size(),
                                      std::vector<Sums>(std::size_t(cfg.k)));

  for (const WindowView& w : make_windows(records, cfg.window)) {
    WindowState state(cfg, algos, spec, params);
    state.feed(w.records, spec, params);
    out.skipped_records += state.skipped;
    ++out.windows;
    Footprint oracle_fp = memory_footprint(*state.truth);

    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
      const std::string& algo = algos[ai];
      // maxstable answers a top-1 query; everything else sweeps k' = 1..k.
      unsigned k_top = algo == "maxstable" ? 1u : unsigned(cfg.k);
      for (unsigned kq = 1; kq <= k_top; ++kq) {
        MetricResult mr;
        if (algo == "exact") {
          mr.identification_rate = 1.0;
          mr.exact_recovery = true;
          mr.mean_accuracy_pct = 100.0;
        } else {
          mr = score(state.report_for(algo, kq, w.index, spec, unit),
                     *state.truth, kq);
        }
        sums[ai][kq - 1].ident += mr.identification_rate;
        sums[ai][kq - 1].exact += mr.exact_recovery ? 1.0 : 0.0;
        sums[ai][kq - 1].acc += mr.mean_accuracy_pct;
        if (kq == k_top) {
          MetricsRow row;
          row.window = w.index;
          row.algo = algo;
          row.k = int(kq);
          row.ident_rate = mr.identification_rate;
          row.exact = mr.exact_recovery;
          row.mean_est_accuracy = mr.mean_accuracy_pct;
          row.sketch_bytes = state.footprint_for(algo).bytes;
          row.oracle_bytes = oracle_fp.bytes;
          out.rows.push_back(std::move(row));
        }
      }
    }
  }

  double n = out.windows ? double(out.windows) : 1.0;
  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    unsigned k_top = algos[ai] == "maxstable" ? 1u : unsigned(cfg.k);
    for (unsigned kq = 1; kq <= k_top; ++kq) {
      const Sums& s = sums[ai][kq - 1];
      out.per_k.push_back({algos[ai], int(kq), s.ident / n, s.exact / n,
                           s.acc / n});
    }
  }
  return out;
}

std::uint64_t run_trace(std::span<const FlowRecord> records,
                        const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> algos = resolve_algos(cfg, Command::kRun);
  SignalSpec spec = resolve_signal(cfg);
  PermutationParams params = make_params(std::uint32_t(cfg.gamma));
  std::string unit = unit_for(spec.value);

  std::uint64_t windows = 0;
  for (const WindowView& w : make_windows(records, cfg.window)) {
    WindowState state(cfg, algos, spec, params);
    state.feed(w.records, spec, params);
    ++windows;
    for (const auto& algo : algos) {
      HeavyHitterReport rep =
          state.report_for(algo, unsigned(cfg.k), w.index, spec, unit);
      if (rep.zero_signal) {
        nlohmann::json j;
        j["algo"] = rep.algo;
        j["window"] = rep.window;
        j["zero_signal"] = true;
        out << j.dump() << '\n';
        continue;
      }
      int rank = 1;
      for (const auto& e : rep.entries) {
        nlohmann::json j;
        j["algo"] = rep.algo;
        j["estimate"] = e.estimate;
        j["key"] = ip_to_string(e.key);
        j["key_u32"] = e.key;
        j["rank"] = rank++;
        j["unit"] = rep.unit;
        j["window"] = rep.window;
        if (is_set_signal(spec.value)) j["element"] = element_tag(spec.value);
        if (rep.folded_keys) j["folded"] = true;
        if (rep.approximate) j["approximate"] = true;
        out << j.dump() << '\n';
      }
    }
  }
  return windows;
}

namespace {

SyntheticConfig synth_config(const RunConfig& cfg) {
  SyntheticConfig s;
  s.n_records = cfg.n_records;
  s.zipf_exponent = cfg.zipf;
  s.background_keys = cfg.background_keys;
  s.hitters = cfg.hitters;
  s.scanners = cfg.scanners;
  s.seed = cfg.seed;
  s.bytes_per_record = cfg.bytes_per_record;
  return s;
}

// Opens cfg.output for writing; an empty path routes to fallback (stdout).
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback)
      : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot open '" + path + "' for write");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void write_metrics_csv(std::ostream& os, const EvaluateResult& ev) {
  os << "window,algo,k,ident_rate,exact,mean_est_accuracy,sketch_bytes,"
        "oracle_bytes\n";
  for (const auto& r : ev.rows)
    os << r.window << ',' << r.algo << ',' << r.k << ',' << fmt(r.ident_rate)
       << ',' << (r.exact ? 1 : 0) << ',' << fmt(r.mean_est_accuracy) << ','
       << r.sketch_bytes << ',' << r.oracle_bytes << '\n';
}

}  // namespace

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.output.empty()) throw ConfigError("generate needs --output");
    std::vector<FlowRecord> records;
    try {
      records = generate(synth_config(cfg));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    write_trace(cfg.output, records);
    out << "generated " << records.size() << " records to " << cfg.output
        << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    resolve_algos(cfg, Command::kRun);  // fail before touching the input
    if (cfg.input.empty()) throw ConfigError("run needs --input");
    std::vector<FlowRecord> records = read_trace(cfg.input);
    OutputTarget target(cfg.output, out);
    run_trace(records, cfg, target.stream());
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    resolve_algos(cfg, Command::kEvaluate);
    if (cfg.input.empty()) throw ConfigError("evaluate needs --input");
    std::vector<FlowRecord> records = read_trace(cfg.input);
    OutputTarget target(cfg.output, out);

    if (!cfg.sweep_windows.empty()) {
      // Window-size sweep: one aggregate line per (size, algorithm) at the
      // configured k.
      target.stream() << "window_size,algo,k,ident_rate,exact_rate,"
                         "mean_est_accuracy\n";
      for (std::uint64_t size : cfg.sweep_windows) {
        RunConfig sub = cfg;
        sub.window = size;
        sub.sweep_windows.clear();
        EvaluateResult ev = evaluate_trace(records, sub);
        for (const auto& a : ev.per_k) {
          int k_top = a.algo == "maxstable" ? 1 : cfg.k;
          if (a.k != k_top) continue;
          target.stream() << size << ',' << a.algo << ',' << a.k << ','
                          << fmt(a.ident_rate) << ',' << fmt(a.exact_rate)
                          << ',' << fmt(a.mean_est_accuracy) << '\n';
        }
      }
      return 0;
    }

    EvaluateResult ev = evaluate_trace(records, cfg);
    write_metrics_csv(target.stream(), ev);
    // Per-k aggregate means over windows (the identification-rate curves).
    out << "perk,algo,k,ident_rate,exact_rate,mean_est_accuracy\n";
    for (const auto& a : ev.per_k)
      out << "perk," << a.algo << ',' << a.k << ',' << fmt(a.ident_rate) << ','
          << fmt(a.exact_rate) << ',' << fmt(a.mean_est_accuracy) << '\n';
    out << "windows," << ev.windows << ",skipped," << ev.skipped_records
        << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.k < 1) throw ConfigError("k must be >= 1");
    unsigned k = unsigned(cfg.k);
    unsigned r = cfg.r > 0 ? unsigned(cfg.r) : k;
    if (r > k) throw ConfigError("r must be <= k");
    HashConfig mc = hash_config_for(cfg, "maxcount");
    HashConfig bm = hash_config_for(cfg, "boyermoore");

    out << "bound,algo,metric,k,r,value\n";
    out << "bound,shp,exact_recovery," << k << ',' << r << ','
        << fmt(shp_recovery_bound(k, r, mc.q, mc.m)) << '\n';
    out << "bound,shp,exact_recovery_linearized," << k << ',' << r << ','
        << fmt(shp_linearized_bound(k, r, mc.q, mc.m)) << '\n';
    out << "bound,maxcount,exact_recovery," << k << ',' << r << ','
        << fmt(maxcount_recovery_bound(k, r, mc.q, mc.m, mc.m_prime)) << '\n';
    out << "bound,boyermoore,exact_recovery," << k << ',' << r << ','
        << fmt(bm_recovery_bound(k, r, bm.m)) << '\n';
    out << "bound,boyermoore,identification_rate," << k << ",,"
        << fmt(bm_identification_rate(k, bm.m)) << '\n';

    if (cfg.trials > 0) {
      McProfile profile = k <= 62 ? McProfile::kPowersOfTwo : McProfile::kLinear;
      auto line = [&](const char* name, McAlgo algo, McMetric metric) {
        McValidation v =
            monte_carlo_validate(algo, k, r, profile, metric,
                                 unsigned(cfg.trials), cfg.seed, mc);
        out << "mc," << name << ','
            << (metric == McMetric::kExactRecovery ? "exact_recovery"
                                                   : "identification_rate")
            << ',' << fmt(v.empirical) << ',' << fmt(v.ci_low) << ','
            << fmt(v.ci_high) << ',' << fmt(v.bound) << ','
            << (v.pass ? "pass" : "fail") << '\n';
      };
      out << "mc,algo,metric,empirical,ci_low,ci_high,bound,verdict\n";
      line("shp", McAlgo::kShp, McMetric::kExactRecovery);
      line("maxcount", McAlgo::kMaxCount, McMetric::kExactRecovery);
      McValidation v = monte_carlo_validate(
          McAlgo::kBoyerMoore, k, r, McProfile::kLinear,
          McMetric::kIdentificationRate, unsigned(cfg.trials), cfg.seed, bm);
      out << "mc,boyermoore,identification_rate," << fmt(v.empirical) << ','
          << fmt(v.ci_low) << ',' << fmt(v.ci_high) << ',' << fmt(v.bound)
          << ',' << (v.pass ? "pass" : "fail") << '\n';
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> algos = resolve_algos(cfg, Command::kBench);
    SignalSpec spec = resolve_signal(cfg);
    PermutationParams params = make_params(std::uint32_t(cfg.gamma));

    std::vector<std::uint64_t> sizes = cfg.sweep_windows;
    if (sizes.empty()) sizes = {50000, 100000, 250000, 500000, 1000000};
    std::uint64_t max_n = *std::max_element(sizes.begin(), sizes.end());

    RunConfig gen = cfg;
    gen.n_records = max_n;
    if (gen.hitters.empty() && gen.scanners.empty())
      gen.hitters.push_back({ip_from_string("10.0.0.1"), 0.2});
    std::vector<FlowRecord> records = generate(synth_config(gen));

    std::vector<Extracted> updates;
    updates.reserve(records.size());
    for (const auto& rec : records)
      if (auto e = extract(rec, spec, params)) updates.push_back(*e);

    out << "throughput,algo,updates_per_sec\n";
    using clock = std::chrono::steady_clock;
    for (const auto& algo : algos) {
      WindowState state(cfg, {algo}, spec, params);
      auto t0 = clock::now();
      for (const auto& e : updates) {
        if (state.shp) state.shp->update(e.key, e.magnitude);
        else if (state.maxcount) state.maxcount->update(e.key, e.magnitude);
        else if (state.boyermoore) state.boyermoore->update(e.key, e.magnitude);
        else if (state.maxstable) state.maxstable->update(e.key, e.element);
        else if (state.truth) {
          if (state.truth->mode() == GroundTruth::Mode::kScalar)
            state.truth->update(e.key, e.magnitude);
          else
            state.truth->update_element(e.key, e.element);
        }
      }
      double secs = std::chrono::duration<double>(clock::now() - t0).count();
      double rate = secs > 0 ? double(updates.size()) / secs : 0.0;
      out << "throughput," << algo << ',' << std::uint64_t(rate) << '\n';
    }

    // Sketch cells are shape functions, constant in window size; the oracle
    // grows with the live key count.
    out << "footprint,window_size,algo,cells,bytes\n";
    for (std::uint64_t size : sizes) {
      std::span<const FlowRecord> prefix(records.data(),
                                         std::min<std::size_t>(size, records.size()));
      WindowState state(cfg, algos, spec, params);
      // Only the oracle's footprint depends on the data; feed it alone.
      if (state.truth) {
        for (const auto& rec : prefix) {
          auto e = extract(rec, spec, params);
          if (!e) continue;
          if (state.truth->mode() == GroundTruth::Mode::kScalar)
            state.truth->update(e->key, e->magnitude);
          else
            state.truth->update_element(e->key, e->element);
        }
      }
      for (const auto& algo : algos) {
        Footprint fp = state.footprint_for(algo);
        out << "footprint," << size << ',' << algo << ',' << fp.cells << ','
            << fp.bytes << '\n';
      }
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hhp
