#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hhp/pipeline.hpp"

namespace {

// "key:number" where key is a dotted quad or unsigned decimal; the numeric
// tail is a share for hitters, a set size for scanners.
std::pair<hhp::Key, std::string> split_keyed(const std::string& spec,
                                             const char* what) {
  std::size_t pos = spec.rfind(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 == spec.size())
    throw hhp::ConfigError(std::string("bad ") + what + " '" + spec +
                           "', expected key:value");
  try {
    return {hhp::ip_from_string(spec.substr(0, pos)), spec.substr(pos + 1)};
  } catch (const hhp::InputError& e) {
    throw hhp::ConfigError(std::string("bad ") + what + " key: " + e.what());
  }
}

void parse_plants(const std::vector<std::string>& hitter_specs,
                  const std::vector<std::string>& scanner_specs,
                  hhp::RunConfig& cfg) {
  for (const auto& s : hitter_specs) {
    auto [key, num] = split_keyed(s, "--hitter");
    try {
      cfg.hitters.push_back({key, std::stod(num)});
    } catch (const std::exception&) {
      throw hhp::ConfigError("bad --hitter share '" + num + "'");
    }
  }
  for (const auto& s : scanner_specs) {
    auto [key, num] = split_keyed(s, "--scanner");
    try {
      cfg.scanners.push_back({key, std::uint32_t(std::stoul(num))});
    } catch (const std::exception&) {
      throw hhp::ConfigError("bad --scanner set size '" + num + "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Streaming heavy-hitter identification: counter sketches over an "
      "invertible permutation of the 32-bit key space, an exact oracle, and "
      "accuracy bounds"};
  app.set_config("--config", "",
                 "key=value config file; command-line flags win");
  app.require_subcommand(1);

  hhp::RunConfig cfg;
  std::vector<std::string> hitter_specs;
  std::vector<std::string> scanner_specs;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "trace file (.gz accepted)");
    sub->add_option("--output", cfg.output, "output file (default stdout)");
    sub->add_option("--algo", cfg.algos,
                    "shp, maxcount, boyermoore, maxstable, exact (repeatable)");
    sub->add_option("--key", cfg.key, "src, dst, src_dst_pair");
    sub->add_option("--value", cfg.value,
                    "bytes, packets, occurrences, set:dst, set:dport, set:ttl");
    sub->add_option("--k", cfg.k, "query depth");
    sub->add_option("--window", cfg.window, "records per window");
    sub->add_option("--m", cfg.m, "bins per row (256 = one octet)");
    sub->add_option("--mprime", cfg.m_prime,
                    "substreams (maxcount) / estimator bins (boyermoore)");
    sub->add_option("--q", cfg.q, "octet rows (1..4)");
    sub->add_option("--gamma", cfg.gamma, "permutation power");
    sub->add_option("--L", cfg.L, "max-stable lanes (odd)");
    sub->add_option("--seed", cfg.seed, "deterministic seed");
    sub->add_option("--sweep-windows", cfg.sweep_windows,
                    "comma-separated window sizes")
        ->delimiter(',');
  };
  auto add_generator = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n_records, "records to generate");
    sub->add_option("--zipf", cfg.zipf, "background Zipf exponent");
    sub->add_option("--background-keys", cfg.background_keys,
                    "background key population");
    sub->add_option("--bytes-per-record", cfg.bytes_per_record,
                    "constant record size");
    sub->add_option("--hitter", hitter_specs,
                    "planted hitter key:share (repeatable)");
    sub->add_option("--scanner", scanner_specs,
                    "planted scanner key:set_size (repeatable)");
  };

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic trace");
  add_common(generate);
  add_generator(generate);

  CLI::App* run = app.add_subcommand("run", "stream a trace, report hitters");
  add_common(run);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score sketches against the exact oracle");
  add_common(evaluate);

  CLI::App* bounds = app.add_subcommand("bounds", "print accuracy bounds");
  add_common(bounds);
  bounds->add_option("--r", cfg.r, "recovery order (default k)");
  bounds->add_option("--trials", cfg.trials,
                     "Monte-Carlo trials (0 = analytic only)");

  CLI::App* bench =
      app.add_subcommand("bench", "throughput and memory footprints");
  add_common(bench);
  add_generator(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    parse_plants(hitter_specs, scanner_specs, cfg);
  } catch (const hhp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  if (app.got_subcommand(generate))
    return hhp::cmd_generate(cfg, std::cout, std::cerr);
  if (app.got_subcommand(run)) return hhp::cmd_run(cfg, std::cout, std::cerr);
  if (app.got_subcommand(evaluate))
    return hhp::cmd_evaluate(cfg, std::cout, std::cerr);
  if (app.got_subcommand(bounds))
    return hhp::cmd_bounds(cfg, std::cout, std::cerr);
  return hhp::cmd_bench(cfg, std::cout, std::cerr);
}
