// Copyright 2026 The BNRO Concentrator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bnro/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "bnro/baselines.hpp"
#include "bnro/engine.hpp"
#include "bnro/streams.hpp"
#include "bnro/verify.hpp"

namespace bnro {
namespace {

constexpr const char* kCommands[] = {"simulate", "verify", "table", "search",
                                     "bench",    "compare", "trace"};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int code(ExitCode c) { return static_cast<int>(c); }

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false)
      : os_(&fallback) {
    if (path.empty()) return;
    file_.open(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!file_) throw IoError("cannot open " + path + " for writing");
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }
  void close(const std::string& path) {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw IoError("failed writing " + path);
  }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

GeneratorConfig generator(unsigned n_layers, const RunSpec& spec,
                          std::vector<double> fallback, std::uint64_t cycles) {
  GeneratorConfig cfg;
  cfg.n_inputs = 1u << n_layers;
  cfg.daq_probability = spec.probabilities.empty() ? std::move(fallback)
                                                   : spec.probabilities;
  cfg.seed = spec.seed;
  cfg.total_cycles = cycles;
  cfg.validate();
  return cfg;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xFF;
    h *= 0x100000001B3ull;
  }
  return h;
}

int cmd_simulate(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const unsigned n = spec.n_layers.value_or(4);
  TraceGenerator gen(generator(n, spec, {1.0}, spec.cycles.value_or(1000)));
  PipelinedConcentrator conc = PipelinedConcentrator::from_mask(n, spec.pipeline_mask);

  std::optional<Sink> records;
  if (!spec.out.empty()) {
    records.emplace(spec.out, out);
    write_records_header(records->stream(), conc.topology().ports());
  }
  StreamValidator validator;
  std::size_t emitted = 0;
  auto consume = [&](const OutputRecord& rec, bool partial) {
    validator.add(rec, partial);
    if (records) write_record_rows(records->stream(), emitted, rec);
    ++emitted;
  };
  while (!gen.done()) {
    if (auto rec = conc.step(gen.next()).emitted) consume(*rec, false);
  }
  for (const auto& rec : conc.drain()) consume(rec, !rec.complete());
  if (records) records->close(spec.out);

  write_report_csv(out, validator.report());
  err << "simulate: layers=" << n << " records=" << emitted
      << " pipeline_latency=" << conc.latency() << "\n";
  return validator.report().ok ? code(ExitCode::kOk)
                               : code(ExitCode::kValidationFailed);
}

int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream&) {
  const unsigned n = spec.n_layers.value_or(4);
  Sampling sampling;
  if (spec.exhaustive) {
    sampling = Sampling::exhaustive();
  } else if (spec.samples) {
    sampling = Sampling::random(*spec.samples, spec.seed);
  } else {
    sampling = n <= 4 ? Sampling::exhaustive() : Sampling::random(1000000, spec.seed);
  }
  const SweepReport report = sweep_collision_freedom(n, sampling, spec.workers);
  Sink sink(spec.out, out);
  sink.stream() << sweep_report_json(report) << "\n";
  sink.close(spec.out);
  return report.clean() ? code(ExitCode::kOk) : code(ExitCode::kCollision);
}

int cmd_table(const RunSpec& spec, std::ostream& out, std::ostream&) {
  const unsigned n = spec.n_layers.value_or(4);
  const ConfigTable table = generate_table(n);
  const SweepReport check = revalidate_table(table);
  const std::string path =
      spec.out.empty() ? "bnro_table_n" + std::to_string(n) + ".bin" : spec.out;
  Sink sink(path, out, /*binary=*/true);
  write_table(sink.stream(), table);
  sink.close(path);
  const std::uint64_t bytes =
      kTableHeaderBytes + table.entries.size() * ((table.entry_bits + 7) / 8);
  out << "path,layers,entries,entry_bits,file_bytes,revalidated,revalidation_ok\n"
      << path << "," << n << "," << table.entries.size() << ","
      << table.entry_bits << "," << bytes << "," << check.cases_passed << ","
      << (check.clean() ? 1 : 0) << "\n";
  return check.clean() ? code(ExitCode::kOk) : code(ExitCode::kCollision);
}

int cmd_search(const RunSpec& spec, std::ostream& out, std::ostream&) {
  const CoverageReport report = exhaustive_config_search(spec.n_layers.value_or(3));
  Sink sink(spec.out, out);
  sink.stream() << coverage_report_json(report) << "\n";
  sink.close(spec.out);
  return report.uncovered == 0 ? code(ExitCode::kOk) : code(ExitCode::kCollision);
}

int cmd_bench(const RunSpec& spec, std::ostream& out, std::ostream&) {
  std::vector<unsigned> layers{3, 4, 5};
  if (spec.n_layers) layers = {*spec.n_layers};
  std::vector<double> probs = spec.probabilities;
  if (probs.empty()) probs = {0.1, 0.5, 0.9, 1.0};

  Sink sink(spec.out, out);
  std::ostream& os = sink.stream();
  os << "layers,probability,cycles,words,seconds,words_per_second,digest\n";
  bool all_ok = true;
  for (unsigned n : layers) {
    for (double p : probs) {
      RunSpec one = spec;
      one.probabilities = {p};
      TraceGenerator gen(generator(n, one, {p}, spec.cycles.value_or(100000)));
      Concentrator conc(n);
      StreamValidator validator;
      std::uint64_t digest = 0xCBF29CE484222325ull;
      auto take = [&](const OutputRecord& rec, bool partial) {
        validator.add(rec, partial);
        for (std::size_t i = 0; i < rec.occupancy; ++i) {
          digest = fnv1a(digest, rec.slots[i]->payload);
        }
      };
      const auto t0 = std::chrono::steady_clock::now();
      while (!gen.done()) {
        if (auto rec = conc.step(gen.next()).emitted) take(*rec, false);
      }
      if (auto rec = conc.flush()) take(*rec, true);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const std::uint64_t words = validator.report().words_checked;
      all_ok = all_ok && validator.report().ok;
      os << n << "," << p << "," << gen.cycle() << "," << words << "," << secs
         << "," << (secs > 0 ? words / secs : 0.0) << "," << std::hex << digest
         << std::dec << "\n";
    }
  }
  sink.close(spec.out);
  return all_ok ? code(ExitCode::kOk) : code(ExitCode::kValidationFailed);
}

int cmd_compare(const RunSpec& spec, std::ostream& out, std::ostream&) {
  const unsigned n = spec.n_layers.value_or(4);
  const std::uint32_t width = 1u << n;
  // Default: skewed rates, even inputs busy and odd inputs quiet.
  std::vector<double> skewed(width);
  for (std::uint32_t k = 0; k < width; ++k) skewed[k] = k % 2 == 0 ? 0.9 : 0.1;
  const Trace trace = gen_trace(generator(n, spec, skewed, spec.cycles.value_or(10000)));

  Sink sink(spec.out, out);
  std::ostream& os = sink.stream();
  write_metrics_csv_header(os);
  const BaselineResult results[] = {
      bnro_concentrate(trace),
      polling_concentrate(trace, spec.scan_factor.value_or(width)),
      widthconv_concentrate(trace),
      encoder_tree_concentrate(trace),
  };
  const char* names[] = {"bnro", "polling", "widthconv", "encoder_tree"};
  bool conserved = true;
  for (std::size_t i = 0; i < std::size(results); ++i) {
    write_metrics_csv_row(os, names[i], trace, results[i]);
    conserved = conserved && conserves(trace, results[i].records);
  }
  sink.close(spec.out);
  return conserved ? code(ExitCode::kOk) : code(ExitCode::kValidationFailed);
}

int cmd_trace(const RunSpec& spec, std::ostream& out, std::ostream&) {
  const unsigned n = spec.n_layers.value_or(3);
  TraceGenerator gen(generator(n, spec, {0.5}, spec.cycles.value_or(4)));
  Concentrator conc(n);
  Sink sink(spec.out, out);
  std::ostream& os = sink.stream();
  os << dump_wiring(conc.topology());
  while (!gen.done()) {
    const InputVector inputs = gen.next();
    const DaqMask mask = DaqMask::from_inputs(inputs);
    const std::uint32_t before = conc.state().pointer;
    const ConfigPlan plan = compute_config(conc.topology(), mask, before).plan();
    const CycleResult r = conc.step(inputs);
    os << "# cycle " << conc.cycle() - 1 << " mask=" << mask.to_string()
       << " pointer=" << before << "->" << conc.state().pointer
       << " emitted=" << (r.emitted ? "yes" : "no") << "\n"
       << render_plan(plan);
  }
  sink.close(spec.out);
  return code(ExitCode::kOk);
}

}  // namespace

void RunSpec::validate() const {
  if (std::find(std::begin(kCommands), std::end(kCommands), command) ==
      std::end(kCommands)) {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
  if (n_layers && (*n_layers < kMinLayers || *n_layers > kMaxLayers)) {
    throw std::invalid_argument("--layers must be in [1, 8]");
  }
  const unsigned n = n_layers.value_or(4);
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("--prob values must lie in [0, 1]");
    }
  }
  if (command != "bench" && probabilities.size() > 1 &&
      probabilities.size() != (1u << n)) {
    throw std::invalid_argument("--prob takes one value or one per input");
  }
  if ((pipeline_mask >> n) != 0) {
    throw std::invalid_argument("--pipeline has bits beyond the last layer");
  }
  if (exhaustive && samples) {
    throw std::invalid_argument("--exhaustive and --samples are exclusive");
  }
  if (samples && *samples == 0) throw std::invalid_argument("--samples must be positive");
  if (scan_factor && *scan_factor == 0) {
    throw std::invalid_argument("--scan-factor must be positive");
  }
  if (workers == 0) throw std::invalid_argument("--workers must be positive");
  if (command == "verify" && exhaustive && n > 4) {
    throw std::invalid_argument("exhaustive verification is limited to --layers <= 4");
  }
  if (command == "table" && n > 4) {
    throw std::invalid_argument("table generation is limited to --layers <= 4");
  }
  if (command == "search" && n_layers.value_or(3) > 3) {
    throw std::invalid_argument("configuration search is limited to --layers <= 3");
  }
}

std::optional<RunSpec> parse_args(int argc, const char* const* argv,
                                  std::ostream& out, std::ostream& err,
                                  int& exit_code) {
  RunSpec spec;
  std::string pipeline;
  CLI::App app{"BNRO data concentrator model and verification suite", "bnro"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--layers", spec.n_layers, "Number of network layers N (1-8)");
    sub->add_option("--seed", spec.seed, "RNG seed");
    sub->add_option("--out", spec.out, "Output file (default: stdout)");
  };
  auto add_stream = [&](CLI::App* sub) {
    sub->add_option("--cycles", spec.cycles, "Number of concentration cycles");
    sub->add_option("--prob", spec.probabilities,
                    "DAQ probability: one global value or one per input");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Run and validate a simulation");
  add_common(simulate);
  add_stream(simulate);
  simulate->add_option("--pipeline", pipeline, "Registered-layer bit mask");

  CLI::App* verify = app.add_subcommand("verify", "Collision-freedom sweep");
  add_common(verify);
  verify->add_flag("--exhaustive", spec.exhaustive, "Every (mask, start) task");
  verify->add_option("--samples", spec.samples, "Random tasks to check");
  verify->add_option("--workers", spec.workers, "Worker threads");

  CLI::App* table = app.add_subcommand("table", "Generate the switch configuration table");
  add_common(table);

  CLI::App* search = app.add_subcommand("search", "Enumerate every switch configuration");
  add_common(search);

  CLI::App* bench = app.add_subcommand("bench", "Software throughput");
  add_common(bench);
  add_stream(bench);

  CLI::App* compare = app.add_subcommand("compare", "Compare with baseline methods");
  add_common(compare);
  add_stream(compare);
  compare->add_option("--scan-factor", spec.scan_factor, "Polling slots per cycle");

  CLI::App* trace = app.add_subcommand("trace", "Print wiring and per-cycle switch modes");
  add_common(trace);
  add_stream(trace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err) == 0 ? code(ExitCode::kOk)
                                           : code(ExitCode::kBadFlags);
    return std::nullopt;
  }
  spec.command = app.get_subcommands().front()->get_name();
  if (!pipeline.empty()) {
    try {
      std::size_t used = 0;
      spec.pipeline_mask = static_cast<std::uint32_t>(std::stoul(pipeline, &used, 0));
      if (used != pipeline.size()) throw std::invalid_argument(pipeline);
    } catch (const std::exception&) {
      err << "--pipeline: not an integer mask: " << pipeline << "\n";
      exit_code = code(ExitCode::kBadFlags);
      return std::nullopt;
    }
  }
  exit_code = code(ExitCode::kOk);
  return spec;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::kBadFlags);
  }
  try {
    if (spec.command == "simulate") return cmd_simulate(spec, out, err);
    if (spec.command == "verify") return cmd_verify(spec, out, err);
    if (spec.command == "table") return cmd_table(spec, out, err);
    if (spec.command == "search") return cmd_search(spec, out, err);
    if (spec.command == "bench") return cmd_bench(spec, out, err);
    if (spec.command == "compare") return cmd_compare(spec, out, err);
    return cmd_trace(spec, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::kIoError);
  } catch (const CollisionError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::kCollision);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::kBadFlags);
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  int exit_code = 0;
  auto spec = parse_args(argc, argv, out, err, exit_code);
  if (!spec) return exit_code;
  return run(*spec, out, err);
}

}  // namespace bnro
