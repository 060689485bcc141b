#include "commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "chh/exact_oracle.hpp"
#include "chh/mgchh.hpp"

namespace chh::cli {

namespace fs = std::filesystem;

Algorithm parse_algorithm(const std::string& name) {
  if (name == "csschh") return Algorithm::csschh;
  if (name == "mgchh") return Algorithm::mgchh;
  if (name == "exact") return Algorithm::exact;
  throw usage_error("unknown algorithm: " + name);
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::csschh: return "csschh";
    case Algorithm::mgchh: return "mgchh";
    case Algorithm::exact: return "exact";
  }
  return "?";
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "n") return SweepAxis::n;
  if (name == "rho") return SweepAxis::rho;
  if (name == "space") return SweepAxis::space;
  if (name == "phi1") return SweepAxis::phi1;
  if (name == "phi2") return SweepAxis::phi2;
  throw usage_error("unknown sweep axis: " + name);
}

void SizingOptions::check_single_mode() const {
  const bool by_eps = eps1 || eps2;
  const bool by_counters = k1 || k2 || s1 || s2;
  const int modes = int{by_eps} + int{by_counters} + int{space_bytes.has_value()};
  if (modes != 1) {
    throw usage_error(
        "give exactly one sizing mode: --eps1/--eps2, --k1/--k2/--s1/--s2, or --space-bytes");
  }
  if (by_eps && !(eps1 && eps2)) throw usage_error("--eps1 and --eps2 go together");
}

Capacities resolve_capacities(Algorithm algo, const SizingOptions& sizing,
                              Thresholds t) {
  if (algo == Algorithm::exact) return {};
  sizing.check_single_mode();
  if (sizing.space_bytes) {
    const auto c = equal_space_config(*sizing.space_bytes, sizing.space_ratio);
    return algo == Algorithm::csschh ? Capacities{c.k1, c.k2} : Capacities{c.s1, c.s2};
  }
  if (sizing.eps1) {
    const ChhParams p{t.phi1, t.phi2, *sizing.eps1, *sizing.eps2};
    if (algo == Algorithm::csschh) {
      const auto s = chh_sizing(p);
      return {s.k1, s.k2};
    }
    const auto s = mgchh_sizing(p);
    return {s.s1, s.s2};
  }
  const auto& a = algo == Algorithm::csschh ? sizing.k1 : sizing.s1;
  const auto& b = algo == Algorithm::csschh ? sizing.k2 : sizing.s2;
  if (!a || !b) {
    throw usage_error(algo == Algorithm::csschh ? "csschh needs --k1 and --k2"
                                                : "mgchh needs --s1 and --s2");
  }
  return {*a, *b};
}

namespace {

/// Output destination; a named file is written to a temporary sibling and
/// renamed into place only on commit(), so failures never leave partial files.
class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback)
      : path_(path), fallback_(fallback) {
    if (path_ == "-") return;
    temp_ = path_ + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(this));
    file_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open output file: " + path_);
  }

  OutputSink(const OutputSink&) = delete;
  OutputSink& operator=(const OutputSink&) = delete;

  ~OutputSink() {
    if (!temp_.empty() && !committed_) {
      file_.close();
      std::error_code ec;
      fs::remove(temp_, ec);
    }
  }

  std::ostream& stream() { return path_ == "-" ? fallback_ : file_; }

  void commit() {
    if (path_ == "-") {
      fallback_.flush();
      return;
    }
    file_.close();
    if (!file_) throw std::runtime_error("failed writing output file: " + path_);
    fs::rename(temp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string temp_;
  std::ostream& fallback_;
  std::ofstream file_;
  bool committed_ = false;
};

class InputSource {
 public:
  explicit InputSource(const std::string& path) {
    if (path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot open input file: " + path);
  }

  std::istream& stream() { return file_.is_open() ? file_ : std::cin; }

 private:
  std::ifstream file_;
};

constexpr std::size_t kChunkPairs = 1 << 14;

// Feeds the input to `consume` in order, one chunk at a time.
template <typename Consume>
void for_each_chunk(std::istream& in, PairFormat format, bool pipelined,
                    Consume&& consume) {
  auto reader = make_pair_reader(in, format);
  if (!pipelined) {
    std::vector<StreamPair> chunk(kChunkPairs);
    while (const std::size_t n = reader->read(chunk)) {
      consume(std::span<const StreamPair>(chunk.data(), n));
    }
    return;
  }

  // Reader thread -> bounded FIFO -> this thread.
  constexpr std::size_t kMaxQueued = 4;
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<StreamPair>> queue;
  bool finished = false;
  bool cancelled = false;
  std::exception_ptr failure;

  std::thread producer([&] {
    try {
      for (;;) {
        std::vector<StreamPair> chunk(kChunkPairs);
        const std::size_t n = reader->read(chunk);
        if (n == 0) break;
        chunk.resize(n);
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return queue.size() < kMaxQueued || cancelled; });
        if (cancelled) return;
        queue.push_back(std::move(chunk));
        cv.notify_all();
      }
    } catch (...) {
      std::lock_guard lock(mu);
      failure = std::current_exception();
    }
    std::lock_guard lock(mu);
    finished = true;
    cv.notify_all();
  });

  try {
    for (;;) {
      std::vector<StreamPair> chunk;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return !queue.empty() || finished; });
        if (queue.empty()) break;
        chunk = std::move(queue.front());
        queue.pop_front();
        cv.notify_all();
      }
      consume(std::span<const StreamPair>(chunk));
    }
  } catch (...) {
    {
      std::lock_guard lock(mu);
      cancelled = true;
      cv.notify_all();
    }
    producer.join();
    throw;
  }
  producer.join();
  if (failure) std::rethrow_exception(failure);
}

void warn_if_over_cap(const ExactCounts& exact, std::uint64_t cap, std::ostream& err) {
  if (exact.distinct_pairs() > cap) {
    err << "warning: exact oracle holds " << exact.distinct_pairs()
        << " distinct pairs (cap " << cap << ")\n";
  }
}

}  // namespace

void cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.thresholds.validate();
  const Capacities caps = resolve_capacities(cfg.algorithm, cfg.sizing, cfg.thresholds);
  InputSource input(cfg.input);

  ExactCounts exact;
  const bool need_exact = cfg.algorithm == Algorithm::exact || cfg.exact_column;
  std::optional<CsschhSketch> css;
  std::optional<MgchhSketch> mg;
  if (cfg.algorithm == Algorithm::csschh) css.emplace(caps.first, caps.second);
  if (cfg.algorithm == Algorithm::mgchh) mg.emplace(caps.first, caps.second, cfg.seed);

  for_each_chunk(input.stream(), cfg.input_format, cfg.pipelined,
                 [&](std::span<const StreamPair> chunk) {
                   for (const auto& p : chunk) {
                     if (css) css->update(p.x, p.y);
                     if (mg) mg->update(p.x, p.y);
                     if (need_exact) exact.update(p.x, p.y);
                   }
                 });
  if (need_exact) warn_if_over_cap(exact, 100'000'000, err);

  const ChhReport report = css  ? css->query(cfg.thresholds)
                           : mg ? mg->query(cfg.thresholds)
                                : exact.echh(cfg.thresholds);
  OutputSink sink(cfg.out, out);
  write_report(sink.stream(), report, cfg.report_format,
               cfg.exact_column ? &exact : nullptr);
  sink.commit();
}

std::vector<ComparisonRow> compare_on(std::span<const StreamPair> stream,
                                      const std::vector<Algorithm>& algorithms,
                                      const SizingOptions& sizing, Thresholds t,
                                      std::uint64_t seed, int timing_runs,
                                      std::uint64_t oracle_cap, std::ostream& err) {
  t.validate();
  ExactCounts exact;
  for (const auto& p : stream) exact.update(p.x, p.y);
  warn_if_over_cap(exact, oracle_cap, err);
  const ChhReport truth = exact.echh(t);

  std::vector<ComparisonRow> rows;
  for (Algorithm algo : algorithms) {
    ComparisonRow row{algo, resolve_capacities(algo, sizing, t), {}};
    const auto [c1, c2] = row.capacities;
    switch (algo) {
      case Algorithm::csschh: {
        CsschhSketch s(c1, c2);
        for (const auto& p : stream) s.update(p.x, p.y);
        row.result = score(s.query(t), truth);
        row.result.space_bytes_model = s.space_bytes_model();
        if (timing_runs > 0 && !stream.empty()) {
          row.result.updates_per_ms =
              measure_throughput([&] { return CsschhSketch(c1, c2); }, stream, timing_runs)
                  .median;
        }
        break;
      }
      case Algorithm::mgchh: {
        MgchhSketch s(c1, c2, seed);
        for (const auto& p : stream) s.update(p.x, p.y);
        row.result = score(s.query(t), truth);
        row.result.space_bytes_model = s.space_bytes_model();
        if (timing_runs > 0 && !stream.empty()) {
          row.result.updates_per_ms =
              measure_throughput([&] { return MgchhSketch(c1, c2, seed); }, stream,
                                 timing_runs)
                  .median;
        }
        break;
      }
      case Algorithm::exact:
        row.result = score(truth, truth);
        if (timing_runs > 0 && !stream.empty()) {
          row.result.updates_per_ms =
              measure_throughput([] { return ExactCounts(); }, stream, timing_runs).median;
        }
        break;
    }
    rows.push_back(row);
  }
  return rows;
}

void cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err) {
  InputSource input(cfg.input);
  const auto stream = read_all_pairs(input.stream(), cfg.input_format);
  const auto rows = compare_on(stream, cfg.algorithms, cfg.sizing, cfg.thresholds,
                               cfg.seed, cfg.timing_runs, cfg.oracle_cap, err);

  OutputSink sink(cfg.out, out);
  std::ostream& os = sink.stream();
  if (cfg.report_format == ReportFormat::csv) {
    os << "algo,c1,c2," << kEvalCsvHeader << '\n';
    for (const auto& r : rows) {
      os << algorithm_name(r.algorithm) << ',' << r.capacities.first << ','
         << r.capacities.second << ',';
      write_eval_csv_fields(os, r.result);
      os << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["n"] = stream.size();
    j["phi1"] = cfg.thresholds.phi1;
    j["phi2"] = cfg.thresholds.phi2;
    nlohmann::ordered_json results;
    for (const auto& r : rows) {
      auto e = to_json(r.result);
      e["c1"] = r.capacities.first;
      e["c2"] = r.capacities.second;
      results[algorithm_name(r.algorithm)] = e;
    }
    j["results"] = results;
    os << j.dump(2) << '\n';
  }
  sink.commit();
}

void cmd_generate(const GenerateConfig& cfg, std::ostream& out) {
  StreamGenerator gen(cfg.spec);
  OutputSink sink(cfg.out, out);
  std::vector<StreamPair> chunk;
  chunk.reserve(kChunkPairs);
  for (std::uint64_t done = 0; done < cfg.spec.n;) {
    chunk.clear();
    const auto take = std::min<std::uint64_t>(kChunkPairs, cfg.spec.n - done);
    for (std::uint64_t i = 0; i < take; ++i) chunk.push_back(gen.next());
    write_pairs(sink.stream(), chunk, cfg.format);
    done += take;
  }
  sink.commit();
}

void cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.values.empty()) throw usage_error("--values is empty");
  if (cfg.trials < 1) throw usage_error("--trials must be at least 1");
  OutputSink sink(cfg.out, out);
  std::ostream& os = sink.stream();
  os << kSweepCsvPrefix << kEvalCsvHeader << '\n';

  for (double value : cfg.values) {
    StreamSpec spec = cfg.base;
    SizingOptions sizing = cfg.sizing;
    Thresholds t = cfg.thresholds;
    switch (cfg.axis) {
      case SweepAxis::n:
        if (value < 1) throw usage_error("stream length must be at least 1");
        spec.n = static_cast<std::uint64_t>(value);
        break;
      case SweepAxis::rho: spec.rho = value; break;
      case SweepAxis::space:
        if (value < 1) throw usage_error("byte budget must be positive");
        sizing = SizingOptions{};
        sizing.space_ratio = cfg.sizing.space_ratio;
        sizing.space_bytes = static_cast<std::uint64_t>(value);
        break;
      case SweepAxis::phi1: t.phi1 = value; break;
      case SweepAxis::phi2: t.phi2 = value; break;
    }
    for (int trial = 0; trial < cfg.trials; ++trial) {
      spec.seed = cfg.base.seed + static_cast<std::uint64_t>(trial);
      const auto stream = gen_stream(spec);
      const auto rows = compare_on(stream, cfg.algorithms, sizing, t, spec.seed,
                                   cfg.timing_runs, 100'000'000, err);
      const char* axis_names[] = {"n", "rho", "space", "phi1", "phi2"};
      for (const auto& r : rows) {
        os << axis_names[static_cast<int>(cfg.axis)] << ',' << value << ',' << trial << ','
           << spec.seed << ',' << algorithm_name(r.algorithm) << ',' << spec.n << ','
           << spec.rho << ',' << t.phi1 << ',' << t.phi2 << ',' << r.capacities.first
           << ',' << r.capacities.second << ',' << r.result.truth_size << ','
           << r.result.reported << ',';
        write_eval_csv_fields(os, r.result);
        os << '\n';
      }
    }
  }
  sink.commit();
}

namespace {

void add_sizing_flags(CLI::App* app, SizingOptions& s) {
  app->add_option("--eps1", s.eps1, "primary error tolerance (sizes from tolerances)");
  app->add_option("--eps2", s.eps2, "correlated error tolerance");
  app->add_option("--k1", s.k1, "csschh primary counters")->check(CLI::PositiveNumber);
  app->add_option("--k2", s.k2, "csschh tuple counters")->check(CLI::PositiveNumber);
  app->add_option("--s1", s.s1, "mgchh primary counters")->check(CLI::PositiveNumber);
  app->add_option("--s2", s.s2, "mgchh secondary counters per primary")
      ->check(CLI::PositiveNumber);
  app->add_option("--space-bytes", s.space_bytes, "equal-space byte budget");
  app->add_option("--space-ratio", s.space_ratio,
                  "primary counters per secondary counter in equal-space mode")
      ->check(CLI::PositiveNumber);
}

void add_threshold_flags(CLI::App* app, Thresholds& t) {
  app->add_option("--phi1", t.phi1, "primary support threshold")->capture_default_str();
  app->add_option("--phi2", t.phi2, "correlated support threshold")->capture_default_str();
}

const std::map<std::string, PairFormat> kPairFormats{{"binary", PairFormat::binary},
                                                     {"csv", PairFormat::csv}};
const std::map<std::string, ReportFormat> kReportFormats{{"json", ReportFormat::json},
                                                         {"csv", ReportFormat::csv}};
const std::map<std::string, JointModel> kModels{
    {"permuted", JointModel::independent_permuted},
    {"independent", JointModel::plain_independent}};

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> out;
  for (const auto& n : names) out.push_back(parse_algorithm(n));
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlated heavy hitters over two-dimensional streams"};
  app.require_subcommand(1);

  GenerateConfig gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic Zipf pair stream");
  generate->add_option("--n", gen.spec.n, "stream length")->required();
  generate->add_option("--rho", gen.spec.rho, "zipf skew")->capture_default_str();
  generate->add_option("--m1", gen.spec.m1, "primary universe size")->capture_default_str();
  generate->add_option("--m2", gen.spec.m2, "secondary universe size")->capture_default_str();
  generate->add_option("--seed", gen.spec.seed, "generator seed")->capture_default_str();
  generate->add_option("--model", gen.spec.model, "joint distribution model")
      ->transform(CLI::CheckedTransformer(kModels));
  generate->add_option("--format", gen.format, "binary | csv")
      ->transform(CLI::CheckedTransformer(kPairFormats));
  generate->add_option("--out", gen.out, "output path, - for stdout");

  RunConfig run;
  std::string run_algo = "csschh";
  auto* run_cmd = app.add_subcommand("run", "run one algorithm and print its report");
  run_cmd->add_option("--algo", run_algo, "csschh | mgchh | exact")->capture_default_str();
  add_sizing_flags(run_cmd, run.sizing);
  add_threshold_flags(run_cmd, run.thresholds);
  run_cmd->add_option("--input", run.input, "pair file, - for stdin");
  run_cmd->add_option("--format", run.input_format, "binary | csv")
      ->transform(CLI::CheckedTransformer(kPairFormats));
  run_cmd->add_option("--seed", run.seed, "mgchh random seed");
  run_cmd->add_option("--report-format", run.report_format, "json | csv")
      ->transform(CLI::CheckedTransformer(kReportFormats));
  run_cmd->add_option("--out", run.out, "output path, - for stdout");
  run_cmd->add_flag("--pipelined", run.pipelined, "overlap reading with updates");
  run_cmd->add_flag("--exact-column", run.exact_column,
                    "also count exactly and add exact_freq to each record");

  CompareConfig cmp;
  std::vector<std::string> cmp_algos{"csschh", "mgchh"};
  auto* cmp_cmd = app.add_subcommand("compare", "score algorithms against the exact oracle");
  cmp_cmd->add_option("--algo", cmp_algos, "algorithms to compare")->delimiter(',');
  add_sizing_flags(cmp_cmd, cmp.sizing);
  add_threshold_flags(cmp_cmd, cmp.thresholds);
  cmp_cmd->add_option("--input", cmp.input, "pair file, - for stdin");
  cmp_cmd->add_option("--format", cmp.input_format, "binary | csv")
      ->transform(CLI::CheckedTransformer(kPairFormats));
  cmp_cmd->add_option("--seed", cmp.seed, "mgchh random seed");
  cmp_cmd->add_option("--trials", cmp.timing_runs, "timed runs per algorithm (median)")
      ->capture_default_str();
  cmp_cmd->add_option("--report-format", cmp.report_format, "json | csv")
      ->transform(CLI::CheckedTransformer(kReportFormats));
  cmp_cmd->add_option("--out", cmp.out, "output path, - for stdout");
  cmp_cmd->add_option("--oracle-cap", cmp.oracle_cap,
                      "warn when the oracle holds more distinct pairs than this");

  SweepConfig sweep;
  std::string axis;
  std::vector<std::string> sweep_algos{"csschh", "mgchh"};
  auto* sweep_cmd = app.add_subcommand("sweep", "vary one parameter over synthetic streams");
  sweep_cmd->add_option("--axis", axis, "n | rho | space | phi1 | phi2")->required();
  sweep_cmd->add_option("--values", sweep.values, "comma separated values")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--algo", sweep_algos, "algorithms")->delimiter(',');
  sweep_cmd->add_option("--n", sweep.base.n, "base stream length");
  sweep_cmd->add_option("--rho", sweep.base.rho, "base zipf skew");
  sweep_cmd->add_option("--m1", sweep.base.m1, "primary universe size");
  sweep_cmd->add_option("--m2", sweep.base.m2, "secondary universe size");
  sweep_cmd->add_option("--model", sweep.base.model, "joint distribution model")
      ->transform(CLI::CheckedTransformer(kModels));
  sweep_cmd->add_option("--seed", sweep.base.seed, "seed of trial 0");
  sweep_cmd->add_option("--trials", sweep.trials, "seeds per value")->capture_default_str();
  sweep_cmd->add_option("--timing-runs", sweep.timing_runs, "timed runs per algorithm");
  add_sizing_flags(sweep_cmd, sweep.sizing);
  add_threshold_flags(sweep_cmd, sweep.thresholds);
  sweep_cmd->add_option("--out", sweep.out, "output CSV path, - for stdout");
  sweep.base.n = 1'000'000;
  sweep.base.rho = 1.4;
  sweep.base.seed = 1;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) {
      cmd_generate(gen, out);
    } else if (*run_cmd) {
      run.algorithm = parse_algorithm(run_algo);
      cmd_run(run, out, err);
    } else if (*cmp_cmd) {
      cmp.algorithms = parse_algorithms(cmp_algos);
      cmd_compare(cmp, out, err);
    } else if (*sweep_cmd) {
      sweep.axis = parse_axis(axis);
      sweep.algorithms = parse_algorithms(sweep_algos);
      if (sweep.axis == SweepAxis::space) {
        sweep.sizing = SizingOptions{};
        sweep.sizing.space_bytes = 1;  // replaced per value
      } else if (!sweep.sizing.eps1 && !sweep.sizing.k1 && !sweep.sizing.s1 &&
                 !sweep.sizing.space_bytes) {
        sweep.sizing.space_bytes = 1'058'400;
      }
      cmd_sweep(sweep, out, err);
    }
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const invalid_params& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace chh::cli
