// csbound: command-line driver for the lower-bound engines and the oracle.
//
// Exit status: 0 success, 1 verification failure, 2 usage, 3 capacity or I/O.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csbound/binary_engine.hpp"
#include "csbound/errors.hpp"
#include "csbound/fixtures.hpp"
#include "csbound/oracle.hpp"
#include "csbound/parallel.hpp"
#include "csbound/run_record.hpp"
#include "csbound/triplet_binary.hpp"
#include "csbound/triplet_general.hpp"

namespace {

using namespace csbound;

constexpr const char* kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void print_record(const RunRecord& r) {
  std::printf("sigma        %u\n", r.sigma);
  std::printf("d            %u\n", r.d);
  std::printf("ell          %u\n", r.ell);
  std::printf("mode         %s (%u-byte elements)\n", r.mode.c_str(), r.element_width);
  std::printf("threads      %u\n", r.threads);
  std::printf("iterations   %llu\n", static_cast<unsigned long long>(r.iterations));
  std::printf("r            %s\n", full_precision(r.r).c_str());
  std::printf("epsilon      %s\n", full_precision(r.epsilon).c_str());
  std::printf("lower_bound  %s\n", floor6(r.lower_bound).c_str());
  std::printf("wall_seconds %.3f\n", r.wall_seconds);
}

std::function<void(const IterationReport&)> progress_printer(unsigned every) {
  if (every == 0) return {};
  return [every](const IterationReport& rep) {
    if (rep.iteration % every != 0 && !rep.improved) return;
    std::fprintf(stderr, "iter %llu  R %.12f  E %.3e  best %s%s\n",
                 static_cast<unsigned long long>(rep.iteration), rep.R, rep.E,
                 floor6(rep.best_bound).c_str(), rep.improved ? "  *" : "");
  };
}

// Iteration control shared by bound and binary-bound.
struct RunFlags {
  std::optional<std::uint64_t> iters;
  double tolerance = 1e-9;
  unsigned patience = 10;
  std::uint64_t max_iterations = 200000;
  unsigned threads = 1;
  unsigned progress = 0;
  std::string csv;

  void add_to(CLI::App* cmd) {
    auto* it = cmd->add_option("--iters", iters, "Run exactly this many iterations");
    auto* conv = cmd->add_flag("--converge", "Run until the bound stops improving (default)");
    it->excludes(conv);
    cmd->add_option("--tolerance", tolerance, "Improvement below this counts as stalled")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--patience", patience, "Stalled iterations before stopping");
    cmd->add_option("--max-iters", max_iterations, "Hard cap on iterations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    cmd->add_option("--progress", progress,
                    "Print a progress line every N iterations and on improvements");
    cmd->add_option("--csv", csv, "Append the result as a CSV row");
  }

  IterationControl control(unsigned d) const {
    IterationControl c;
    if (iters) {
      if (*iters == 0) throw InvalidInput("--iters must be at least 1");
      c.n = *iters + d - 1;
    }
    c.tolerance = tolerance;
    c.patience = patience;
    c.max_iterations = max_iterations;
    c.threads = parallel::resolve_threads(threads);
    c.on_iteration = progress_printer(progress);
    return c;
  }
};

void emit(const RunRecord& rec, const RunFlags& flags) {
  print_record(rec);
  if (!flags.csv.empty()) append_csv(flags.csv, rec);
}

int cmd_bound(unsigned sigma, unsigned d, unsigned ell, const std::string& budget,
              const RunFlags& flags) {
  const Params params(sigma, d, ell);
  IterationControl control = flags.control(d);
  control.memory_budget = parse_size(budget);
  std::printf("states       %llu\n", static_cast<unsigned long long>(params.state_count()));
  const Timer timer;
  const auto result = feasible_triplet(params, control);
  emit(make_record(sigma, d, ell, result, timer.seconds(), control.threads, "ram"), flags);
  return kExitOk;
}

struct BinaryFlags {
  unsigned ell = 1;
  std::string mode = "ram";
  std::string dir;
  std::string budget = "4GiB";
  unsigned width = 8;
  bool resume = false;
  std::optional<unsigned> stop_depth;
};

StoreConfig store_config(const BinaryFlags& b) {
  StoreConfig cfg;
  cfg.mode = b.mode == "disk" ? StoreMode::disk : StoreMode::ram;
  cfg.directory = b.dir;
  cfg.element_width = b.width;
  cfg.memory_budget = parse_size(b.budget);
  cfg.stop_depth = b.stop_depth;
  cfg.resume = b.resume;
  if (cfg.mode == StoreMode::disk && cfg.directory.empty()) {
    throw InvalidInput("--mode disk needs --dir");
  }
  if (cfg.mode == StoreMode::ram && (b.resume || !b.dir.empty())) {
    throw InvalidInput("--resume and --dir need --mode disk");
  }
  return cfg;
}

int cmd_binary_bound(const BinaryFlags& b, const RunFlags& flags) {
  const StoreConfig cfg = store_config(b);
  const IterationControl control = flags.control(2);
  if (cfg.mode == StoreMode::disk) {
    const auto plan = plan_for(cfg, b.ell);
    std::printf("stop_depth   %u (%llu elements per chunk, %llu bytes on disk)\n", plan.stop_depth,
                static_cast<unsigned long long>(plan.chunk_elements),
                static_cast<unsigned long long>(disk_bytes_required(b.ell, b.width)));
  }
  const Timer timer;
  const auto result = binary_feasible_triplet(b.ell, control, cfg);
  emit(make_record(2, 2, b.ell, result, timer.seconds(), control.threads, b.mode, b.width), flags);
  return kExitOk;
}

int cmd_estimate(unsigned sigma, unsigned d, std::uint64_t n, std::uint64_t samples,
                 std::uint64_t seed, unsigned threads) {
  const Timer timer;
  const auto e = estimate_gamma(sigma, d, n, samples, seed, parallel::resolve_threads(threads));
  std::printf("sigma        %u\n", sigma);
  std::printf("d            %u\n", d);
  std::printf("n            %llu\n", static_cast<unsigned long long>(e.n));
  std::printf("samples      %llu\n", static_cast<unsigned long long>(e.samples));
  std::printf("seed         %llu\n", static_cast<unsigned long long>(e.seed));
  std::printf("generator    %s\n", kEstimateGenerator);
  std::printf("mean         %.9f\n", e.mean);
  std::printf("stderr       %.9f\n", e.standard_error);
  std::printf("wall_seconds %.3f\n", timer.seconds());
  return kExitOk;
}

struct Verifier {
  unsigned failures = 0;
  unsigned checks = 0;

  void report(bool ok, const std::string& what, const std::string& detail) {
    ++checks;
    if (!ok) ++failures;
    std::printf("%s  %s  %s\n", ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
  }

  void golden(const std::string& what, double expected, double actual, const char* note = nullptr) {
    const double diff = std::fabs(actual - expected);
    std::string detail = "expected " + floor6(expected) + " actual " + full_precision(actual) +
                         " tolerance " + full_precision(fixtures::kTolerance);
    if (note) detail += " (published value corrected: " + std::string(note) + ")";
    report(diff <= fixtures::kTolerance, what, detail);
  }
};

IterationControl verify_control(std::optional<std::uint64_t> iters, unsigned d, unsigned threads) {
  IterationControl c;
  if (iters) c.n = *iters + d - 1;
  c.threads = threads;
  return c;
}

void verify_store_dir(Verifier& v, const std::filesystem::path& dir,
                      std::optional<std::uint64_t> iters, unsigned threads) {
  const auto checkpoint = dir / detail::kCheckpoint;
  if (std::filesystem::exists(checkpoint)) {
    // Continue the run found there and hold it to the published value.
    const Metadata meta = read_metadata(checkpoint);
    const auto ell = static_cast<unsigned>(parse_u64(meta_get(meta, "ell", checkpoint), "ell"));
    const auto width =
        static_cast<unsigned>(parse_u64(meta_get(meta, "element_width", checkpoint), "width"));
    StoreConfig cfg;
    cfg.mode = StoreMode::disk;
    cfg.directory = dir;
    cfg.element_width = width;
    cfg.resume = true;
    const auto r = binary_feasible_triplet(ell, verify_control(iters, 2, threads), cfg);
    if (ell > fixtures::kBinaryByEll.size()) {
      v.report(false, "resumed store ell=" + std::to_string(ell), "no published value");
      return;
    }
    v.golden("resumed store ell=" + std::to_string(ell), fixtures::kBinaryByEll[ell - 1],
             r.lower_bound);
    return;
  }
  // Fresh disk run checked bitwise against RAM.
  const unsigned ell = 6;
  StoreConfig cfg;
  cfg.mode = StoreMode::disk;
  cfg.directory = dir;
  cfg.stop_depth = 2;
  const auto control = verify_control(iters, 2, threads);
  const auto disk = binary_feasible_triplet(ell, control, cfg);
  const auto ram = binary_feasible_triplet(ell, control);
  const bool same = disk.r == ram.r && disk.epsilon == ram.epsilon &&
                    disk.iterations_run == ram.iterations_run;
  v.report(same, "disk equals ram ell=6 stop_depth=2",
           "disk " + full_precision(disk.lower_bound) + " ram " + full_precision(ram.lower_bound));
  v.golden("disk store ell=6", fixtures::kBinaryByEll[ell - 1], disk.lower_bound);
}

int cmd_verify(bool quick, std::optional<std::uint64_t> iters, const std::string& store_dir,
               unsigned threads_flag) {
  const unsigned threads = parallel::resolve_threads(threads_flag);
  Verifier v;
  if (iters && *iters == 0) throw InvalidInput("--iters must be at least 1");
  if (!store_dir.empty()) verify_store_dir(v, store_dir, iters, threads);

  const unsigned max_binary_ell = quick ? 6 : 8;
  for (unsigned ell = 1; ell <= max_binary_ell; ++ell) {
    const auto r = binary_feasible_triplet(ell, verify_control(iters, 2, threads));
    v.golden("binary ell=" + std::to_string(ell), fixtures::kBinaryByEll[ell - 1], r.lower_bound);
  }

  const std::uint64_t max_states = quick ? (std::uint64_t{1} << 12) : (std::uint64_t{1} << 20);
  std::vector<std::pair<unsigned, double>> d2_best(11, {0, 0.0});  // per sigma: best d=2 bound
  for (const auto& cell : fixtures::general_cells()) {
    if (fixtures::cell_states(cell) > max_states) continue;
    const auto r = feasible_triplet(Params(cell.sigma, cell.d, cell.ell),
                                    verify_control(iters, cell.d, threads));
    v.golden("general sigma=" + std::to_string(cell.sigma) + " d=" + std::to_string(cell.d) +
                 " ell=" + std::to_string(cell.ell),
             cell.expected, r.lower_bound, cell.erratum);
    if (cell.d == 2 && cell.sigma < d2_best.size() && r.lower_bound > d2_best[cell.sigma].second) {
      d2_best[cell.sigma] = {cell.ell, r.lower_bound};
    }
  }

  for (unsigned ell = 1; ell <= (quick ? 3u : 5u); ++ell) {
    IterationControl c;
    c.n = 60;
    c.threads = threads;
    const auto b = binary_feasible_triplet(ell, c);
    const auto g = feasible_triplet(Params(2, 2, ell), c);
    const bool ok = std::fabs(b.r - g.r) <= 1e-12 && std::fabs(b.epsilon - g.epsilon) <= 1e-12;
    v.report(ok, "engines agree ell=" + std::to_string(ell),
             "binary (" + full_precision(b.r) + ", " + full_precision(b.epsilon) + ") general (" +
                 full_precision(g.r) + ", " + full_precision(g.epsilon) + ")");
  }

  // Dominance against Monte-Carlo estimates; d = 2 keeps the LCS cheap.
  const std::uint64_t samples = quick ? 40 : 200;
  for (unsigned sigma = 2; sigma < d2_best.size(); ++sigma) {
    if (d2_best[sigma].first == 0) continue;
    const auto e = estimate_gamma(sigma, 2, 5000, samples, 1, threads);
    const double ceiling = e.mean + 4.0 * e.standard_error;
    v.report(d2_best[sigma].second <= ceiling, "dominance sigma=" + std::to_string(sigma) + " d=2",
             "bound " + floor6(d2_best[sigma].second) + " <= estimate " +
                 full_precision(e.mean) + " + 4 * " + full_precision(e.standard_error));
  }

  std::printf("%u of %u checks passed\n", v.checks - v.failures, v.checks);
  return v.failures == 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds on Chvatal-Sankoff constants"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  unsigned sigma = 2;
  unsigned d = 2;
  unsigned ell = 1;
  std::string budget = "4GiB";
  RunFlags gen_flags;
  auto* bound = app.add_subcommand("bound", "General engine for any sigma, d, ell");
  bound->add_option("--sigma", sigma, "Alphabet size")->required();
  bound->add_option("--d", d, "Number of strings")->required();
  bound->add_option("--ell", ell, "String length")->required();
  bound->add_option("--budget", budget, "RAM budget, e.g. 4GiB");
  gen_flags.add_to(bound);

  BinaryFlags bin;
  RunFlags bin_flags;
  auto* binary = app.add_subcommand("binary-bound", "Binary engine (sigma = 2, d = 2)");
  binary->add_option("--ell", bin.ell, "String length")->required();
  binary->add_option("--mode", bin.mode, "ram or disk")->check(CLI::IsMember({"ram", "disk"}));
  binary->add_option("--dir", bin.dir, "Directory for disk-mode vectors and checkpoints");
  binary->add_option("--budget", bin.budget, "Memory per chunk in disk mode, e.g. 16MiB");
  binary->add_option("--width", bin.width, "Bytes per stored value in disk mode (4 or 8)")
      ->check(CLI::IsMember({4, 8}));
  binary->add_flag("--resume", bin.resume, "Continue from the checkpoint in --dir");
  binary->add_option("--stop-depth", bin.stop_depth, "Force the recursion depth");
  bin_flags.add_to(binary);

  std::uint64_t n = 1000;
  std::uint64_t samples = 100;
  std::uint64_t seed = 1;
  unsigned est_threads = 1;
  unsigned est_sigma = 2;
  unsigned est_d = 2;
  auto* estimate = app.add_subcommand("estimate", "Monte-Carlo estimate of E[LCS]/n");
  estimate->add_option("--sigma", est_sigma, "Alphabet size");
  estimate->add_option("--d", est_d, "Number of strings");
  estimate->add_option("--n", n, "String length");
  estimate->add_option("--samples", samples, "Number of random tuples");
  estimate->add_option("--seed", seed, "Seed");
  estimate->add_option("--threads", est_threads, "Worker threads (0 = all cores)");

  bool quick = false;
  std::optional<std::uint64_t> verify_iters;
  std::string store_dir;
  unsigned verify_threads = 1;
  auto* verify = app.add_subcommand("verify", "Check the engines against the golden fixtures");
  verify->add_flag("--quick", quick, "Small instances only");
  verify->add_option("--iters", verify_iters, "Run every instance for this many iterations");
  verify->add_option("--store-dir", store_dir,
                     "Resume the disk run found here, or run a disk check in it");
  verify->add_option("--threads", verify_threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::fprintf(stderr, "csbound %s: %s\n", kVersion, command_line(argc, argv).c_str());
  try {
    if (*bound) return cmd_bound(sigma, d, ell, budget, gen_flags);
    if (*binary) return cmd_binary_bound(bin, bin_flags);
    if (*estimate) return cmd_estimate(est_sigma, est_d, n, samples, seed, est_threads);
    if (*verify) return cmd_verify(quick, verify_iters, store_dir, verify_threads);
  } catch (const InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return kExitResource;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitResource;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  }
  return kExitUsage;
}
