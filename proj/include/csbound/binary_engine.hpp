#pragma once

// binary_feasible_triplet: the sigma = 2, d = 2 iteration in RAM or on disk.
//
// Disk layout in StoreConfig::directory:
//   gen-a.bin, gen-b.bin, gen-c.bin   three generation files (+ .meta sidecars)
//   checkpoint.meta                   which file plays v0 / v1 / scratch, and
//                                     the tracker state
//   u.bin                             best u when IterationControl::keep_u
//
// Generations rotate by relabeling in checkpoint.meta; data is never copied.
// The checkpoint is rewritten twice per iteration: after the new generation
// and R exist (phase "w-pending", the old v0 is now scratch) and after E has
// been recorded (phase "complete"). Either state can be resumed.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>
#include <string>

#include "csbound/errors.hpp"
#include "csbound/external_passes.hpp"
#include "csbound/triplet.hpp"
#include "csbound/triplet_binary.hpp"
#include "csbound/vector_store.hpp"

namespace csbound {

// Called with every new generation (1-based iteration count).
using GenerationObserver = std::function<void(std::uint64_t, VectorStore&)>;

inline std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

inline double parse_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw IoError("bad number for " + what + ": " + text);
  return v;
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end == text.c_str() || *end != '\0') {
    throw IoError("bad integer for " + what + ": " + text);
  }
  return v;
}

namespace detail {

inline const char* const kGenerationFiles[3] = {"gen-a.bin", "gen-b.bin", "gen-c.bin"};
inline constexpr const char* kCheckpoint = "checkpoint.meta";

struct DiskState {
  std::string v0, v1, scratch;
  bool w_pending = false;
  double pending_R = 0.0;
  BestTracker::State tracker;
};

inline void save_checkpoint(const std::filesystem::path& dir, unsigned ell, unsigned width,
                            const DiskState& s) {
  Metadata m = generation_metadata(ell, width, s.tracker.iteration);
  m["v0"] = s.v0;
  m["v1"] = s.v1;
  m["scratch"] = s.scratch;
  m["phase"] = s.w_pending ? "w-pending" : "complete";
  m["pending_R"] = hex_double(s.pending_R);
  m["best_r"] = hex_double(s.tracker.best_r);
  m["best_epsilon"] = hex_double(s.tracker.best_epsilon);
  m["best_iteration"] = std::to_string(s.tracker.best_iteration);
  m["stalled"] = std::to_string(s.tracker.stalled);
  write_metadata(dir / kCheckpoint, m);
}

inline DiskState load_checkpoint(const std::filesystem::path& dir, unsigned ell, unsigned width) {
  const auto path = dir / kCheckpoint;
  const Metadata m = read_metadata(path);
  const auto get = [&](const char* k) -> const std::string& { return meta_get(m, k, path); };
  if (get("sigma") != "2" || get("d") != "2" || get("symmetry") != "half") {
    throw IoError(path.string() + " does not describe a binary run");
  }
  if (parse_u64(get("ell"), "ell") != ell) {
    throw ConfigError("checkpoint is for ell " + get("ell") + ", requested " + std::to_string(ell));
  }
  if (parse_u64(get("element_width"), "element_width") != width) {
    throw ConfigError("checkpoint uses element width " + get("element_width") + ", requested " +
                      std::to_string(width));
  }
  DiskState s;
  s.v0 = get("v0");
  s.v1 = get("v1");
  s.scratch = get("scratch");
  for (const auto* name : {&s.v0, &s.v1, &s.scratch}) {
    if (std::find(std::begin(kGenerationFiles), std::end(kGenerationFiles), *name) ==
        std::end(kGenerationFiles)) {
      throw IoError(path.string() + ": unknown generation file '" + *name + "'");
    }
  }
  const std::string& phase = get("phase");
  if (phase != "w-pending" && phase != "complete") {
    throw IoError(path.string() + ": unknown phase '" + phase + "'");
  }
  s.w_pending = phase == "w-pending";
  s.pending_R = parse_double(get("pending_R"), "pending_R");
  s.tracker.iteration = parse_u64(get("iteration"), "iteration");
  s.tracker.best_r = parse_double(get("best_r"), "best_r");
  s.tracker.best_epsilon = parse_double(get("best_epsilon"), "best_epsilon");
  s.tracker.best_iteration = parse_u64(get("best_iteration"), "best_iteration");
  s.tracker.stalled = static_cast<unsigned>(parse_u64(get("stalled"), "stalled"));
  return s;
}

inline void copy_store(VectorStore& from, VectorStore& to, std::uint64_t block) {
  for (std::uint64_t s = 0; s < from.size(); s += block) {
    auto buf = buffer(0, std::min(block, from.size() - s));
    from.read_block(s, buf);
    to.write_block(s, buf);
  }
  to.flush();
}

inline void check_disk_space(const std::filesystem::path& dir, unsigned ell, unsigned width) {
  const std::uint64_t need = disk_bytes_required(ell, width);
  std::uint64_t reclaim = 0;
  for (const char* f : kGenerationFiles) {
    std::error_code ec;
    const auto sz = std::filesystem::file_size(dir / f, ec);
    if (!ec) reclaim += sz;
  }
  std::error_code ec;
  const auto info = std::filesystem::space(dir, ec);
  if (ec) throw IoError("cannot query free space of " + dir.string() + ": " + ec.message());
  if (info.available + reclaim < need) {
    throw CapacityError("disk mode for ell " + std::to_string(ell) + " needs " +
                        std::to_string(need) + " bytes in " + dir.string() + ", only " +
                        std::to_string(info.available + reclaim) + " available");
  }
}

inline TripletResult binary_disk(unsigned ell, const IterationControl& control,
                                 const StoreConfig& config, const GenerationObserver& observer) {
  namespace fs = std::filesystem;
  const fs::path dir = config.directory;
  if (dir.empty()) throw ConfigError("disk mode needs a directory");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const unsigned width = config.element_width;
  const PassContext ctx{ell, plan_for(config, ell), control.threads};
  const std::uint64_t half = half_size(ell);
  BestTracker tracker(2, control);

  DiskState st;
  if (config.resume) {
    st = load_checkpoint(dir, ell, width);
    tracker.restore(st.tracker);
    // Fail now rather than at first use if a generation file was damaged.
    for (const char* f : kGenerationFiles) FileStore(dir / f, half, width, FileStore::Open::existing);
  } else {
    check_disk_space(dir, ell, width);
    st.v0 = kGenerationFiles[0];
    st.v1 = kGenerationFiles[1];
    st.scratch = kGenerationFiles[2];
    for (const char* f : kGenerationFiles) {
      FileStore(dir / f, half, width, FileStore::Open::create);
      write_metadata(sidecar_path(dir / f), generation_metadata(ell, width, 0));
    }
    st.tracker = tracker.state();
    save_checkpoint(dir, ell, width, st);
  }

  const auto open = [&](const std::string& name) {
    return std::make_unique<FileStore>(dir / name, half, width, FileStore::Open::existing);
  };

  // E for the generation now labelled v1, using the scratch file.
  const auto finish_iteration = [&](double R) {
    auto v1 = open(st.v1);
    auto scratch = open(st.scratch);
    external_apply_F(*v1, *v1, *scratch, ctx, R, 0.0);
    const double twoR = 2.0 * R;
    const double W = stream_max(*v1, *scratch, ctx, [&](double a, double b) { return (a + twoR) - b; });
    const double E = std::max(0.0, W);
    if (tracker.record(R, E) && control.keep_u) {
      FileStore u(dir / "u.bin", half, width, FileStore::Open::create);
      copy_store(*v1, u, detail::stream_block(ctx));
      write_metadata(sidecar_path(dir / "u.bin"), generation_metadata(ell, width, tracker.state().iteration));
    }
    st.w_pending = false;
    st.tracker = tracker.state();
    save_checkpoint(dir, ell, width, st);
    if (control.on_iteration) control.on_iteration(tracker.report());
  };

  if (st.w_pending) finish_iteration(st.pending_R);

  while (!tracker.done()) {
    {
      auto v0 = open(st.v0);
      auto v1 = open(st.v1);
      auto out = open(st.scratch);
      external_apply_F(*v1, *v0, *out, ctx);
      write_metadata(sidecar_path(dir / st.scratch),
                     generation_metadata(ell, width, tracker.state().iteration + 1));
      st.pending_R = stream_max(*out, *v1, ctx, [](double a, double b) { return a - b; });
    }
    // v0 <- v1, v1 <- new generation; the old v0 becomes scratch.
    std::string old_v0 = st.v0;
    st.v0 = st.v1;
    st.v1 = st.scratch;
    st.scratch = old_v0;
    st.w_pending = true;
    st.tracker = tracker.state();
    save_checkpoint(dir, ell, width, st);
    if (observer) {
      auto latest = open(st.v1);
      observer(st.tracker.iteration + 1, *latest);
    }
    finish_iteration(st.pending_R);
  }
  return tracker.result();
}

}  // namespace detail

inline TripletResult binary_feasible_triplet(unsigned ell, const IterationControl& control,
                                             const StoreConfig& config = {},
                                             const GenerationObserver& observer = {}) {
  check_binary_ell(ell);
  check_element_width(config.element_width);
  if (config.mode == StoreMode::disk) return detail::binary_disk(ell, control, config, observer);
  if (config.element_width != 8) throw ConfigError("RAM mode stores 8-byte elements only");
  if (config.resume) throw ConfigError("resume needs disk mode");
  std::function<void(std::uint64_t, std::span<double>)> hook;
  if (observer) {
    hook = [&](std::uint64_t it, std::span<double> v) {
      SpanStore s(v);
      observer(it, s);
    };
  }
  return binary_feasible_triplet_ram(ell, control, config.memory_budget, hook);
}

}  // namespace csbound
