#pragma once

// One completed run, as printed by the CLI and appended to CSV files.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include "csbound/errors.hpp"
#include "csbound/triplet.hpp"

namespace csbound {

struct RunRecord {
  unsigned sigma = 2;
  unsigned d = 2;
  unsigned ell = 1;
  std::uint64_t iterations = 0;
  double r = 0.0;
  double epsilon = 0.0;
  double lower_bound = 0.0;
  double wall_seconds = 0.0;
  unsigned threads = 1;
  std::string mode = "ram";
  unsigned element_width = 8;
  std::optional<std::uint64_t> seed;
};

inline RunRecord make_record(unsigned sigma, unsigned d, unsigned ell, const TripletResult& t,
                             double seconds, unsigned threads, std::string mode,
                             unsigned width = 8) {
  RunRecord rec;
  rec.sigma = sigma;
  rec.d = d;
  rec.ell = ell;
  rec.iterations = t.iterations_run;
  rec.r = t.r;
  rec.epsilon = t.epsilon;
  rec.lower_bound = t.lower_bound;
  rec.wall_seconds = seconds;
  rec.threads = threads;
  rec.mode = std::move(mode);
  rec.element_width = width;
  return rec;
}

inline constexpr const char* kCsvHeader =
    "sigma,d,ell,iterations,r,epsilon,lower_bound,wall_seconds,threads,mode";

// Six decimals, rounded toward minus infinity so a printed bound never
// overstates the computed one.
inline std::string floor6(double v) {
  double t = std::floor(v * 1e6);
  // v * 1e6 is itself rounded; settle on the largest t with t / 1e6 <= v.
  if ((t + 1.0) / 1e6 <= v) t += 1.0;
  if (t / 1e6 > v) t -= 1.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t / 1e6);
  return buf;
}

inline std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_row(const RunRecord& r) {
  return std::to_string(r.sigma) + "," + std::to_string(r.d) + "," + std::to_string(r.ell) + "," +
         std::to_string(r.iterations) + "," + full_precision(r.r) + "," +
         full_precision(r.epsilon) + "," + full_precision(r.lower_bound) + "," +
         full_precision(r.wall_seconds) + "," + std::to_string(r.threads) + "," + r.mode;
}

// Appends one row, writing the header first when the file is new or empty.
inline void append_csv(const std::filesystem::path& path, const RunRecord& r) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path.string() + " for appending");
  if (fresh) out << kCsvHeader << '\n';
  out << csv_row(r) << '\n';
  if (!out) throw IoError("write to " + path.string() + " failed");
}

// "1048576", "64KiB", "16MiB", "2GiB", "1TiB" (also K/M/G/T and KB/MB/GB/TB
// as binary multiples).
inline std::uint64_t parse_size(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == 0) throw InvalidInput("bad size '" + text + "'");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < pos; ++i) {
    const unsigned digit = static_cast<unsigned>(text[i] - '0');
    if (value > (UINT64_MAX - digit) / 10) throw InvalidInput("size '" + text + "' overflows");
    value = value * 10 + digit;
  }
  std::string unit = text.substr(pos);
  for (auto& c : unit) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  unsigned shift = 0;
  if (unit.empty() || unit == "B") {
    shift = 0;
  } else if (unit == "K" || unit == "KB" || unit == "KIB") {
    shift = 10;
  } else if (unit == "M" || unit == "MB" || unit == "MIB") {
    shift = 20;
  } else if (unit == "G" || unit == "GB" || unit == "GIB") {
    shift = 30;
  } else if (unit == "T" || unit == "TB" || unit == "TIB") {
    shift = 40;
  } else {
    throw InvalidInput("unknown size unit in '" + text + "'");
  }
  if (shift && value > (UINT64_MAX >> shift)) throw InvalidInput("size '" + text + "' overflows");
  return value << shift;
}

}  // namespace csbound
