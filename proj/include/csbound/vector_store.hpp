#pragma once

// Storage for symmetry-halved binary vectors, in RAM or in raw files.
//
// A file holds the stored half as headerless little-endian IEEE values
// (4 or 8 bytes each), index 0 first, so element i lives at byte i * width.
// A sidecar "<file>.meta" of key:value lines describes the contents.

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/params.hpp"

namespace csbound {

enum class StoreMode { ram, disk };

struct StoreConfig {
  StoreMode mode = StoreMode::ram;
  std::filesystem::path directory;
  unsigned element_width = 8;
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
  // Forces the recursion depth instead of deriving it from the budget.
  std::optional<unsigned> stop_depth;
  // Continue from the checkpoint found in `directory`.
  bool resume = false;
};

struct ChunkPlan {
  unsigned stop_depth = 0;
  std::uint64_t chunk_count = 1;     // leaves per loop range, 4^stop_depth
  std::uint64_t chunk_elements = 0;  // outputs per leaf
};

inline void check_element_width(unsigned width) {
  if (width != 4 && width != 8) {
    throw ConfigError("element width must be 4 or 8 bytes, got " + std::to_string(width));
  }
}

// Leaf at depth k covers 2^(2(l-k)-2) outputs and reads twice as many inputs.
inline std::uint64_t leaf_outputs(unsigned ell, unsigned depth) {
  return std::uint64_t{1} << (2 * (ell - depth) - 2);
}

inline ChunkPlan plan_at_depth(unsigned ell, unsigned depth) {
  check_binary_ell(ell);
  if (depth > ell - 1) {
    throw ConfigError("stop depth " + std::to_string(depth) + " exceeds " +
                      std::to_string(ell - 1) + " for ell " + std::to_string(ell));
  }
  return ChunkPlan{depth, std::uint64_t{1} << (2 * depth), leaf_outputs(ell, depth)};
}

// Smallest stop depth whose leaf (input window plus output block) fits.
inline ChunkPlan plan_recursion(unsigned ell, unsigned element_width, std::uint64_t memory_budget) {
  check_binary_ell(ell);
  check_element_width(element_width);
  for (unsigned depth = 0; depth < ell; ++depth) {
    const std::uint64_t n = leaf_outputs(ell, depth);
    if (n <= memory_budget / (3 * element_width)) return plan_at_depth(ell, depth);
  }
  throw ConfigError("memory budget of " + std::to_string(memory_budget) +
                    " bytes cannot hold even a single recursion leaf (" +
                    std::to_string(3 * element_width) + " bytes)");
}

inline ChunkPlan plan_for(const StoreConfig& config, unsigned ell) {
  if (config.stop_depth) return plan_at_depth(ell, *config.stop_depth);
  return plan_recursion(ell, config.element_width, config.memory_budget);
}

inline std::uint64_t disk_bytes_required(unsigned ell, unsigned element_width) {
  check_binary_ell(ell);
  return 3 * std::uint64_t{element_width} * (std::uint64_t{1} << (2 * ell - 1));
}

class VectorStore {
 public:
  virtual ~VectorStore() = default;
  virtual std::uint64_t size() const = 0;
  virtual void read_block(std::uint64_t offset, std::span<double> out) = 0;
  virtual void write_block(std::uint64_t offset, std::span<const double> values) = 0;
  virtual void flush() {}

 protected:
  void check_range(std::uint64_t offset, std::uint64_t count, const char* what) const {
    if (offset > size() || count > size() - offset) {
      throw InvalidInput(std::string(what) + " of " + std::to_string(count) +
                         " elements at offset " + std::to_string(offset) +
                         " exceeds store size " + std::to_string(size()));
    }
  }
};

// A store over caller-owned memory.
class SpanStore : public VectorStore {
 public:
  explicit SpanStore(std::span<double> data) : data_(data) {}

  std::uint64_t size() const override { return data_.size(); }

  void read_block(std::uint64_t offset, std::span<double> out) override {
    check_range(offset, out.size(), "read");
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(offset), out.size(), out.begin());
  }

  void write_block(std::uint64_t offset, std::span<const double> values) override {
    check_range(offset, values.size(), "write");
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(offset));
  }

 private:
  std::span<double> data_;
};

class RamStore : public SpanStore {
 public:
  explicit RamStore(std::uint64_t n) : RamStore(std::vector<double>(n, 0.0)) {}
  explicit RamStore(std::vector<double> values)
      : SpanStore(std::span<double>()), values_(std::move(values)) {
    static_cast<SpanStore&>(*this) = SpanStore(values_);
  }
  RamStore(const RamStore&) = delete;
  RamStore& operator=(const RamStore&) = delete;

  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Wraps another store and logs every request.
class RecordingStore : public VectorStore {
 public:
  enum class Op { read, write };
  struct Access {
    Op op;
    std::uint64_t offset;
    std::uint64_t count;
  };

  explicit RecordingStore(VectorStore& inner) : inner_(inner) {}

  std::uint64_t size() const override { return inner_.size(); }

  void read_block(std::uint64_t offset, std::span<double> out) override {
    log_.push_back({Op::read, offset, out.size()});
    inner_.read_block(offset, out);
  }

  void write_block(std::uint64_t offset, std::span<const double> values) override {
    log_.push_back({Op::write, offset, values.size()});
    inner_.write_block(offset, values);
  }

  void flush() override { inner_.flush(); }

  const std::vector<Access>& log() const { return log_; }
  void clear() { log_.clear(); }

 private:
  VectorStore& inner_;
  std::vector<Access> log_;
};

namespace detail {

inline std::string errno_text() { return std::strerror(errno); }

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

}  // namespace detail

// Raw file of `count` elements of `width` bytes.
class FileStore : public VectorStore {
 public:
  enum class Open { create, existing };

  FileStore(std::filesystem::path path, std::uint64_t count, unsigned width, Open how)
      : path_(std::move(path)), count_(count), width_(width) {
    check_element_width(width);
    const int flags = how == Open::create ? (O_RDWR | O_CREAT | O_TRUNC) : O_RDWR;
    fd_ = ::open(path_.c_str(), flags, 0644);
    if (fd_ < 0) throw IoError("cannot open " + path_.string() + ": " + detail::errno_text());
    const std::uint64_t bytes = count * width;
    if (how == Open::create) {
      if (::ftruncate(fd_, static_cast<off_t>(bytes)) != 0) {
        const std::string why = detail::errno_text();
        ::close(fd_);
        throw IoError("cannot size " + path_.string() + " to " + std::to_string(bytes) +
                      " bytes: " + why);
      }
    } else {
      struct stat st {};
      if (::fstat(fd_, &st) != 0 || static_cast<std::uint64_t>(st.st_size) != bytes) {
        const std::uint64_t actual = static_cast<std::uint64_t>(st.st_size);
        ::close(fd_);
        throw IoError(path_.string() + " holds " + std::to_string(actual) + " bytes, expected " +
                      std::to_string(bytes) + " (" + std::to_string(count) + " elements of " +
                      std::to_string(width) + " bytes)");
      }
    }
  }

  FileStore(const FileStore&) = delete;
  FileStore& operator=(const FileStore&) = delete;
  ~FileStore() override {
    if (fd_ >= 0) ::close(fd_);
  }

  std::uint64_t size() const override { return count_; }
  unsigned width() const { return width_; }
  const std::filesystem::path& path() const { return path_; }

  void read_block(std::uint64_t offset, std::span<double> out) override {
    check_range(offset, out.size(), "read");
    bytes_.resize(out.size() * width_);
    transfer(offset, bytes_.data(), bytes_.size(), false);
    if (width_ == 8) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t raw;
        std::memcpy(&raw, bytes_.data() + i * 8, 8);
        out[i] = std::bit_cast<double>(detail::to_little(raw));
      }
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint32_t raw;
        std::memcpy(&raw, bytes_.data() + i * 4, 4);
        out[i] = static_cast<double>(std::bit_cast<float>(detail::to_little(raw)));
      }
    }
  }

  void write_block(std::uint64_t offset, std::span<const double> values) override {
    check_range(offset, values.size(), "write");
    bytes_.resize(values.size() * width_);
    if (width_ == 8) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto raw = detail::to_little(std::bit_cast<std::uint64_t>(values[i]));
        std::memcpy(bytes_.data() + i * 8, &raw, 8);
      }
    } else {
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto raw =
            detail::to_little(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
        std::memcpy(bytes_.data() + i * 4, &raw, 4);
      }
    }
    transfer(offset, bytes_.data(), bytes_.size(), true);
  }

  void flush() override {
    if (::fsync(fd_) != 0) throw IoError("fsync " + path_.string() + ": " + detail::errno_text());
  }

 private:
  void transfer(std::uint64_t offset, unsigned char* data, std::size_t n, bool write) {
    std::uint64_t pos = offset * width_;
    while (n > 0) {
      const ssize_t got = write ? ::pwrite(fd_, data, n, static_cast<off_t>(pos))
                                : ::pread(fd_, data, n, static_cast<off_t>(pos));
      if (got < 0 && errno == EINTR) continue;
      if (got <= 0) {
        throw IoError(std::string(write ? "short write to " : "short read from ") +
                      path_.string() + " at byte " + std::to_string(pos) +
                      (got < 0 ? ": " + detail::errno_text() : std::string(": end of file")));
      }
      data += got;
      n -= static_cast<std::size_t>(got);
      pos += static_cast<std::uint64_t>(got);
    }
  }

  std::filesystem::path path_;
  std::uint64_t count_;
  unsigned width_;
  int fd_ = -1;
  std::vector<unsigned char> bytes_;
};

// key:value metadata files.
using Metadata = std::map<std::string, std::string>;

inline void write_metadata(const std::filesystem::path& path, const Metadata& meta) {
  // Written to a temporary and renamed so a crash never leaves a torn file.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    for (const auto& [k, v] : meta) out << k << ':' << v << '\n';
    out.flush();
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Metadata meta;
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected key:value");
    }
    meta[line.substr(0, colon)] = line.substr(colon + 1);
  }
  return meta;
}

inline const std::string& meta_get(const Metadata& meta, const std::string& key,
                                   const std::filesystem::path& source) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw IoError(source.string() + ": missing key '" + key + "'");
  return it->second;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& data) {
  return std::filesystem::path(data.string() + ".meta");
}

// Sidecar contents for one stored generation of the binary engine.
inline Metadata generation_metadata(unsigned ell, unsigned width, std::uint64_t iteration) {
  return Metadata{{"sigma", "2"},
                  {"d", "2"},
                  {"ell", std::to_string(ell)},
                  {"element_width", std::to_string(width)},
                  {"iteration", std::to_string(iteration)},
                  {"symmetry", "half"}};
}

}  // namespace csbound
