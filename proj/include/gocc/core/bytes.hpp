#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gocc/core/error.hpp"

namespace gocc {

static_assert(std::endian::native == std::endian::little,
              "binary codecs assume a little-endian host");

class ByteWriter {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  void tag(std::string_view four_cc) { bytes(four_cc.data(), four_cc.size()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { bytes(&v, sizeof v); }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f32(float v) { bytes(&v, sizeof v); }

  std::vector<std::uint8_t>& buffer() { return out_; }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

// Bounds-checked little-endian reader; every failure names the byte offset.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data, std::uint64_t base = 0)
      : data_(data), base_(base) {}

  std::uint64_t offset() const { return base_ + pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw FormatError(offset(), std::string("truncated input reading ") + what);
    }
  }
  void expect_tag(std::string_view four_cc, const char* what) {
    need(four_cc.size(), what);
    if (std::memcmp(data_.data() + pos_, four_cc.data(), four_cc.size()) != 0) {
      throw FormatError(offset(), std::string("bad magic for ") + what);
    }
    pos_ += four_cc.size();
  }
  void read(void* out, std::size_t n, const char* what) {
    need(n, what);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8(const char* what) { std::uint8_t v; read(&v, sizeof v, what); return v; }
  std::uint16_t u16(const char* what) { std::uint16_t v; read(&v, sizeof v, what); return v; }
  std::uint32_t u32(const char* what) { std::uint32_t v; read(&v, sizeof v, what); return v; }
  std::uint64_t u64(const char* what) { std::uint64_t v; read(&v, sizeof v, what); return v; }
  float f32(const char* what) { float v; read(&v, sizeof v, what); return v; }
  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::uint64_t base_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// 64-bit FNV-1a digest rendered as 16 hex digits.
std::string hex_digest(std::span<const std::uint8_t> bytes);

}  // namespace gocc
