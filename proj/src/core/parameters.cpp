#include "gocc/core/parameters.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"
#include "gocc/core/rng.hpp"

namespace gocc {
namespace {

constexpr std::uint32_t kBundleVersion = 1;

std::string shape_string(std::span<const std::uint32_t> shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    out << (i ? "," : "") << shape[i];
  }
  out << ']';
  return out.str();
}

}  // namespace

std::size_t Tensor::element_count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, std::uint32_t b) { return a * b; });
}

ParameterBundle ParameterBundle::initialize(std::span<const ParameterSpec> specs,
                                            std::uint64_t seed) {
  ParameterBundle bundle;
  for (const auto& spec : specs) {
    Tensor t;
    t.shape = spec.shape;
    t.values.resize(t.element_count());
    switch (spec.init) {
      case ParameterInit::uniform_fan_in: {
        const std::uint32_t fan_in =
            spec.fan_in > 0 ? spec.fan_in : (spec.shape.empty() ? 1 : spec.shape.back());
        const double bound = spec.value / std::sqrt(static_cast<double>(std::max(1u, fan_in)));
        CounterRng rng(seed, spec.path);
        for (auto& v : t.values) {
          v = static_cast<float>(rng.uniform(-bound, bound));
        }
        break;
      }
      case ParameterInit::constant:
        std::fill(t.values.begin(), t.values.end(), static_cast<float>(spec.value));
        break;
      case ParameterInit::ssm_a_log: {
        const std::size_t cols = spec.shape.empty() ? 1 : spec.shape.back();
        for (std::size_t i = 0; i < t.values.size(); ++i) {
          t.values[i] = static_cast<float>(std::log(static_cast<double>(i % cols + 1)));
        }
        break;
      }
    }
    bundle.set(spec.path, std::move(t));
  }
  return bundle;
}

void ParameterBundle::set(std::string path, Tensor tensor) {
  if (tensor.values.size() != tensor.element_count()) {
    throw Error(ErrorCode::shape, "tensor " + path + " payload does not match its shape");
  }
  if (path.empty() || path.size() > 0xffff) {
    throw Error(ErrorCode::configuration, "parameter path length out of range");
  }
  entries_.insert_or_assign(std::move(path), std::move(tensor));
}

bool ParameterBundle::contains(std::string_view path) const {
  return entries_.find(path) != entries_.end();
}

const Tensor& ParameterBundle::at(std::string_view path) const {
  const auto it = entries_.find(path);
  if (it == entries_.end()) {
    throw Error(ErrorCode::shape, "missing parameter " + std::string(path));
  }
  return it->second;
}

const Tensor& ParameterBundle::require(std::string_view path,
                                       std::span<const std::uint32_t> shape) const {
  const Tensor& t = at(path);
  if (!std::equal(t.shape.begin(), t.shape.end(), shape.begin(), shape.end())) {
    throw Error(ErrorCode::shape, "parameter " + std::string(path) + " has shape " +
                                      shape_string(t.shape) + ", expected " + shape_string(shape));
  }
  return t;
}

MatX ParameterBundle::matrix(std::string_view path, int rows, int cols) const {
  const std::uint32_t shape[2] = {static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols)};
  const Tensor& t = require(path, shape);
  MatX m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = t.values[static_cast<std::size_t>(r) * cols + c];
    }
  }
  return m;
}

VecX ParameterBundle::vector(std::string_view path, int size) const {
  const std::uint32_t shape[1] = {static_cast<std::uint32_t>(size)};
  const Tensor& t = require(path, shape);
  VecX v(size);
  for (int i = 0; i < size; ++i) {
    v[i] = t.values[i];
  }
  return v;
}

double ParameterBundle::scalar(std::string_view path) const { return vector(path, 1)[0]; }

void ParameterBundle::validate(std::span<const ParameterSpec> specs) const {
  for (const auto& spec : specs) {
    require(spec.path, spec.shape);
  }
}

std::vector<std::uint8_t> ParameterBundle::serialize() const {
  ByteWriter w;
  w.tag("GOCW");
  w.u32(kBundleVersion);
  w.u32(static_cast<std::uint32_t>(entries_.size()));
  for (const auto& [path, t] : entries_) {
    w.u16(static_cast<std::uint16_t>(path.size()));
    w.bytes(path.data(), path.size());
    w.u8(static_cast<std::uint8_t>(t.shape.size()));
    for (const auto d : t.shape) {
      w.u32(d);
    }
    w.bytes(t.values.data(), t.values.size() * sizeof(float));
  }
  return w.take();
}

ParameterBundle ParameterBundle::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_tag("GOCW", "weight bundle");
  const std::uint64_t version_at = r.offset();
  if (const auto version = r.u32("version"); version != kBundleVersion) {
    throw FormatError(version_at, "unsupported bundle version " + std::to_string(version));
  }
  const std::uint32_t count = r.u32("entry count");
  ParameterBundle bundle;
  for (std::uint32_t e = 0; e < count; ++e) {
    const std::uint16_t len = r.u16("path length");
    const auto raw = r.take(len, "path");
    std::string path(raw.begin(), raw.end());
    Tensor t;
    const std::uint8_t rank = r.u8("rank");
    for (std::uint8_t d = 0; d < rank; ++d) {
      t.shape.push_back(r.u32("dims"));
    }
    const std::size_t n = t.element_count();
    const std::uint64_t payload_at = r.offset();
    if (n > r.remaining() / sizeof(float)) {
      throw FormatError(payload_at, "truncated payload for " + path);
    }
    t.values.resize(n);
    r.read(t.values.data(), n * sizeof(float), "payload");
    if (bundle.contains(path)) {
      throw FormatError(payload_at, "duplicate parameter " + path);
    }
    bundle.set(std::move(path), std::move(t));
  }
  if (r.remaining() != 0) {
    throw FormatError(r.offset(), "trailing bytes after last entry");
  }
  return bundle;
}

void ParameterBundle::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

ParameterBundle ParameterBundle::load(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return deserialize(bytes);
}

}  // namespace gocc
