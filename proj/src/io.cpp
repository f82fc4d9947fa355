#include "sltr/io.hpp"

#include "sltr/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace sltr::io {

namespace {

// Practical cap on tensor order; guards against garbage headers.
constexpr std::uint32_t kMaxOrder = 64;

class Writer {
 public:
  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }

  template <typename T>
  void little(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void real(double v) { little(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  void expect_magic(std::string_view magic, const char* what) {
    need(magic.size(), what);
    if (std::memcmp(in_.data() + pos_, magic.data(), magic.size()) != 0) {
      throw FormatError(std::string("bad magic for ") + what, pos_);
    }
    pos_ += magic.size();
  }

  template <typename T>
  T little(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(in_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  double real(const char* what) { return std::bit_cast<double>(little<std::uint64_t>(what)); }

  void need(std::size_t count, const char* what) const {
    if (remaining() < count) throw FormatError(std::string("truncated ") + what, pos_);
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_dims(Writer& w, const Dims& dims) {
  w.little(static_cast<std::uint32_t>(dims.size()));
  for (std::size_t d : dims) w.little(static_cast<std::uint64_t>(d));
}

Dims read_dims(Reader& r) {
  const std::size_t at = r.offset();
  const auto order = r.little<std::uint32_t>("order");
  if (order == 0 || order > kMaxOrder) throw FormatError("invalid tensor order " + std::to_string(order), at);
  Dims dims;
  std::size_t product = 1;
  for (std::uint32_t m = 0; m < order; ++m) {
    const std::size_t dim_at = r.offset();
    const auto d = r.little<std::uint64_t>("dims");
    if (d == 0) throw FormatError("zero extent in dims", dim_at);
    if (product > std::numeric_limits<std::size_t>::max() / d) throw FormatError("dims product overflows", dim_at);
    product *= d;
    dims.push_back(static_cast<std::size_t>(d));
  }
  return dims;
}

void expect_end(const Reader& r) {
  if (r.remaining() != 0) throw FormatError("trailing bytes after payload", r.offset());
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  Writer w;
  w.bytes(kTensorMagic);
  write_dims(w, t.dims());
  for (double v : t.data()) w.real(v);
  return w.take();
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_magic(kTensorMagic, "tensor file");
  Dims dims = read_dims(r);
  const std::size_t count = element_count(dims);
  if (r.remaining() / 8 < count) throw FormatError("truncated tensor payload", r.offset());
  std::vector<double> data(count);
  for (double& v : data) v = r.real("tensor payload");
  expect_end(r);
  return Tensor(std::move(dims), std::move(data));
}

std::vector<std::uint8_t> encode_dataset(const Dataset& ds) {
  Writer w;
  w.bytes(kDatasetMagic);
  w.little(kDatasetVersion);
  write_dims(w, ds.dims());
  w.little(static_cast<std::uint64_t>(ds.n()));
  const Matrix& x = ds.design();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) w.real(x(i, j));
  }
  for (Eigen::Index i = 0; i < ds.y().size(); ++i) w.real(ds.y()[i]);
  return w.take();
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_magic(kDatasetMagic, "dataset file");
  const std::size_t version_at = r.offset();
  const auto version = r.little<std::uint32_t>("version");
  if (version != kDatasetVersion) throw FormatError("unsupported dataset version " + std::to_string(version), version_at);
  Dims dims = read_dims(r);
  const std::size_t n_at = r.offset();
  const auto n = r.little<std::uint64_t>("sample count");
  if (n == 0) throw FormatError("dataset holds no samples", n_at);
  const std::size_t p = element_count(dims);
  if (p == std::numeric_limits<std::size_t>::max() || n > (r.remaining() / 8) / (p + 1)) {
    throw FormatError("truncated dataset payload", r.offset());
  }
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = r.real("dataset samples");
  }
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = r.real("dataset responses");
  expect_end(r);
  return Dataset(std::move(dims), std::move(x), std::move(y));
}

Tensor read_tensor(const std::filesystem::path& path) { return decode_tensor(slurp(path)); }

void write_tensor(const Tensor& t, const std::filesystem::path& path) { spit(encode_tensor(t), path); }

Dataset read_dataset(const std::filesystem::path& path) { return decode_dataset(slurp(path)); }

void write_dataset(const Dataset& ds, const std::filesystem::path& path) { spit(encode_dataset(ds), path); }

}  // namespace sltr::io
