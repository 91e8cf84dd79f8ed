#include "cqglab/array_file.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <unistd.h>

namespace cqg {

namespace {

constexpr char kMagic[4] = {'C', 'Q', 'G', 'A'};

template <typename U>
void put_le(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename U>
U get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(U) > in.size()) throw ArrayFormatError("truncated array file");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    v |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(U);
  return v;
}

void put_double(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  put_le(out, bits);
}

void put_float(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  put_le(out, bits);
}

double get_double(const std::string& in, std::size_t& pos) {
  std::uint64_t bits = get_le<std::uint64_t>(in, pos);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

float get_float(const std::string& in, std::size_t& pos) {
  std::uint32_t bits = get_le<std::uint32_t>(in, pos);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

std::atomic<unsigned> temp_counter{0};

} // namespace

void write_array(const std::filesystem::path& path, const ArrayData& data, DType dtype) {
  std::uint64_t count = 1;
  for (auto s : data.shape) count *= s;
  if (count != data.values.size()) throw ArrayFormatError("shape does not match value count");

  std::string buf(kMagic, 4);
  put_le<std::uint32_t>(buf, kArrayFormatVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(dtype));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(data.shape.size()));
  for (auto s : data.shape) put_le<std::uint64_t>(buf, s);
  for (const cplx& z : data.values) {
    if (dtype == DType::complex64) {
      put_float(buf, static_cast<float>(z.real()));
      put_float(buf, static_cast<float>(z.imag()));
    } else {
      put_double(buf, z.real());
      put_double(buf, z.imag());
    }
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(temp_counter++);
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ArrayFormatError("cannot write " + tmp.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ArrayFormatError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ArrayData read_array(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArrayFormatError("cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw ArrayFormatError(path.string() + ": not an array file");
  std::size_t pos = 4;
  auto version = get_le<std::uint32_t>(buf, pos);
  if (version != kArrayFormatVersion)
    throw ArrayFormatError(path.string() + ": unsupported format version " + std::to_string(version));
  auto dtype = get_le<std::uint32_t>(buf, pos);
  if (dtype != 1 && dtype != 2) throw ArrayFormatError(path.string() + ": unknown dtype");
  auto ndim = get_le<std::uint32_t>(buf, pos);
  ArrayData data;
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    data.shape.push_back(get_le<std::uint64_t>(buf, pos));
    count *= data.shape.back();
  }
  const std::size_t width = dtype == 1 ? 8 : 16;
  if (buf.size() - pos != count * width)
    throw ArrayFormatError(path.string() + ": payload length does not match shape");
  data.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (dtype == 1) {
      float re = get_float(buf, pos);
      float im = get_float(buf, pos);
      data.values.emplace_back(re, im);
    } else {
      double re = get_double(buf, pos);
      double im = get_double(buf, pos);
      data.values.emplace_back(re, im);
    }
  }
  return data;
}

void write_matrix(const std::filesystem::path& path, const CMatrix& m, DType dtype) {
  ArrayData data;
  data.shape = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  data.values.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.values.push_back(m(i, j));
  write_array(path, data, dtype);
}

CMatrix read_matrix(const std::filesystem::path& path) {
  ArrayData data = read_array(path);
  if (data.shape.size() != 2) throw ArrayFormatError(path.string() + ": expected a matrix");
  CMatrix m(data.shape[0], data.shape[1]);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = data.values[k++];
  return m;
}

} // namespace cqg
