#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "cqglab/linalg.hpp"

namespace cqg {

// Binary array container, format version 1. All integers little-endian.
//
//   offset 0   4 bytes   magic "CQGA"
//   offset 4   u32       format version (1)
//   offset 8   u32       dtype: 1 = complex64 (float32 re, im), 2 = complex128 (float64 re, im)
//   offset 12  u32       ndim
//   offset 16  u64[ndim] shape
//   then       payload   prod(shape) complex values, row-major, each stored as re then im,
//                        IEEE-754 little-endian
//
// Readers reject a wrong magic, an unknown version or dtype, and a payload
// whose length disagrees with the shape.
enum class DType : std::uint32_t { complex64 = 1, complex128 = 2 };

inline constexpr std::uint32_t kArrayFormatVersion = 1;

struct ArrayData {
  std::vector<std::uint64_t> shape;
  std::vector<cplx> values; // row-major
};

class ArrayFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Written to a temporary file in the same directory and renamed into place.
void write_array(const std::filesystem::path& path, const ArrayData& data,
                 DType dtype = DType::complex128);
ArrayData read_array(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const CMatrix& m,
                  DType dtype = DType::complex128);
CMatrix read_matrix(const std::filesystem::path& path);

} // namespace cqg
