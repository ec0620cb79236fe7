#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace fwiforge::io {

/// Little-endian float32 array in C order.
struct NdArray {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t size() const noexcept;
  bool operator==(const NdArray&) const = default;
};

/// Quantizes doubles to float32. DimensionError if the count does not match shape.
NdArray make_ndarray(std::vector<std::size_t> shape, std::span<const double> values);

/// NPY v1.0 bytes laid out exactly as numpy.save writes a '<f4' C-order array.
/// DimensionError unless the array has 2, 3 or 4 axes.
std::vector<std::uint8_t> encode_npy(const NdArray& array);

/// Parses NPY v1.0/v2.0 bytes holding '<f4'. FormatError on a bad magic,
/// header or length; UnsupportedError for Fortran order or other dtypes.
NdArray decode_npy(std::span<const std::uint8_t> bytes);

void write_npy(const std::filesystem::path& path, const NdArray& array);

/// Layout of an NPY file without its payload, for streamed access.
struct NpyHeader {
  std::vector<std::size_t> shape;
  std::size_t data_offset = 0;  ///< bytes before the first element
};

/// Encoded preamble and header only (the bytes encode_npy writes before the data).
std::vector<std::uint8_t> encode_npy_header(const std::vector<std::size_t>& shape);

/// Reads and validates the header of the stream's file; the data size is
/// checked against file_size. Same errors as decode_npy.
NpyHeader read_npy_header(std::istream& in, std::size_t file_size);
NdArray read_npy(const std::filesystem::path& path);

}  // namespace fwiforge::io
