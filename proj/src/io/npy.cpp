#include "fwiforge/io/npy.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <istream>
#include <string>
#include <utility>

#include "fwiforge/core/errors.hpp"

namespace fwiforge::io {

static_assert(std::endian::native == std::endian::little, "NPY writer assumes a little-endian host");

namespace {

constexpr std::uint8_t kMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kAlign = 64;
constexpr std::size_t kGrowthDigits = 21;  // numpy's GROWTH_AXIS_MAX_DIGITS

std::string shape_repr(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  return s + ")";
}

std::size_t skip_ws(const std::string& h, std::size_t p) {
  while (p < h.size() && (h[p] == ' ' || h[p] == '\t' || h[p] == '\n')) ++p;
  return p;
}

// Value text following 'key': in the header dict.
std::size_t find_value(const std::string& h, const std::string& key) {
  const std::string k1 = "'" + key + "'";
  const std::string k2 = "\"" + key + "\"";
  std::size_t p = h.find(k1);
  std::size_t len = k1.size();
  if (p == std::string::npos) {
    p = h.find(k2);
    len = k2.size();
  }
  if (p == std::string::npos) throw FormatError("npy: header lacks '" + key + "'");
  p = skip_ws(h, p + len);
  if (p >= h.size() || h[p] != ':') throw FormatError("npy: malformed header near '" + key + "'");
  return skip_ws(h, p + 1);
}

struct Header {
  std::string descr;
  bool fortran = false;
  std::vector<std::size_t> shape;
};

Header parse_header(const std::string& h) {
  if (h.empty() || h.front() != '{') throw FormatError("npy: header is not a dict");
  Header out;
  std::size_t p = find_value(h, "descr");
  if (p >= h.size() || (h[p] != '\'' && h[p] != '"')) throw FormatError("npy: bad descr");
  const char q = h[p];
  const std::size_t e = h.find(q, p + 1);
  if (e == std::string::npos) throw FormatError("npy: unterminated descr");
  out.descr = h.substr(p + 1, e - p - 1);

  p = find_value(h, "fortran_order");
  if (h.compare(p, 4, "True") == 0) {
    out.fortran = true;
  } else if (h.compare(p, 5, "False") != 0) {
    throw FormatError("npy: bad fortran_order");
  }

  p = find_value(h, "shape");
  if (p >= h.size() || h[p] != '(') throw FormatError("npy: bad shape");
  const std::size_t close = h.find(')', p);
  if (close == std::string::npos) throw FormatError("npy: unterminated shape");
  std::size_t i = p + 1;
  while (i < close) {
    i = skip_ws(h, i);
    if (i >= close) break;
    if (h[i] < '0' || h[i] > '9') throw FormatError("npy: bad shape entry");
    std::size_t v = 0;
    while (i < close && h[i] >= '0' && h[i] <= '9') v = v * 10 + static_cast<std::size_t>(h[i++] - '0');
    out.shape.push_back(v);
    i = skip_ws(h, i);
    if (i < close && h[i] == ',') ++i;
  }
  return out;
}

}  // namespace

std::size_t NdArray::size() const noexcept {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

NdArray make_ndarray(std::vector<std::size_t> shape, std::span<const double> values) {
  NdArray a{std::move(shape), {}};
  if (a.size() != values.size()) {
    throw DimensionError("make_ndarray: shape holds " + std::to_string(a.size()) +
                         " elements, got " + std::to_string(values.size()));
  }
  a.data.resize(values.size());
  std::transform(values.begin(), values.end(), a.data.begin(),
                 [](double v) { return static_cast<float>(v); });
  return a;
}

std::vector<std::uint8_t> encode_npy_header(const std::vector<std::size_t>& shape) {
  if (shape.size() < 2 || shape.size() > 4) {
    throw DimensionError("write_npy: arrays must have 2 to 4 axes, got " +
                         std::to_string(shape.size()));
  }
  std::string header =
      "{'descr': '<f4', 'fortran_order': False, 'shape': " + shape_repr(shape) + ", }";
  header.append(kGrowthDigits - std::to_string(shape.front()).size(), ' ');
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
  header.push_back('\n');
  if (header.size() > 0xFFFF) throw UnsupportedError("write_npy: header too long for v1.0");

  std::vector<std::uint8_t> out;
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xFF));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  return out;
}

std::vector<std::uint8_t> encode_npy(const NdArray& a) {
  std::vector<std::uint8_t> out = encode_npy_header(a.shape);
  if (a.size() != a.data.size()) throw DimensionError("write_npy: shape/data size mismatch");
  const auto* raw = reinterpret_cast<const std::uint8_t*>(a.data.data());
  out.insert(out.end(), raw, raw + 4 * a.data.size());
  return out;
}

namespace {

// Preamble length and header text from the first bytes of a file.
std::pair<std::size_t, std::size_t> preamble(std::span<const std::uint8_t> b) {
  if (b.size() < 10 || !std::equal(std::begin(kMagic), std::end(kMagic), b.begin())) {
    throw FormatError("npy: bad magic");
  }
  const std::uint8_t major = b[6];
  if (major == 1) return {10, b[8] | (static_cast<std::size_t>(b[9]) << 8)};
  if (major == 2 || major == 3) {
    if (b.size() < 12) throw FormatError("npy: truncated preamble");
    return {12, b[8] | (static_cast<std::size_t>(b[9]) << 8) |
                    (static_cast<std::size_t>(b[10]) << 16) | (static_cast<std::size_t>(b[11]) << 24)};
  }
  throw FormatError("npy: unknown version " + std::to_string(major));
}

NpyHeader finish_header(const std::string& text, std::size_t offset, std::size_t total) {
  const Header h = parse_header(text);
  if (h.fortran) throw UnsupportedError("npy: Fortran-order arrays are not supported");
  if (h.descr != "<f4") throw UnsupportedError("npy: dtype '" + h.descr + "' is not supported");
  NpyHeader out{h.shape, offset};
  std::size_t n = 1;
  for (std::size_t s : h.shape) n *= s;
  const std::size_t body = total - offset;
  if (body != 4 * n) {
    throw FormatError("npy: expected " + std::to_string(4 * n) + " data bytes, found " +
                      std::to_string(body));
  }
  return out;
}

}  // namespace

NdArray decode_npy(std::span<const std::uint8_t> b) {
  const auto [pre, hlen] = preamble(b);
  if (b.size() < pre + hlen) throw FormatError("npy: truncated header");
  const NpyHeader h =
      finish_header(std::string(b.begin() + pre, b.begin() + pre + hlen), pre + hlen, b.size());
  NdArray a{h.shape, {}};
  const std::size_t n = a.size();
  a.data.resize(n);
  if (n > 0) std::memcpy(a.data.data(), b.data() + h.data_offset, 4 * n);
  return a;
}

NpyHeader read_npy_header(std::istream& in, std::size_t file_size) {
  std::vector<std::uint8_t> pre(std::min<std::size_t>(12, file_size));
  in.read(reinterpret_cast<char*>(pre.data()), static_cast<std::streamsize>(pre.size()));
  if (static_cast<std::size_t>(in.gcount()) != pre.size()) throw FormatError("npy: truncated preamble");
  const auto [plen, hlen] = preamble(pre);
  if (file_size < plen + hlen) throw FormatError("npy: truncated header");
  std::string text(hlen, '\0');
  in.seekg(static_cast<std::streamoff>(plen));
  in.read(text.data(), static_cast<std::streamsize>(hlen));
  if (static_cast<std::size_t>(in.gcount()) != hlen) throw FormatError("npy: truncated header");
  return finish_header(text, plen + hlen, file_size);
}

void write_npy(const std::filesystem::path& path, const NdArray& array) {
  const std::vector<std::uint8_t> bytes = encode_npy(array);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_npy: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write_npy: write failed for " + path.string());
}

NdArray read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_npy: cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_npy(bytes);
}

}  // namespace fwiforge::io
