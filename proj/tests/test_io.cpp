#include <gtest/gtest.h>
#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/io/checksum.hpp"
#include "fwiforge/io/dataset.hpp"
#include "fwiforge/io/npy.hpp"

using namespace fwiforge;
using namespace fwiforge::io;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path>& created() {
  static std::vector<fs::path> paths;
  return paths;
}

// Removes every scratch path when the test program exits.
class Cleanup : public ::testing::Environment {
 public:
  void TearDown() override {
    for (const auto& p : created()) fs::remove_all(p);
  }
};
const auto* const cleanup = ::testing::AddGlobalTestEnvironment(new Cleanup);

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fwiforge_io_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  created().push_back(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, std::span<const std::uint8_t> bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string header_text(const std::vector<std::uint8_t>& b) {
  const std::size_t len = b[8] | (b[9] << 8);
  return std::string(b.begin() + 10, b.begin() + 10 + len);
}

// Small samples: 4x5 maps, 2 shots x 6 steps x 5 receivers.
DatasetSample make_sample(std::uint64_t k, int group = 0) {
  std::mt19937_64 rng(k);
  std::uniform_real_distribution<double> v(1500.0, 4500.0), d(-1.0, 1.0);
  Array2D a(4, 5);
  for (double& x : a.data()) x = v(rng);
  SeismicGather g(2, 6, 5, 0.001);
  for (double& x : g.data()) x = d(rng);
  return {VelocityMap(a, 10.0), g, group};
}

ValidationOptions small_shapes() {
  ValidationOptions o;
  o.velocity_sample_shape = {1, 4, 5};
  o.seismic_sample_shape = {2, 6, 5};
  return o;
}

}  // namespace

TEST(Npy, SingleElementLayout) {
  const NdArray a{{1, 1}, {3.5f}};
  const auto bytes = encode_npy(a);
  ASSERT_EQ(bytes.size(), 132u);
  EXPECT_EQ(std::memcmp(bytes.data(), "\x93NUMPY\x01\x00", 8), 0);
  EXPECT_EQ(bytes[8] | (bytes[9] << 8), 118);
  EXPECT_EQ(bytes[127], '\n');
  const std::uint8_t tail[4] = {0x00, 0x00, 0x60, 0x40};
  EXPECT_EQ(std::memcmp(bytes.data() + 128, tail, 4), 0);
  EXPECT_EQ(decode_npy(bytes), a);
}

TEST(Npy, HeadersMatchNumpy) {
  // numpy.save output for these shapes
  const std::pair<std::vector<std::size_t>, std::string> cases[] = {
      {{1, 1}, "{'descr': '<f4', 'fortran_order': False, 'shape': (1, 1), }"},
      {{2, 3, 4}, "{'descr': '<f4', 'fortran_order': False, 'shape': (2, 3, 4), }"},
      {{500, 1, 70, 70}, "{'descr': '<f4', 'fortran_order': False, 'shape': (500, 1, 70, 70), }"},
      {{500, 5, 1000, 70}, "{'descr': '<f4', 'fortran_order': False, 'shape': (500, 5, 1000, 70), }"},
  };
  for (const auto& [shape, dict] : cases) {
    const auto h = encode_npy_header(shape);
    ASSERT_EQ(h.size(), 128u);
    const std::string text = header_text(h);
    EXPECT_EQ(text.substr(0, dict.size()), dict);
    EXPECT_EQ(text.find_first_not_of(' ', dict.size()), text.size() - 1);
    EXPECT_EQ(text.back(), '\n');
  }
  const NdArray b = make_ndarray({2, 3}, std::vector<double>{-0.5, -0.25, 0.0, 0.25, 0.5, 0.75});
  EXPECT_EQ(sha256_hex(encode_npy(b)),
            "82639beab4abb447dcb4c7c06ddbdb8b34344ea1a0ec3d2d5ebf0705cb47bcbc");
  EXPECT_THROW(encode_npy_header({5}), DimensionError);
  EXPECT_THROW(encode_npy_header({1, 2, 3, 4, 5}), DimensionError);
}

TEST(Npy, RoundTripIsBitExact) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0.0, 1e3);
  std::vector<double> v(5 * 5 * 1000 * 7);
  for (double& x : v) x = nd(rng);
  v[3] = -0.0;
  v[4] = std::numeric_limits<double>::denorm_min();
  v[5] = 1e-40;
  const NdArray a = make_ndarray({5, 5, 1000, 7}, v);
  for (std::size_t i = 0; i < v.size(); ++i) ASSERT_EQ(a.data[i], static_cast<float>(v[i]));
  const fs::path dir = scratch("roundtrip");
  write_npy(dir / "a.npy", a);
  const NdArray back = read_npy(dir / "a.npy");
  ASSERT_EQ(back.shape, a.shape);
  ASSERT_EQ(std::memcmp(back.data.data(), a.data.data(), a.data.size() * 4), 0);
  write_npy(dir / "b.npy", back);
  EXPECT_EQ(slurp(dir / "a.npy"), slurp(dir / "b.npy"));
  EXPECT_THROW(make_ndarray({2, 2}, std::vector<double>(3)), DimensionError);
}

TEST(Npy, MalformedInputs) {
  const auto good = encode_npy(NdArray{{2, 2}, {1, 2, 3, 4}});
  for (std::size_t cut : {0ul, 5ul, 9ul, 60ul, 128ul, 140ul}) {
    EXPECT_THROW(decode_npy(std::span(good.data(), cut)), FormatError) << cut;
  }
  auto bad = good;
  bad[1] = 'X';
  EXPECT_THROW(decode_npy(bad), FormatError);
  auto fortran = good;
  const std::string h = header_text(good);
  const std::string f = std::regex_replace(h, std::regex("False"), "True ");
  std::memcpy(fortran.data() + 10, f.data(), f.size());
  EXPECT_THROW(decode_npy(fortran), UnsupportedError);
  auto dtype = good;
  const std::string d = std::regex_replace(h, std::regex("<f4"), "<f8");
  std::memcpy(dtype.data() + 10, d.data(), d.size());
  EXPECT_THROW(decode_npy(dtype), UnsupportedError);
  auto garbage = good;
  std::memcpy(garbage.data() + 10, "nonsense", 8);
  EXPECT_THROW(decode_npy(garbage), FormatError);

  const fs::path dir = scratch("truncated");
  spit(dir / "t.npy", std::span(good.data(), good.size() - 3));
  EXPECT_THROW(read_npy(dir / "t.npy"), FormatError);
  EXPECT_THROW(read_npy(dir / "missing.npy"), Error);
}

TEST(Checksum, KnownDigests) {
  EXPECT_EQ(sha256_hex(std::string("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path dir = scratch("sha");
  const std::string text = "abc";
  spit(dir / "f", std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  EXPECT_EQ(sha256_file(dir / "f"), sha256_hex(text));
}

TEST(Naming, Conventions) {
  const std::regex vel(R"(^(data|model)\d+\.npy$)"), fault(R"(^(vel|seis)_\d+_1_\d+\.npy$)");
  for (std::size_t n : {1ul, 2ul, 17ul}) {
    EXPECT_TRUE(std::regex_match(velocity_file_name(Naming::VelStyle, 0, n), vel));
    EXPECT_TRUE(std::regex_match(seismic_file_name(Naming::VelStyle, 0, n), vel));
    EXPECT_TRUE(std::regex_match(velocity_file_name(Naming::Fault, 3, n), fault));
    EXPECT_TRUE(std::regex_match(seismic_file_name(Naming::Fault, 14, n), fault));
  }
  EXPECT_EQ(velocity_file_name(Naming::VelStyle, 0, 1), "model1.npy");
  EXPECT_EQ(seismic_file_name(Naming::VelStyle, 0, 2), "data2.npy");
  EXPECT_EQ(velocity_file_name(Naming::Fault, 3, 0), "vel_3_1_0.npy");
  EXPECT_EQ(seismic_file_name(Naming::Fault, 3, 0), "seis_3_1_0.npy");
  EXPECT_EQ(DatasetLayout::for_family(synth::Family::CurveFault, "x").naming, Naming::Fault);
  EXPECT_EQ(DatasetLayout::for_family(synth::Family::FlatVel, "x").naming, Naming::VelStyle);
  EXPECT_EQ(parse_naming(naming_name(Naming::Fault)), Naming::Fault);
  DatasetLayout bad{"x", Naming::VelStyle, 0};
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Dataset, VelStyleFilesAndShortFlag) {
  const fs::path dir = scratch("vel");
  std::vector<DatasetSample> samples;
  for (std::uint64_t k = 0; k < 10; ++k) samples.push_back(make_sample(k));
  const Manifest m = pack_dataset(samples, {dir, Naming::VelStyle, 4});
  ASSERT_EQ(m.files.size(), 3u);
  for (const char* f : {"data1.npy", "data2.npy", "data3.npy", "model1.npy", "model2.npy",
                        "model3.npy", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_FALSE(m.files[0].short_file);
  EXPECT_TRUE(m.files[2].short_file);
  EXPECT_EQ(m.files[2].samples, 2u);
  EXPECT_EQ(m.total_samples(), 10u);
  EXPECT_EQ(read_npy(dir / "model1.npy").shape, (std::vector<std::size_t>{4, 1, 4, 5}));
  EXPECT_EQ(read_npy(dir / "data3.npy").shape, (std::vector<std::size_t>{2, 2, 6, 5}));
  EXPECT_TRUE(validate_dataset(dir, small_shapes()).empty());
  const Manifest back = read_manifest(dir);
  EXPECT_EQ(back.to_json(), m.to_json());
}

TEST(Dataset, ThousandSamplesGiveTwoFilesEach) {
  // header-only check of the planned layout; 500 samples per file
  const std::vector<int> groups(1000, 0);
  const fs::path dir = scratch("thousand");
  DatasetWriter w({dir, Naming::VelStyle, 500}, groups, 1, 1, 1, 1, 1);
  ASSERT_EQ(w.plan().size(), 2u);
  EXPECT_EQ(w.plan()[0].velocity_file, "model1.npy");
  EXPECT_EQ(w.plan()[0].seismic_file, "data1.npy");
  EXPECT_EQ(w.plan()[1].velocity_file, "model2.npy");
  EXPECT_EQ(w.plan()[1].seismic_file, "data2.npy");
  EXPECT_EQ(w.plan()[1].samples, 500u);
}

TEST(Dataset, FaultNamingGroupsByLayerCount) {
  const fs::path dir = scratch("fault");
  std::vector<DatasetSample> samples;
  const int groups[] = {3, 5, 3, 3, 5};
  for (std::uint64_t k = 0; k < 5; ++k) samples.push_back(make_sample(k, groups[k]));
  const Manifest m = pack_dataset(samples, {dir, Naming::Fault, 2});
  for (const char* f : {"vel_3_1_0.npy", "vel_3_1_1.npy", "vel_5_1_0.npy", "seis_3_1_0.npy",
                        "seis_3_1_1.npy", "seis_5_1_0.npy"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  // pairs come back in file order: group 3 (samples 0, 2, 3) then group 5 (1, 4)
  PairStream s = load_pairs({dir, Naming::Fault, 2});
  const std::uint64_t order[] = {0, 2, 3, 1, 4};
  for (std::uint64_t k : order) {
    auto p = s.next();
    ASSERT_TRUE(p);
    const DatasetSample e = make_sample(k);
    for (std::size_t i = 0; i < 20; ++i)
      ASSERT_EQ(p->map.values().values()[i], static_cast<double>(static_cast<float>(e.map.values().values()[i])));
  }
  EXPECT_FALSE(s.next());
}

TEST(Dataset, EmptyOrMismatchedSamplesRejected) {
  const fs::path dir = scratch("empty");
  EXPECT_THROW(pack_dataset({}, {dir, Naming::VelStyle, 4}), DimensionError);
  std::vector<DatasetSample> mixed{make_sample(0), make_sample(1)};
  mixed[1].map = VelocityMap(3, 5, 10.0, 2000.0);
  EXPECT_THROW(pack_dataset(mixed, {dir, Naming::VelStyle, 4}), DimensionError);
}

TEST(Dataset, PackLoadIdentityAndRestart) {
  const fs::path dir = scratch("identity");
  std::vector<DatasetSample> samples;
  for (std::uint64_t k = 0; k < 7; ++k) samples.push_back(make_sample(k + 100));
  pack_dataset(samples, {dir, Naming::VelStyle, 3});
  PairStream s = load_pairs({dir, Naming::VelStyle, 3});
  EXPECT_EQ(s.total_samples(), 7u);
  std::vector<SamplePair> first;
  while (auto p = s.next()) first.push_back(std::move(*p));
  ASSERT_EQ(first.size(), 7u);
  for (std::size_t k = 0; k < 7; ++k) {
    const auto& mv = samples[k].map.values().values();
    const auto& gv = samples[k].gather.data();
    for (std::size_t i = 0; i < mv.size(); ++i)
      ASSERT_EQ(first[k].map.values().values()[i], double(float(mv[i])));
    for (std::size_t i = 0; i < gv.size(); ++i)
      ASSERT_EQ(first[k].gather.data()[i], double(float(gv[i])));
    EXPECT_EQ(first[k].map.dx(), 10.0);
    EXPECT_EQ(first[k].gather.dt(), 0.001);
    EXPECT_EQ(first[k].batch_index, k % 3);
  }
  s.reset();
  std::size_t k = 0;
  while (auto p = s.next()) {
    EXPECT_EQ(p->map.values().values(), first[k].map.values().values());
    EXPECT_EQ(p->gather.data().size(), first[k].gather.data().size());
    EXPECT_TRUE(std::equal(p->gather.data().begin(), p->gather.data().end(), first[k].gather.data().begin()));
    ++k;
  }
  EXPECT_EQ(k, 7u);
}

TEST(Dataset, MissingPartnerNamed) {
  const fs::path dir = scratch("missing");
  std::vector<DatasetSample> samples;
  for (std::uint64_t k = 0; k < 6; ++k) samples.push_back(make_sample(k));
  pack_dataset(samples, {dir, Naming::VelStyle, 2});
  fs::remove(dir / "model3.npy");
  try {
    load_pairs({dir, Naming::VelStyle, 2});
    FAIL() << "expected PairingError";
  } catch (const PairingError& e) {
    EXPECT_NE(std::string(e.what()).find("model3.npy"), std::string::npos) << e.what();
  }
  const auto issues = validate_dataset(dir, small_shapes());
  ASSERT_FALSE(issues.empty());
  EXPECT_EQ(issues[0].file, "model3.npy");
}

TEST(Dataset, SingleFlippedByteDetected) {
  const fs::path dir = scratch("flip");
  std::vector<DatasetSample> samples;
  for (std::uint64_t k = 0; k < 3; ++k) samples.push_back(make_sample(k));
  pack_dataset(samples, {dir, Naming::VelStyle, 3});
  const auto original = slurp(dir / "data1.npy");
  for (std::size_t pos : {0ul, 50ul, 200ul, original.size() - 1}) {
    auto bytes = original;
    bytes[pos] ^= 0x01;
    spit(dir / "data1.npy", bytes);
    const auto issues = validate_dataset(dir, small_shapes());
    ASSERT_FALSE(issues.empty()) << pos;
    EXPECT_EQ(issues[0].file, "data1.npy");
  }
  spit(dir / "data1.npy", original);
  EXPECT_TRUE(validate_dataset(dir, small_shapes()).empty());
}

TEST(Dataset, ValidationReportsShapeAndRange) {
  const fs::path dir = scratch("range");
  std::vector<DatasetSample> samples{make_sample(0), make_sample(1)};
  samples[1].map = VelocityMap(Array2D(4, 5, 5000.0), 10.0);
  pack_dataset(samples, {dir, Naming::VelStyle, 2});
  const auto issues = validate_dataset(dir, small_shapes());
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].file, "model1.npy");
  ASSERT_TRUE(issues[0].index);
  EXPECT_EQ(*issues[0].index, 1u);
  EXPECT_FALSE(validate_dataset(dir).empty());  // paper shapes expected by default
}
