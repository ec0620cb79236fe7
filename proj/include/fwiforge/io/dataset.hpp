#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fwiforge/core/types.hpp"
#include "fwiforge/synth/velocity_synth.hpp"

namespace fwiforge::io {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kManifestName = "manifest.json";

/// VelStyle: data{n}.npy / model{n}.npy with n from 1.
/// Fault: seis_{L}_1_{i}.npy / vel_{L}_1_{i}.npy, L the initial layer count
/// and i from 0 within each L.
enum class Naming { VelStyle, Fault };

std::string naming_name(Naming n);
Naming parse_naming(const std::string& s);

struct DatasetLayout {
  std::filesystem::path root;
  Naming naming = Naming::VelStyle;
  std::size_t samples_per_file = 500;

  /// Fault naming for the fault families, VelStyle otherwise.
  static DatasetLayout for_family(synth::Family family, std::filesystem::path root);
  void validate() const;
};

std::string velocity_file_name(Naming naming, int group, std::size_t index);
std::string seismic_file_name(Naming naming, int group, std::size_t index);

struct FileRecord {
  std::string velocity_file;
  std::string seismic_file;
  int group = 0;          ///< layer count for Fault naming, 0 otherwise
  std::size_t index = 0;  ///< n (VelStyle, from 1) or i (Fault, from 0)
  std::size_t samples = 0;
  bool short_file = false;  ///< fewer than samples_per_file samples
  std::string velocity_sha256;
  std::string seismic_sha256;
};

/// Self-description of a dataset directory, written last.
struct Manifest {
  std::string toolkit_version = kToolkitVersion;
  Naming naming = Naming::VelStyle;
  std::size_t samples_per_file = 500;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();  ///< fully resolved run config
  std::string config_hash;                           ///< sha256 of config.dump()
  nlohmann::json geometry = nlohmann::json::object();
  double dx = 10.0;
  double dt = 0.001;
  std::vector<std::size_t> velocity_sample_shape;  ///< (1, nz, nx)
  std::vector<std::size_t> seismic_sample_shape;   ///< (ns, nt, nr)
  std::vector<FileRecord> files;

  std::size_t total_samples() const;
  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

void write_manifest(const std::filesystem::path& root, const Manifest& m);
/// FormatError if the manifest is missing or malformed.
Manifest read_manifest(const std::filesystem::path& root);

struct RunInfo {
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json geometry = nlohmann::json::object();
};

/// Streams samples into their files as they arrive, so a dataset never has to
/// fit in memory. The group (layer count) of every sample is fixed up front,
/// which fixes every file's batch size and header.
class DatasetWriter {
 public:
  /// groups[k] is the group of sample k (ignored for VelStyle naming).
  DatasetWriter(DatasetLayout layout, std::span<const int> groups, std::size_t nz, std::size_t nx,
                std::size_t ns, std::size_t nt, std::size_t nr);
  ~DatasetWriter();
  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  /// Samples must arrive in index order 0, 1, ...
  void write(const VelocityMap& map, const SeismicGather& gather);

  /// Closes every file, checksums it and writes the manifest.
  Manifest finish(const RunInfo& info);

  const std::vector<FileRecord>& plan() const noexcept { return files_; }

 private:
  struct Slot {
    std::size_t file;      ///< index into files_
    std::size_t position;  ///< batch index within the file
  };
  struct OpenFile;

  DatasetLayout layout_;
  std::size_t nz_, nx_, ns_, nt_, nr_;
  std::vector<Slot> slots_;
  std::vector<FileRecord> files_;
  std::map<std::size_t, std::unique_ptr<OpenFile>> open_;
  std::size_t next_ = 0;
  double dx_ = 0.0;
  double dt_ = 0.0;
};

struct DatasetSample {
  VelocityMap map;
  SeismicGather gather;
  int group = 0;
};

/// Packs an in-memory sample list; DimensionError when it is empty or the
/// samples disagree in shape.
Manifest pack_dataset(std::span<const DatasetSample> samples, const DatasetLayout& layout,
                      const RunInfo& info = {});

struct SamplePair {
  VelocityMap map;
  SeismicGather gather;
  std::string velocity_file;
  std::size_t batch_index = 0;
};

/// Pairs of a dataset directory in file order then batch order. Pairing is
/// checked when the stream is built: a data/model file without its partner,
/// or partners with different batch sizes, raise PairingError naming the file.
/// dx and dt come from the manifest when present, else 10 m and 1 ms.
class PairStream {
 public:
  explicit PairStream(DatasetLayout layout);

  /// Next pair, or nullopt at the end.
  std::optional<SamplePair> next();
  /// Rewinds to the first pair.
  void reset();

  struct FilePair {
    std::filesystem::path velocity;
    std::filesystem::path seismic;
    int group = 0;
    std::size_t index = 0;
  };
  const std::vector<FilePair>& files() const noexcept { return files_; }
  std::size_t total_samples() const noexcept { return total_; }

 private:
  void open_current();

  DatasetLayout layout_;
  std::vector<FilePair> files_;
  std::size_t total_ = 0;
  double dx_ = 10.0;
  double dt_ = 0.001;
  std::size_t file_ = 0;
  std::size_t batch_ = 0;
  std::size_t batch_size_ = 0;
  std::vector<std::size_t> vshape_, sshape_;
  std::size_t voffset_ = 0, soffset_ = 0;
  std::ifstream vin_, sin_;
};

PairStream load_pairs(const DatasetLayout& layout);

/// Reads one batch entry of a (b, ...) float32 NPY file.
std::vector<float> read_npy_slab(const std::filesystem::path& path, std::size_t batch_index,
                                 std::vector<std::size_t>* shape = nullptr);

struct Issue {
  std::string file;
  std::optional<std::size_t> index;
  std::string message;
};

struct ValidationOptions {
  std::vector<std::size_t> velocity_sample_shape{1, 70, 70};
  std::vector<std::size_t> seismic_sample_shape{5, 1000, 70};
  double vmin = kPaperVelocityMin;
  double vmax = kPaperVelocityMax;
  bool check_shapes = true;
};

/// Checksums, file shapes and velocity range for every file in the manifest.
std::vector<Issue> validate_dataset(const std::filesystem::path& root,
                                    const ValidationOptions& options = {});

}  // namespace fwiforge::io
