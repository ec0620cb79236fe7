#include "fwiforge/io/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/io/checksum.hpp"
#include "fwiforge/io/npy.hpp"

namespace fwiforge::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string naming_name(Naming n) { return n == Naming::Fault ? "fault" : "vel-style"; }

Naming parse_naming(const std::string& s) {
  if (s == "fault") return Naming::Fault;
  if (s == "vel-style") return Naming::VelStyle;
  throw ConfigError("unknown dataset naming '" + s + "'");
}

DatasetLayout DatasetLayout::for_family(synth::Family family, fs::path root) {
  DatasetLayout l;
  l.root = std::move(root);
  l.naming = synth::is_fault_family(family) ? Naming::Fault : Naming::VelStyle;
  return l;
}

void DatasetLayout::validate() const {
  if (samples_per_file == 0) throw ConfigError("dataset layout: samples_per_file must be >= 1");
}

std::string velocity_file_name(Naming naming, int group, std::size_t index) {
  if (naming == Naming::Fault) {
    return "vel_" + std::to_string(group) + "_1_" + std::to_string(index) + ".npy";
  }
  return "model" + std::to_string(index) + ".npy";
}

std::string seismic_file_name(Naming naming, int group, std::size_t index) {
  if (naming == Naming::Fault) {
    return "seis_" + std::to_string(group) + "_1_" + std::to_string(index) + ".npy";
  }
  return "data" + std::to_string(index) + ".npy";
}

// Manifest ------------------------------------------------------------------

std::size_t Manifest::total_samples() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.samples;
  return n;
}

json Manifest::to_json() const {
  json files_j = json::array();
  for (const auto& f : files) {
    files_j.push_back({{"velocity_file", f.velocity_file},
                       {"seismic_file", f.seismic_file},
                       {"group", f.group},
                       {"index", f.index},
                       {"samples", f.samples},
                       {"short", f.short_file},
                       {"velocity_sha256", f.velocity_sha256},
                       {"seismic_sha256", f.seismic_sha256}});
  }
  return {{"toolkit_version", toolkit_version},
          {"naming", naming_name(naming)},
          {"samples_per_file", samples_per_file},
          {"seed", seed},
          {"config", config},
          {"config_hash", config_hash},
          {"geometry", geometry},
          {"dx", dx},
          {"dt", dt},
          {"velocity_sample_shape", velocity_sample_shape},
          {"seismic_sample_shape", seismic_sample_shape},
          {"total_samples", total_samples()},
          {"files", files_j}};
}

Manifest Manifest::from_json(const json& j) {
  try {
    Manifest m;
    m.toolkit_version = j.at("toolkit_version").get<std::string>();
    m.naming = parse_naming(j.at("naming").get<std::string>());
    m.samples_per_file = j.at("samples_per_file").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.at("config");
    m.config_hash = j.at("config_hash").get<std::string>();
    m.geometry = j.at("geometry");
    m.dx = j.at("dx").get<double>();
    m.dt = j.at("dt").get<double>();
    m.velocity_sample_shape = j.at("velocity_sample_shape").get<std::vector<std::size_t>>();
    m.seismic_sample_shape = j.at("seismic_sample_shape").get<std::vector<std::size_t>>();
    for (const auto& f : j.at("files")) {
      FileRecord r;
      r.velocity_file = f.at("velocity_file").get<std::string>();
      r.seismic_file = f.at("seismic_file").get<std::string>();
      r.group = f.at("group").get<int>();
      r.index = f.at("index").get<std::size_t>();
      r.samples = f.at("samples").get<std::size_t>();
      r.short_file = f.at("short").get<bool>();
      r.velocity_sha256 = f.at("velocity_sha256").get<std::string>();
      r.seismic_sha256 = f.at("seismic_sha256").get<std::string>();
      m.files.push_back(std::move(r));
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

void write_manifest(const fs::path& root, const Manifest& m) {
  std::ofstream out(root / kManifestName, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + (root / kManifestName).string());
  out << m.to_json().dump(2) << '\n';
}

Manifest read_manifest(const fs::path& root) {
  const fs::path p = root / kManifestName;
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("manifest not found: " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("manifest " + p.string() + ": " + e.what());
  }
  return Manifest::from_json(j);
}

// Writer --------------------------------------------------------------------

struct DatasetWriter::OpenFile {
  std::ofstream vel;
  std::ofstream seis;
};

DatasetWriter::DatasetWriter(DatasetLayout layout, std::span<const int> groups, std::size_t nz,
                             std::size_t nx, std::size_t ns, std::size_t nt, std::size_t nr)
    : layout_(std::move(layout)), nz_(nz), nx_(nx), ns_(ns), nt_(nt), nr_(nr) {
  layout_.validate();
  if (groups.empty()) throw DimensionError("dataset writer: no samples to write");
  const std::size_t spf = layout_.samples_per_file;
  const bool fault = layout_.naming == Naming::Fault;

  std::map<int, std::size_t> group_count;
  for (int g : groups) ++group_count[fault ? g : 0];
  std::map<int, std::size_t> first_file;
  for (const auto& [g, count] : group_count) {
    first_file[g] = files_.size();
    const std::size_t nfiles = (count + spf - 1) / spf;
    for (std::size_t i = 0; i < nfiles; ++i) {
      FileRecord r;
      r.group = fault ? g : 0;
      r.index = fault ? i : i + 1;
      r.velocity_file = velocity_file_name(layout_.naming, r.group, r.index);
      r.seismic_file = seismic_file_name(layout_.naming, r.group, r.index);
      r.samples = std::min(spf, count - i * spf);
      r.short_file = r.samples < spf;
      files_.push_back(std::move(r));
    }
  }
  std::map<int, std::size_t> seen;
  for (int g0 : groups) {
    const int g = fault ? g0 : 0;
    const std::size_t k = seen[g]++;
    slots_.push_back({first_file[g] + k / spf, k % spf});
  }
  fs::create_directories(layout_.root);
}

DatasetWriter::~DatasetWriter() = default;

namespace {

void write_floats(std::ofstream& out, std::span<const double> values) {
  std::vector<float> f(values.size());
  std::transform(values.begin(), values.end(), f.begin(),
                 [](double v) { return static_cast<float>(v); });
  out.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(4 * f.size()));
}

void write_header(std::ofstream& out, const std::vector<std::size_t>& shape) {
  const auto h = encode_npy_header(shape);
  out.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
}

}  // namespace

void DatasetWriter::write(const VelocityMap& map, const SeismicGather& gather) {
  if (next_ >= slots_.size()) throw Error("dataset writer: more samples than planned");
  if (map.nz() != nz_ || map.nx() != nx_ || gather.ns() != ns_ || gather.nt() != nt_ ||
      gather.nr() != nr_) {
    throw DimensionError("dataset writer: sample " + std::to_string(next_) +
                         " does not match the dataset shape");
  }
  if (next_ == 0) {
    dx_ = map.dx();
    dt_ = gather.dt();
  }
  const Slot slot = slots_[next_];
  const FileRecord& rec = files_[slot.file];
  auto& of = open_[slot.file];
  if (!of) {
    of = std::make_unique<OpenFile>();
    of->vel.open(layout_.root / rec.velocity_file, std::ios::binary | std::ios::trunc);
    of->seis.open(layout_.root / rec.seismic_file, std::ios::binary | std::ios::trunc);
    if (!of->vel || !of->seis) throw Error("dataset writer: cannot create " + rec.velocity_file);
    write_header(of->vel, {rec.samples, 1, nz_, nx_});
    write_header(of->seis, {rec.samples, ns_, nt_, nr_});
  }
  write_floats(of->vel, map.values().data());
  write_floats(of->seis, gather.data());
  if (!of->vel || !of->seis) throw Error("dataset writer: write failed for " + rec.velocity_file);
  if (slot.position + 1 == rec.samples) open_.erase(slot.file);
  ++next_;
}

Manifest DatasetWriter::finish(const RunInfo& info) {
  if (next_ != slots_.size()) {
    throw Error("dataset writer: " + std::to_string(next_) + " of " +
                std::to_string(slots_.size()) + " samples written");
  }
  open_.clear();
  Manifest m;
  m.naming = layout_.naming;
  m.samples_per_file = layout_.samples_per_file;
  m.seed = info.seed;
  m.config = info.config;
  m.config_hash = sha256_hex(info.config.dump());
  m.geometry = info.geometry;
  m.dx = dx_;
  m.dt = dt_;
  m.velocity_sample_shape = {1, nz_, nx_};
  m.seismic_sample_shape = {ns_, nt_, nr_};
  m.files = files_;
  for (auto& f : m.files) {
    f.velocity_sha256 = sha256_file(layout_.root / f.velocity_file);
    f.seismic_sha256 = sha256_file(layout_.root / f.seismic_file);
  }
  write_manifest(layout_.root, m);
  return m;
}

Manifest pack_dataset(std::span<const DatasetSample> samples, const DatasetLayout& layout,
                      const RunInfo& info) {
  if (samples.empty()) throw DimensionError("pack_dataset: empty sample list");
  std::vector<int> groups;
  for (const auto& s : samples) groups.push_back(s.group);
  const auto& s0 = samples.front();
  DatasetWriter w(layout, groups, s0.map.nz(), s0.map.nx(), s0.gather.ns(), s0.gather.nt(),
                  s0.gather.nr());
  for (const auto& s : samples) w.write(s.map, s.gather);
  return w.finish(info);
}

// Reading -------------------------------------------------------------------

namespace {

struct OpenedNpy {
  std::ifstream in;
  NpyHeader header;
};

OpenedNpy open_npy(const fs::path& path) {
  OpenedNpy o;
  o.in.open(path, std::ios::binary);
  if (!o.in) throw Error("cannot open " + path.string());
  o.header = read_npy_header(o.in, static_cast<std::size_t>(fs::file_size(path)));
  return o;
}

std::size_t per_batch(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) n *= shape[i];
  return n;
}

std::vector<float> read_slab(std::ifstream& in, std::size_t offset,
                             const std::vector<std::size_t>& shape, std::size_t b) {
  const std::size_t n = per_batch(shape);
  std::vector<float> out(n);
  in.clear();
  in.seekg(static_cast<std::streamoff>(offset + 4 * n * b));
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(4 * n));
  if (static_cast<std::size_t>(in.gcount()) != 4 * n) throw FormatError("npy: truncated data");
  return out;
}

std::string shape_text(const std::vector<std::size_t>& s) {
  std::string t = "(";
  for (std::size_t i = 0; i < s.size(); ++i) t += (i ? "," : "") + std::to_string(s[i]);
  return t + ")";
}

}  // namespace

std::vector<float> read_npy_slab(const fs::path& path, std::size_t batch_index,
                                 std::vector<std::size_t>* shape) {
  OpenedNpy o = open_npy(path);
  if (o.header.shape.empty() || batch_index >= o.header.shape[0]) {
    throw DimensionError("read_npy_slab: index " + std::to_string(batch_index) + " outside " +
                         path.string());
  }
  if (shape) *shape = o.header.shape;
  return read_slab(o.in, o.header.data_offset, o.header.shape, batch_index);
}

PairStream::PairStream(DatasetLayout layout) : layout_(std::move(layout)) {
  if (!fs::is_directory(layout_.root)) {
    throw Error("dataset directory not found: " + layout_.root.string());
  }
  if (fs::exists(layout_.root / kManifestName)) {
    const Manifest m = read_manifest(layout_.root);
    dx_ = m.dx;
    dt_ = m.dt;
  }
  const bool fault = layout_.naming == Naming::Fault;
  const std::regex re = fault ? std::regex(R"(^(vel|seis)_(\d+)_1_(\d+)\.npy$)")
                              : std::regex(R"(^(data|model)(\d+)\.npy$)");
  // key (group, index) -> (has velocity, has seismic)
  std::map<std::pair<int, std::size_t>, std::pair<bool, bool>> found;
  for (const auto& e : fs::directory_iterator(layout_.root)) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, re)) continue;
    const bool velocity = m[1] == "vel" || m[1] == "model";
    std::pair<int, std::size_t> key =
        fault ? std::pair<int, std::size_t>{std::stoi(m[2]), std::stoul(m[3])}
              : std::pair<int, std::size_t>{0, std::stoul(m[2])};
    auto& f = found[key];
    (velocity ? f.first : f.second) = true;
  }
  for (const auto& [key, has] : found) {
    const std::string vname = velocity_file_name(layout_.naming, key.first, key.second);
    const std::string sname = seismic_file_name(layout_.naming, key.first, key.second);
    if (!has.first) throw PairingError("missing " + vname + " (paired with " + sname + ")");
    if (!has.second) throw PairingError("missing " + sname + " (paired with " + vname + ")");
    FilePair p{layout_.root / vname, layout_.root / sname, key.first, key.second};
    OpenedNpy v = open_npy(p.velocity);
    OpenedNpy s = open_npy(p.seismic);
    if (v.header.shape.size() != 4 || s.header.shape.size() != 4 || v.header.shape[1] != 1) {
      throw FormatError("unexpected array rank in " + vname + " / " + sname);
    }
    if (v.header.shape[0] != s.header.shape[0]) {
      throw PairingError(vname + " holds " + std::to_string(v.header.shape[0]) + " samples but " +
                         sname + " holds " + std::to_string(s.header.shape[0]));
    }
    total_ += v.header.shape[0];
    files_.push_back(std::move(p));
  }
  reset();
}

void PairStream::reset() {
  file_ = 0;
  batch_ = 0;
  batch_size_ = 0;
  vin_.close();
  sin_.close();
}

void PairStream::open_current() {
  vin_.close();
  sin_.close();
  OpenedNpy v = open_npy(files_[file_].velocity);
  OpenedNpy s = open_npy(files_[file_].seismic);
  vshape_ = v.header.shape;
  sshape_ = s.header.shape;
  voffset_ = v.header.data_offset;
  soffset_ = s.header.data_offset;
  vin_ = std::move(v.in);
  sin_ = std::move(s.in);
  batch_size_ = vshape_[0];
  batch_ = 0;
}

std::optional<SamplePair> PairStream::next() {
  while (file_ < files_.size()) {
    if (!vin_.is_open()) open_current();
    if (batch_ < batch_size_) break;
    vin_.close();
    sin_.close();
    ++file_;
  }
  if (file_ >= files_.size()) return std::nullopt;
  const std::vector<float> v = read_slab(vin_, voffset_, vshape_, batch_);
  const std::vector<float> s = read_slab(sin_, soffset_, sshape_, batch_);
  SamplePair p{VelocityMap(Array2D(vshape_[2], vshape_[3], std::vector<double>(v.begin(), v.end())),
                           dx_),
               SeismicGather(sshape_[1], sshape_[2], sshape_[3], dt_,
                             std::vector<double>(s.begin(), s.end())),
               files_[file_].velocity.filename().string(), batch_};
  ++batch_;
  return p;
}

PairStream load_pairs(const DatasetLayout& layout) { return PairStream(layout); }

std::vector<Issue> validate_dataset(const fs::path& root, const ValidationOptions& o) {
  std::vector<Issue> issues;
  Manifest m;
  try {
    m = read_manifest(root);
  } catch (const Error& e) {
    issues.push_back({kManifestName, std::nullopt, e.what()});
    return issues;
  }
  if (m.files.empty()) issues.push_back({kManifestName, std::nullopt, "manifest lists no files"});
  for (const auto& f : m.files) {
    const struct {
      const std::string& name;
      const std::string& sha;
      bool velocity;
    } parts[] = {{f.velocity_file, f.velocity_sha256, true}, {f.seismic_file, f.seismic_sha256, false}};
    for (const auto& part : parts) {
      const fs::path p = root / part.name;
      if (!fs::exists(p)) {
        issues.push_back({part.name, std::nullopt, "file listed in manifest is missing"});
        continue;
      }
      if (sha256_file(p) != part.sha) {
        issues.push_back({part.name, std::nullopt, "checksum mismatch"});
      }
      OpenedNpy n;
      try {
        n = open_npy(p);
      } catch (const Error& e) {
        issues.push_back({part.name, std::nullopt, e.what()});
        continue;
      }
      const auto& shape = n.header.shape;
      if (shape.empty() || shape[0] != f.samples) {
        issues.push_back({part.name, std::nullopt,
                          "batch size " + (shape.empty() ? std::string("?") : std::to_string(shape[0])) +
                              " differs from manifest count " + std::to_string(f.samples)});
      }
      if (o.check_shapes) {
        const auto& want = part.velocity ? o.velocity_sample_shape : o.seismic_sample_shape;
        const std::vector<std::size_t> got(shape.begin() + (shape.empty() ? 0 : 1), shape.end());
        if (got != want) {
          issues.push_back({part.name, std::nullopt,
                            "sample shape " + shape_text(got) + " expected " + shape_text(want)});
        }
      }
      if (part.velocity && shape.size() >= 2) {
        for (std::size_t b = 0; b < shape[0]; ++b) {
          const std::vector<float> v = read_slab(n.in, n.header.data_offset, shape, b);
          const auto bad = std::count_if(v.begin(), v.end(), [&](float x) {
            return !std::isfinite(x) || x < o.vmin || x > o.vmax;
          });
          if (bad > 0) {
            issues.push_back({part.name, b,
                              std::to_string(bad) + " velocities outside [" +
                                  std::to_string(o.vmin) + ", " + std::to_string(o.vmax) + "]"});
          }
        }
      }
    }
  }
  return issues;
}

}  // namespace fwiforge::io
