#include "fwiforge/cli/app.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "fwiforge/cli/config.hpp"
#include "fwiforge/complexity/complexity.hpp"
#include "fwiforge/core/errors.hpp"
#include "fwiforge/core/metrics.hpp"
#include "fwiforge/fwi/initial.hpp"
#include "fwiforge/fwi/multiscale.hpp"
#include "fwiforge/io/dataset.hpp"
#include "fwiforge/io/npy.hpp"
#include "fwiforge/synth/velocity_synth.hpp"
#include "fwiforge/wave/propagator.hpp"
#include "fwiforge/wave/ricker.hpp"

namespace fwiforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GenerateArgs {
  std::string family;
  std::size_t count = 500;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t samples_per_file = 500;
};

struct InvertArgs {
  std::string data;
  std::string out;
  std::size_t first = 0;
  std::size_t count = 1;
  std::string init = "smoothed";
  std::size_t kernel = 9;
  double vtop = 0.0;     // 0: surface minimum of the reference map
  double vbottom = 0.0;  // 0: maximum of the reference map's last row
  std::vector<double> cutoffs{1.0, 3.0, 5.0, 10.0, 20.0, 30.0};
  std::size_t max_iters = 20;
  double stop_rel = 1e-3;
  double initial_step = 50.0;
  std::size_t max_halvings = 8;
  bool no_precondition = false;
  bool no_refine = false;
};

struct AnalyzeArgs {
  std::vector<std::string> dirs;
  std::string csv;
  double eps = 1e-3;
  double bin_width = 60.0;
  double si_scale = 1.0;
  double calibrate = -1.0;
};

struct ValidateArgs {
  std::string dir;
  bool no_shape_check = false;
  double vmin = kPaperVelocityMin;
  double vmax = kPaperVelocityMax;
};

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// Naming from the manifest, else from the file names present.
io::DatasetLayout detect_layout(const fs::path& root) {
  io::DatasetLayout l;
  l.root = root;
  if (fs::exists(root / io::kManifestName)) {
    const io::Manifest m = io::read_manifest(root);
    l.naming = m.naming;
    l.samples_per_file = m.samples_per_file;
    return l;
  }
  for (const auto& e : fs::directory_iterator(root)) {
    const std::string n = e.path().filename().string();
    if (n.rfind("vel_", 0) == 0 || n.rfind("seis_", 0) == 0) {
      l.naming = io::Naming::Fault;
      break;
    }
  }
  return l;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const auto [family, version] = synth::parse_family(a.family);
  synth::GeneratorConfig cfg = synth::GeneratorConfig::defaults(family, version);
  cfg.seed = a.seed;
  cfg.validate();
  if (a.count == 0) throw ConfigError("generate: --count must be at least 1");

  const AcquisitionGeometry geom = AcquisitionGeometry::paper_replica();
  geom.validate(cfg.nz, cfg.nx);
  const wave::RickerWavelet wavelet = wave::ricker(geom.source_freq, geom.dt, geom.nt_sim);

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<synth::SynthSample> maps = synth::synthesize_batch(cfg, a.count);
  std::vector<int> groups;
  for (const auto& s : maps) groups.push_back(s.n_layers);

  io::DatasetLayout layout = io::DatasetLayout::for_family(family, a.out);
  layout.samples_per_file = a.samples_per_file;
  io::DatasetWriter writer(layout, groups, cfg.nz, cfg.nx, geom.sources.size(), geom.nt_stored,
                           geom.receivers.size());

  const std::size_t report_every = std::max<std::size_t>(1, a.count / 10);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const SeismicGather gather = wave::forward_model(maps[i].map, geom, wavelet);
    writer.write(maps[i].map, gather);
    if ((i + 1) % report_every == 0 || i + 1 == maps.size()) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      err << "generate: " << (i + 1) << "/" << maps.size() << " samples, "
          << fixed(static_cast<double>((i + 1) * geom.sources.size()) / std::max(secs, 1e-9), 2)
          << " shots/s\n";
    }
  }

  io::RunInfo info;
  info.seed = a.seed;
  info.config = {{"command", "generate"},
                 {"family", synth::family_name(family, version)},
                 {"count", a.count},
                 {"samples_per_file", a.samples_per_file},
                 {"generator", to_json(cfg)},
                 {"wavelet", {{"kind", "ricker"}, {"freq", wavelet.freq}, {"delay", wavelet.delay}}}};
  info.geometry = to_json(geom);
  const io::Manifest m = writer.finish(info);
  for (const auto& f : m.files) {
    out << f.seismic_file << " " << f.velocity_file << " samples=" << f.samples
        << (f.short_file ? " (short)" : "") << "\n";
  }
  out << "generate: wrote " << m.total_samples() << " samples to " << a.out << "\n";
  return kExitOk;
}

int cmd_invert(const InvertArgs& a, std::ostream& out, std::ostream& err) {
  fwi::InversionConfig cfg;
  cfg.cutoffs = a.cutoffs;
  cfg.max_iters_per_stage = a.max_iters;
  cfg.stop_rel_loss_change = a.stop_rel;
  cfg.line_search.initial_step = a.initial_step;
  cfg.line_search.max_step_halvings = a.max_halvings;
  cfg.line_search.refine_step = !a.no_refine;
  cfg.precondition = !a.no_precondition;
  cfg.validate();
  if (a.init != "smoothed" && a.init != "homogeneous" && a.init != "linear") {
    throw ConfigError("invert: unknown --init '" + a.init + "'");
  }

  const io::DatasetLayout layout = detect_layout(a.data);
  AcquisitionGeometry geom = AcquisitionGeometry::paper_replica();
  io::PairStream stream(layout);
  for (std::size_t k = 0; k < a.first; ++k) {
    if (!stream.next()) throw Error("invert: dataset has only " + std::to_string(k) + " samples");
  }

  fs::create_directories(a.out);
  std::ofstream trace_csv(fs::path(a.out) / "trace.csv");
  std::ofstream stage_csv(fs::path(a.out) / "stages.csv");
  std::ofstream metric_csv(fs::path(a.out) / "metrics.csv");
  trace_csv << "sample,stage,cutoff_hz,iteration,loss,rel_change,max_update,evaluations,restarted\n";
  stage_csv << "sample,stage,cutoff_hz,iterations,final_rel_change,reason,max_iters,forward_runs,"
               "adjoint_runs,wall_seconds\n";
  metric_csv << "sample,source,init,initial_mae,initial_rmse,initial_ssim,final_mae,final_rmse,"
                "final_ssim\n";
  trace_csv << std::setprecision(10);
  stage_csv << std::setprecision(10);
  metric_csv << std::setprecision(10);

  std::vector<double> inverted;
  std::size_t nz = 0, nx = 0, done = 0;
  double sum_init = 0.0, sum_final = 0.0;
  for (std::size_t k = 0; k < a.count; ++k) {
    std::optional<io::SamplePair> pair = stream.next();
    if (!pair) break;
    const VelocityMap& truth = pair->map;
    geom.dt = pair->gather.dt();
    geom.dx = truth.dx();
    if (pair->gather.ns() != geom.sources.size() || pair->gather.nt() != geom.nt_stored ||
        pair->gather.nr() != geom.receivers.size()) {
      throw DimensionError("invert: gather shape does not match the acquisition geometry");
    }
    const wave::RickerWavelet wavelet = wave::ricker(geom.source_freq, geom.dt, geom.nt_sim);

    VelocityMap init = truth;
    if (a.init == "smoothed") {
      init = fwi::initial_smoothed(truth, a.kernel);
    } else if (a.init == "homogeneous") {
      init = fwi::initial_homogeneous(truth);
    } else {
      const auto top = truth.values().row(0);
      const auto bottom = truth.values().row(truth.nz() - 1);
      const double vt = a.vtop > 0.0 ? a.vtop : *std::min_element(top.begin(), top.end());
      const double vb = a.vbottom > 0.0 ? a.vbottom : *std::max_element(bottom.begin(), bottom.end());
      init = fwi::initial_linear(vt, vb, truth.nz(), truth.nx(), truth.dx());
    }

    const std::size_t sample = a.first + k;
    const fwi::InversionResult res = fwi::multiscale_fwi(init, pair->gather, geom, wavelet, cfg);
    for (std::size_t s = 0; s < res.trace.stages.size(); ++s) {
      const fwi::StageTrace& st = res.trace.stages[s];
      for (const fwi::CgIteration& it : st.iterations) {
        trace_csv << sample << ',' << s << ',' << st.cutoff << ',' << it.iteration << ','
                  << it.loss << ',' << it.rel_change << ',' << it.max_update << ','
                  << it.evaluations << ',' << (it.restarted ? 1 : 0) << '\n';
      }
      stage_csv << sample << ',' << s << ',' << st.cutoff << ',' << st.iterations.size() - 1
                << ',' << st.final_rel_change << ',' << fwi::to_string(st.reason) << ','
                << cfg.max_iters_per_stage << ',' << st.forward_runs << ',' << st.adjoint_runs
                << ',' << st.wall_seconds << '\n';
    }
    const MetricReport before = compare_velocity(truth, init);
    const MetricReport after = compare_velocity(truth, res.map);
    metric_csv << sample << ',' << pair->velocity_file << '#' << pair->batch_index << ',' << a.init
               << ',' << before.mae << ',' << before.rmse << ',' << before.ssim << ','
               << after.mae << ',' << after.rmse << ',' << after.ssim << '\n';
    out << "sample " << sample << ": ssim " << fixed(before.ssim) << " -> " << fixed(after.ssim)
        << ", mae " << fixed(before.mae) << " -> " << fixed(after.mae) << ", rmse "
        << fixed(before.rmse) << " -> " << fixed(after.rmse) << " (" << fixed(res.trace.wall_seconds, 1)
        << " s)\n";
    err.flush();
    sum_init += before.ssim;
    sum_final += after.ssim;
    nz = res.map.nz();
    nx = res.map.nx();
    const auto& v = res.map.values().values();
    inverted.insert(inverted.end(), v.begin(), v.end());
    ++done;
  }
  if (done == 0) throw Error("invert: no samples selected");
  io::write_npy(fs::path(a.out) / "inverted.npy", io::make_ndarray({done, 1, nz, nx}, inverted));

  json run = {{"command", "invert"},
              {"data", fs::path(a.data).filename().string()},
              {"first", a.first},
              {"count", done},
              {"init", a.init},
              {"kernel", a.kernel},
              {"vtop", a.vtop},
              {"vbottom", a.vbottom},
              {"inversion", to_json(cfg)},
              {"geometry", to_json(geom)},
              {"toolkit_version", io::kToolkitVersion}};
  std::ofstream(fs::path(a.out) / "run_config.json") << run.dump(2) << '\n';
  out << "invert: mean ssim " << fixed(sum_init / done) << " -> " << fixed(sum_final / done)
      << " over " << done << " samples\n";
  return kExitOk;
}

std::vector<VelocityMap> read_maps(const fs::path& root) {
  const io::DatasetLayout layout = detect_layout(root);
  io::PairStream stream(layout);
  std::vector<VelocityMap> maps;
  for (const auto& f : stream.files()) {
    std::vector<std::size_t> shape;
    io::read_npy_slab(f.velocity, 0, &shape);
    const io::NdArray arr = io::read_npy(f.velocity);
    const std::size_t per = shape[2] * shape[3];
    for (std::size_t b = 0; b < shape[0]; ++b) {
      std::vector<double> v(arr.data.begin() + b * per, arr.data.begin() + (b + 1) * per);
      maps.emplace_back(Array2D(shape[2], shape[3], std::move(v)), 10.0);
    }
  }
  if (maps.empty()) throw Error("analyze: no velocity maps found in " + root.string());
  return maps;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  complexity::ComplexityOptions opts;
  opts.gsi_eps = a.eps;
  opts.bin_width = a.bin_width;
  opts.si_scale = a.si_scale;

  std::ofstream file;
  if (!a.csv.empty()) file.open(a.csv);
  std::ostream& csv = a.csv.empty() ? out : file;
  complexity::write_csv_header(csv);

  std::vector<complexity::ComplexityReport> means;
  for (const std::string& dir : a.dirs) {
    const std::vector<VelocityMap> maps = read_maps(dir);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      complexity::write_csv_row(csv, fs::path(dir).filename().string() + "#" + std::to_string(i),
                                complexity::map_complexity(maps[i], opts));
    }
    const complexity::ComplexityReport mean = complexity::complexity_report(maps, opts);
    complexity::write_csv_row(csv, fs::path(dir).filename().string() + "#mean", mean);
    means.push_back(mean);
    if (!a.csv.empty()) {
      out << dir << ": maps=" << maps.size() << " si_mean=" << fixed(mean.si_mean)
          << " gsi=" << fixed(mean.gsi) << " entropy=" << fixed(mean.entropy) << "\n";
    }
    if (a.calibrate > 0.0) {
      std::vector<double> widths;
      for (double w = 10.0; w <= 300.0; w += 10.0) widths.push_back(w);
      out << dir << ": calibrated bin_width="
          << complexity::calibrate_bin_width(maps, a.calibrate, widths, opts) << "\n";
    }
  }
  for (std::size_t i = 0; i + 1 < means.size(); ++i) {
    const auto cmp = [](double x, double y) { return x > y ? ">" : (x < y ? "<" : "="); };
    out << "ordering " << a.dirs[i] << " vs " << a.dirs[i + 1] << ": si "
        << cmp(means[i].si_mean, means[i + 1].si_mean) << ", gsi "
        << cmp(means[i].gsi, means[i + 1].gsi) << ", entropy "
        << cmp(means[i].entropy, means[i + 1].entropy) << "\n";
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  io::ValidationOptions o;
  o.check_shapes = !a.no_shape_check;
  o.vmin = a.vmin;
  o.vmax = a.vmax;
  const std::vector<io::Issue> issues = io::validate_dataset(a.dir, o);
  for (const auto& i : issues) {
    out << "FAIL " << i.file;
    if (i.index) out << "[" << *i.index << "]";
    out << ": " << i.message << "\n";
  }
  if (issues.empty()) {
    const io::Manifest m = io::read_manifest(a.dir);
    out << "PASS " << a.dir << ": " << m.files.size() << " file pairs, " << m.total_samples()
        << " samples\n";
    return kExitOk;
  }
  out << "validate: " << issues.size() << " violation(s)\n";
  return kExitRuntime;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fwiforge: synthetic seismic datasets, acoustic simulation and FWI"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML-style config file ([generate], [invert], ... sections)");
  int jobs = 0;
  auto* jobs_opt = app.add_option("-j,--jobs", jobs, "Worker threads (0: OpenMP default); "
                                  "FWI_FORGE_JOBS when absent")
                       ->check(CLI::NonNegativeNumber);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Synthesize maps, simulate gathers, pack a dataset");
  gen->add_option("--family", ga.family, "flatvel-a|b, curvevel-a|b, flatfault-a|b, curvefault-a|b")
      ->required()
      ->check([](const std::string& s) {
        try {
          synth::parse_family(s);
          return std::string{};
        } catch (const ConfigError& e) {
          return std::string(e.what());
        }
      });
  gen->add_option("--count", ga.count, "Number of samples")->check(CLI::PositiveNumber);
  gen->add_option("--seed", ga.seed, "Seed for every random draw");
  gen->add_option("--out", ga.out, "Output directory")->required();
  gen->add_option("--samples-per-file", ga.samples_per_file, "Samples per NPY file")
      ->check(CLI::PositiveNumber);

  InvertArgs ia;
  auto* inv = app.add_subcommand("invert", "Multiscale FWI on dataset samples");
  inv->add_option("--data", ia.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  inv->add_option("--out", ia.out, "Output directory")->required();
  inv->add_option("--first", ia.first, "Index of the first sample");
  inv->add_option("--count", ia.count, "Number of samples")->check(CLI::PositiveNumber);
  inv->add_option("--init", ia.init, "Initial map: homogeneous, linear or smoothed")
      ->check(CLI::IsMember({"homogeneous", "linear", "smoothed"}));
  inv->add_option("--kernel", ia.kernel, "Mean-filter size for --init smoothed");
  inv->add_option("--vtop", ia.vtop, "Surface velocity for --init linear");
  inv->add_option("--vbottom", ia.vbottom, "Bottom velocity for --init linear");
  inv->add_option("--cutoffs", ia.cutoffs, "Low-pass cutoffs in Hz, increasing")->delimiter(',');
  inv->add_option("--max-iters", ia.max_iters, "CG iterations per stage");
  inv->add_option("--stop-rel", ia.stop_rel, "Relative loss change that ends a stage");
  inv->add_option("--initial-step", ia.initial_step, "First line-search trial, m/s");
  inv->add_option("--max-halvings", ia.max_halvings, "Line-search backtracking limit");
  inv->add_flag("--no-precondition", ia.no_precondition, "Disable illumination scaling");
  inv->add_flag("--no-refine", ia.no_refine, "Disable the quadratic step refinement");

  AnalyzeArgs aa;
  auto* ana = app.add_subcommand("analyze", "Complexity metrics of dataset velocity maps");
  ana->add_option("dirs", aa.dirs, "Dataset directories")->required()->check(CLI::ExistingDirectory);
  ana->add_option("--csv", aa.csv, "CSV output file (default stdout)");
  ana->add_option("--eps", aa.eps, "Gradient threshold of the sparsity index");
  ana->add_option("--bin-width", aa.bin_width, "Entropy bin width, m/s");
  ana->add_option("--si-scale", aa.si_scale, "Factor applied to spatial information");
  ana->add_option("--calibrate", aa.calibrate, "Report the bin width whose entropy is closest");

  ValidateArgs va;
  auto* val = app.add_subcommand("validate", "Manifest checksums, shapes and velocity range");
  val->add_option("dir", va.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  val->add_flag("--no-shape-check", va.no_shape_check, "Skip the 70x70 / 5x1000x70 shape check");
  val->add_option("--vmin", va.vmin, "Lowest admissible velocity");
  val->add_option("--vmax", va.vmax, "Highest admissible velocity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  // Read by hand: CLI11 silently drops environment values that fail to parse.
  if (jobs_opt->count() == 0) {
    if (const char* env = std::getenv("FWI_FORGE_JOBS"); env != nullptr && *env != '\0') {
      const std::string_view text(env);
      const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), jobs);
      if (ec != std::errc() || end != text.data() + text.size() || jobs < 0) {
        err << "error: FWI_FORGE_JOBS must be a non-negative integer, got '" << env << "'\n";
        return kExitUsage;
      }
    }
  }
  if (jobs > 0) omp_set_num_threads(jobs);
  try {
    if (*gen) return cmd_generate(ga, out, err);
    if (*inv) return cmd_invert(ia, out, err);
    if (*ana) return cmd_analyze(aa, out);
    if (*val) return cmd_validate(va, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace fwiforge::cli
