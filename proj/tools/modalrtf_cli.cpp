// Command-line front end: measure -> extract -> reconstruct / sweep, plus cond and geometry export.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "modalrtf/io.hpp"
#include "modalrtf/pipeline.hpp"

using namespace modalrtf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string probe_preset;
};

ExperimentConfig load(const CommonArgs& args) {
  if (args.config.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(args.config);
  if (args.seed) cfg.arrays.seed = *args.seed;
  if (!args.probe_preset.empty()) {
    cfg.probes.preset = args.probe_preset;
    if (cfg.probes.radii.empty()) cfg.probes.radii = {0.4};
  }
  cfg.validate();
  return cfg;
}

/// Writes to --out when given, else to stdout.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError(fmt::format("cannot open {} for writing", path));
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Cartesian3 point(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

int cmd_measure(const CommonArgs& args, const std::string& csv_path) {
  const ExperimentConfig cfg = load(args);
  const MeasurementTensor mt = run_measure(cfg, args.threads);
  const std::string path = args.out.empty() ? cfg.output.measurements : args.out;
  write_measurements(mt, path);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    write_measurements_csv(mt, csv);
  }
  std::cerr << fmt::format("wrote {} ({} frequencies, Q = {}, L = {}, A = {}, digest {})\n", path,
                           mt.frequencies.size(), mt.mic_count, mt.speaker_count, mt.mic_order,
                           digest_hex(mt.config_digest));
  return kExitOk;
}

int cmd_extract(const CommonArgs& args, const std::string& measurements, const std::string& csv_path) {
  const ExperimentConfig cfg = load(args);
  const MeasurementTensor mt = read_measurements(measurements.empty() ? cfg.output.measurements : measurements);
  const RtfCoefficientSet set = run_extract(cfg, mt, args.threads);
  const std::string path = args.out.empty() ? cfg.output.coefficients : args.out;
  write_coefficients(set, path);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    write_coefficients_csv(set, csv);
  }
  std::cerr << fmt::format("wrote {} ({} frequencies)\n", path, set.bins.size());
  return kExitOk;
}

int cmd_reconstruct(const CommonArgs& args, const std::string& coefficients, double frequency,
                    const std::vector<double>& source, const std::vector<double>& receiver,
                    bool oracle, int resolution) {
  const ExperimentConfig cfg = load(args);
  const RtfCoefficientSet set = read_coefficients(coefficients.empty() ? cfg.output.coefficients : coefficients);
  if (set.config_digest != cfg.coefficient_digest()) {
    throw ConfigError("coefficient file was extracted under a different configuration");
  }
  const WaveContext ctx(frequency, set.sound_speed);

  std::vector<FieldSample> samples;
  if (!source.empty() && !receiver.empty()) {
    FieldSample s;
    s.receiver = point(receiver);
    s.source = point(source);
    s.estimate = reconstruct_rtf(set, to_spherical(s.receiver), to_spherical(s.source - set.regions.offset), ctx);
    if (oracle) s.oracle = rtf_oracle(cfg.room, s.receiver, s.source, ctx);
    samples.push_back(s);
  } else if (!source.empty()) {
    samples = run_field_map(cfg, set, frequency, FieldGrid::kReceiver, point(source), resolution, oracle);
  } else if (!receiver.empty()) {
    samples = run_field_map(cfg, set, frequency, FieldGrid::kSource, point(receiver), resolution, oracle);
  } else {
    throw ConfigError("reconstruct needs --source, --receiver, or both");
  }

  CsvSink sink(args.out);
  std::vector<std::string> header{"rx", "ry", "rz", "sx", "sy", "sz", "re", "im"};
  if (oracle) header.insert(header.end(), {"oracle_re", "oracle_im", "abs_deviation"});
  CsvWriter csv(sink.stream(), header);
  for (const auto& s : samples) {
    csv << s.receiver.x() << s.receiver.y() << s.receiver.z() << s.source.x() << s.source.y() << s.source.z()
        << s.estimate.real() << s.estimate.imag();
    if (oracle) csv << s.oracle->real() << s.oracle->imag() << std::abs(*s.oracle - s.estimate);
    csv.end_row();
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  const RtfCoefficientSet set = obtain_coefficients(cfg, args.threads);
  const SweepTable table = run_sweep(cfg, set, args.threads);
  std::vector<std::string> header{"frequency_hz"};
  for (Real r : table.radii) header.push_back(cfg.probes.preset.empty() ? "E" : fmt::format("E_R{:g}", r));
  CsvSink sink(args.out);
  CsvWriter csv(sink.stream(), header);
  for (std::size_t i = 0; i < table.frequencies.size(); ++i) {
    csv << table.frequencies[i];
    for (const auto& column : table.errors) csv << column[i];
    csv.end_row();
  }
  return kExitOk;
}

int cmd_cond(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  CsvSink sink(args.out);
  CsvWriter csv(sink.stream(), {"frequency_hz", "kappa_shell", "kappa_sphere"});
  for (const auto& row : run_cond(cfg, args.threads)) {
    csv << row.frequency << row.kappa_shell << row.kappa_sphere;
    csv.end_row();
  }
  return kExitOk;
}

int cmd_geometry_export(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  const ArrayGeometry g = cfg.geometry();
  const std::filesystem::path dir = args.out.empty() ? "geometry" : args.out;
  std::filesystem::create_directories(dir);
  std::vector<Cartesian3> omnis;
  for (int q = 0; q < g.mics.unit_count(); ++q) {
    for (int i = 0; i < g.mics.spec.omni_count; ++i) omnis.push_back(g.mics.omni_position(q, i));
  }
  const std::vector<std::pair<std::string, std::vector<Cartesian3>>> files{
      {"loudspeakers.csv", g.speakers_about_origin()},
      {"mic_centers.csv", g.mics.centers},
      {"omnis.csv", omnis},
  };
  for (const auto& [name, points] : files) {
    std::ofstream out(dir / name);
    if (!out) throw ConfigError(fmt::format("cannot write {}", (dir / name).string()));
    write_points_csv(points, out);
  }
  std::cerr << fmt::format("wrote {} files to {}\n", files.size(), dir.string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modal room transfer function parameterization"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs args;
  app.add_option("--config", args.config, "Experiment YAML file");
  app.add_option("--out", args.out, "Output file (directory for geometry-export)");
  app.add_option("--seed", args.seed, "Override the loudspeaker radius seed");
  app.add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--probe-preset", args.probe_preset, "Probe preset")->check(CLI::IsMember({"paper-fig5"}));

  std::string csv_path;
  std::string measurements;
  std::string coefficients;
  double frequency = 0.0;
  std::vector<double> source;
  std::vector<double> receiver;
  bool oracle = false;
  int resolution = 0;

  auto* measure = app.add_subcommand("measure", "Simulate the raw loudspeaker-to-microphone tensor");
  measure->add_option("--csv", csv_path, "Also export the tensor as CSV");

  auto* extract = app.add_subcommand("extract", "Extract the coefficient set from a measurement file");
  extract->add_option("--measurements", measurements, "Measurement file (default from config)");
  extract->add_option("--csv", csv_path, "Also export the coefficients as CSV");

  auto* reconstruct = app.add_subcommand("reconstruct", "Evaluate the parameterized RTF");
  reconstruct->add_option("--coefficients", coefficients, "Coefficient file (default from config)");
  reconstruct->add_option("--frequency", frequency, "Frequency in Hz (must be on the grid)")->required();
  reconstruct->add_option("--source", source, "Source point x,y,z about the room center")
      ->delimiter(',')
      ->expected(3);
  reconstruct->add_option("--receiver", receiver, "Receiver point x,y,z about the room center")
      ->delimiter(',')
      ->expected(3);
  reconstruct->add_flag("--oracle", oracle, "Add image-source values and deviations");
  reconstruct->add_option("--resolution", resolution, "Field map grid size per axis");

  auto* sweep = app.add_subcommand("sweep", "Broadband error E(f) per probe radius");
  auto* cond = app.add_subcommand("cond", "Condition number of T: shell vs single sphere");
  auto* geometry = app.add_subcommand("geometry-export", "Write array positions as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*measure) return cmd_measure(args, csv_path);
    if (*extract) return cmd_extract(args, measurements, csv_path);
    if (*reconstruct) {
      const ExperimentConfig cfg = load(args);
      return cmd_reconstruct(args, coefficients, frequency, source, receiver, oracle,
                             resolution > 0 ? resolution : cfg.probes.field_resolution);
    }
    if (*sweep) return cmd_sweep(args);
    if (*cond) return cmd_cond(args);
    if (*geometry) return cmd_geometry_export(args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
