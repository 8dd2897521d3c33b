#include "modalrtf/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "modalrtf/io.hpp"
#include "modalrtf/parallel.hpp"

namespace modalrtf {

namespace {

constexpr Real kCoincidenceTolerance = 1e-6;

template <typename T>
T scalar(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
  }
}

std::vector<Real> real_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(fmt::format("config key '{}' must be a list", key));
  std::vector<Real> out;
  for (const auto& v : node) {
    try {
      out.push_back(v.as<Real>());
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("config key '{}' must hold numbers", key));
    }
  }
  return out;
}

Cartesian3 vec3(const YAML::Node& node, const std::string& key) {
  const auto v = real_list(node, key);
  if (v.size() != 3) throw ConfigError(fmt::format("config key '{}' needs 3 components", key));
  return {v[0], v[1], v[2]};
}

void reject_unknown(const YAML::Node& node, const std::string& block,
                    std::initializer_list<std::string_view> known) {
  if (!node) return;
  if (!node.IsMap()) throw ConfigError(fmt::format("config block '{}' must be a mapping", block));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(fmt::format("unknown key '{}' in block '{}'", key, block));
  }
}

LocalFit parse_fit(const std::string& s) {
  if (s == "least_squares") return LocalFit::kLeastSquares;
  if (s == "orthogonal_sum") return LocalFit::kOrthogonalSum;
  throw ConfigError(fmt::format("extraction.local_fit must be least_squares or orthogonal_sum, got '{}'", s));
}

DirectRemoval parse_direct(const std::string& s) {
  if (s == "sensor") return DirectRemoval::kSensor;
  if (s == "analytic") return DirectRemoval::kAnalytic;
  throw ConfigError(fmt::format("extraction.direct_removal must be sensor or analytic, got '{}'", s));
}

bool within(const Cartesian3& p, Real radius) { return p.norm() <= radius + 1e-12; }

}  // namespace

std::vector<Real> frequency_grid(Real start, Real stop, Real step) {
  if (!(start > 0.0) || !(stop >= start) || !(step > 0.0)) {
    throw ConfigError("frequency grid needs 0 < start <= stop and step > 0");
  }
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(start + static_cast<Real>(i) * step);
  return out;
}

ExperimentConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config is not valid YAML: {}", e.what()));
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  reject_unknown(root, "top level", {"room", "regions", "arrays", "signal", "extraction", "probes", "output"});

  ExperimentConfig cfg;
  cfg.signal.frequencies = frequency_grid(200.0, 1700.0, 25.0);

  if (const auto room = root["room"]) {
    reject_unknown(room, "room", {"dimensions", "reflections", "max_image_order"});
    Cartesian3 dims = cfg.room.dimensions;
    std::array<Real, 6> refl = cfg.room.wall_reflection;
    if (room["dimensions"]) dims = vec3(room["dimensions"], "room.dimensions");
    if (room["reflections"]) {
      const auto r = real_list(room["reflections"], "room.reflections");
      if (r.size() != 6) throw ConfigError("room.reflections needs 6 values (x-, x+, y-, y+, z-, z+)");
      std::copy(r.begin(), r.end(), refl.begin());
    }
    cfg.room = RoomModel::centered(dims, refl, scalar(room, "max_image_order", cfg.room.max_image_order));
  }

  if (const auto reg = root["regions"]) {
    reject_unknown(reg, "regions", {"receiver_radius", "source_radius", "source_inner_radius", "offset"});
    cfg.regions.receiver_radius = scalar(reg, "receiver_radius", cfg.regions.receiver_radius);
    cfg.regions.source_radius = scalar(reg, "source_radius", cfg.regions.source_radius);
    cfg.regions.source_inner_radius = scalar(reg, "source_inner_radius", cfg.regions.source_inner_radius);
    if (reg["offset"]) cfg.regions.offset = vec3(reg["offset"], "regions.offset");
  }

  if (const auto arr = root["arrays"]) {
    reject_unknown(arr, "arrays", {"speakers", "mic_units", "mic_array_radius", "mic_order", "omni_count",
                                   "mic_design_frequency", "seed"});
    auto& a = cfg.arrays;
    a.speakers = scalar(arr, "speakers", a.speakers);
    a.mic_units = scalar(arr, "mic_units", a.mic_units);
    a.mic_array_radius = scalar(arr, "mic_array_radius", a.mic_array_radius);
    a.mic_order = scalar(arr, "mic_order", a.mic_order);
    a.omni_count = scalar(arr, "omni_count", a.omni_count);
    a.mic_design_frequency = scalar(arr, "mic_design_frequency", a.mic_design_frequency);
    a.seed = scalar(arr, "seed", a.seed);
  }

  if (const auto sig = root["signal"]) {
    reject_unknown(sig, "signal", {"sound_speed", "f_max", "frequencies"});
    cfg.signal.sound_speed = scalar(sig, "sound_speed", cfg.signal.sound_speed);
    cfg.signal.f_max = scalar(sig, "f_max", cfg.signal.f_max);
    if (const auto fr = sig["frequencies"]) {
      if (fr.IsSequence()) {
        cfg.signal.frequencies = real_list(fr, "signal.frequencies");
      } else {
        reject_unknown(fr, "signal.frequencies", {"start", "stop", "step"});
        cfg.signal.frequencies = frequency_grid(scalar(fr, "start", 200.0), scalar(fr, "stop", 1700.0),
                                                scalar(fr, "step", 25.0));
      }
    }
  }

  if (const auto ex = root["extraction"]) {
    reject_unknown(ex, "extraction", {"local_fit", "direct_removal", "order_margin", "guard_modes"});
    auto& e = cfg.extraction;
    if (ex["local_fit"]) e.fit = parse_fit(scalar<std::string>(ex, "local_fit", ""));
    if (ex["direct_removal"]) e.direct = parse_direct(scalar<std::string>(ex, "direct_removal", ""));
    e.order_margin = scalar(ex, "order_margin", e.order_margin);
    e.guard_modes = scalar(ex, "guard_modes", e.guard_modes);
  }

  if (const auto pr = root["probes"]) {
    reject_unknown(pr, "probes", {"preset", "radii", "pairs", "field_resolution"});
    auto& p = cfg.probes;
    p.preset = scalar<std::string>(pr, "preset", p.preset);
    if (pr["radii"]) p.radii = real_list(pr["radii"], "probes.radii");
    if (const auto pairs = pr["pairs"]) {
      if (!pairs.IsSequence()) throw ConfigError("probes.pairs must be a list");
      for (const auto& pair : pairs) {
        reject_unknown(pair, "probes.pairs[]", {"receiver", "source"});
        if (!pair["receiver"] || !pair["source"]) {
          throw ConfigError("each probe pair needs receiver and source");
        }
        p.pairs.push_back({vec3(pair["receiver"], "receiver"), vec3(pair["source"], "source")});
      }
      if (!pr["preset"]) p.preset.clear();
    }
    p.field_resolution = scalar(pr, "field_resolution", p.field_resolution);
  }

  if (const auto out = root["output"]) {
    reject_unknown(out, "output", {"measurements", "coefficients"});
    cfg.output.measurements = scalar(out, "measurements", cfg.output.measurements);
    cfg.output.coefficients = scalar(out, "coefficients", cfg.output.coefficients);
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config {}", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

HoMicSpec ExperimentConfig::mic_spec() const {
  HoMicSpec spec;
  spec.order = arrays.mic_order;
  spec.omni_count = arrays.omni_count;
  const Real design = arrays.mic_design_frequency > 0.0 ? arrays.mic_design_frequency : signal.f_max;
  spec.local_radius = mic_radius(arrays.mic_order, design, signal.sound_speed);
  return spec;
}

ArrayGeometry ExperimentConfig::geometry() const {
  ArrayGeometry g;
  g.regions = regions;
  g.speakers = shell_array(arrays.speakers, regions.source_radius, regions.source_inner_radius, arrays.seed);
  g.mics = MicArray::spherical(arrays.mic_units, arrays.mic_array_radius, mic_spec());
  return g;
}

ExtractionOptions ExperimentConfig::extraction_options() const {
  ExtractionOptions o;
  o.design_f_max = signal.f_max;
  o.order_margin = extraction.order_margin;
  o.guard_modes = extraction.guard_modes;
  o.direct = extraction.direct;
  o.fit = extraction.fit;
  return o;
}

void ExperimentConfig::validate() const {
  room.validate();
  regions.validate();
  if (!(signal.sound_speed > 0.0)) throw ConfigError("signal.sound_speed must be positive");
  if (!(signal.f_max > 0.0)) throw ConfigError("signal.f_max must be positive");
  if (signal.frequencies.empty()) throw ConfigError("signal.frequencies must not be empty");
  for (std::size_t i = 0; i < signal.frequencies.size(); ++i) {
    if (!(signal.frequencies[i] > 0.0)) throw ConfigError("frequencies must be positive");
    if (i > 0 && !(signal.frequencies[i] > signal.frequencies[i - 1])) {
      throw ConfigError("frequencies must be strictly increasing");
    }
  }
  if (arrays.speakers < 1) throw ConfigError("arrays.speakers must be >= 1");
  if (arrays.mic_units < 1) throw ConfigError("arrays.mic_units must be >= 1");
  if (arrays.mic_order < 1) throw ConfigError("arrays.mic_order must be >= 1");
  if (!(arrays.mic_array_radius > 0.0 && arrays.mic_array_radius <= regions.receiver_radius)) {
    throw ConfigError(fmt::format("mic unit centers must lie within R_r = {}: mic_array_radius = {}",
                                  regions.receiver_radius, arrays.mic_array_radius));
  }
  if (!(arrays.mic_design_frequency >= 0.0)) throw ConfigError("arrays.mic_design_frequency must be >= 0");
  if (extraction.order_margin < 0) throw ConfigError("extraction.order_margin must be >= 0");
  if (probes.field_resolution < 2) throw ConfigError("probes.field_resolution must be >= 2");
  if (!probes.preset.empty() && probes.preset != "paper-fig5") {
    throw ConfigError(fmt::format("unknown probe preset '{}'", probes.preset));
  }
  const Real probe_limit = std::min(regions.receiver_radius, regions.source_radius);
  for (Real r : probes.radii) {
    if (!(r >= 0.0 && r <= probe_limit)) {
      throw ConfigError(fmt::format("probe radius {} lies outside the regions (limit {})", r, probe_limit));
    }
  }
  for (const auto& p : probes.pairs) {
    if (!within(p.receiver, regions.receiver_radius) || !within(p.source, regions.source_radius)) {
      throw ConfigError("explicit probe pair lies outside its region");
    }
  }
  mic_spec().validate();

  // Aliasing bounds at the design frequency.
  const WaveContext design(signal.f_max, signal.sound_speed);
  const RegionOrders orders = region_orders(regions, design);
  check_speaker_aliasing(arrays.speakers, orders.source, false);
  check_mic_aliasing(arrays.mic_units, arrays.mic_order, orders.receiver, false);

  // Containment and coincidence.
  const ArrayGeometry g = geometry();
  const auto speakers = g.speakers_about_origin();
  for (std::size_t l = 0; l < speakers.size(); ++l) {
    if (!room.contains(speakers[l])) throw ConfigError(fmt::format("loudspeaker {} lies outside the room", l));
  }
  for (int q = 0; q < g.mics.unit_count(); ++q) {
    for (int i = 0; i < g.mics.spec.omni_count; ++i) {
      const Cartesian3 x = g.mics.omni_position(q, i);
      if (!room.contains(x)) throw ConfigError(fmt::format("omni {} of mic unit {} lies outside the room", i, q));
      for (std::size_t l = 0; l < speakers.size(); ++l) {
        if ((x - speakers[l]).norm() < kCoincidenceTolerance) {
          throw ConfigError(fmt::format("loudspeaker {} coincides with omni {} of mic unit {}", l, i, q));
        }
      }
    }
    for (std::size_t l = 0; l < speakers.size(); ++l) {
      if ((g.mics.centers[static_cast<std::size_t>(q)] - speakers[l]).norm() < kCoincidenceTolerance) {
        throw ConfigError(fmt::format("loudspeaker {} coincides with mic unit {} center", l, q));
      }
    }
  }
}

std::uint64_t geometry_digest(const ArrayGeometry& geometry) {
  Digest d;
  d.add(geometry.regions.receiver_radius)
      .add(geometry.regions.source_radius)
      .add(geometry.regions.source_inner_radius)
      .add(geometry.regions.offset);
  d.add(geometry.speaker_count());
  for (const auto& s : geometry.speakers_about_origin()) d.add(s);
  d.add(geometry.mics.unit_count()).add(geometry.mics.spec.order).add(geometry.mics.spec.omni_count);
  d.add(geometry.mics.spec.local_radius);
  for (const auto& c : geometry.mics.centers) d.add(c);
  for (const auto& o : geometry.mics.local_offsets) d.add(o.radius).add(o.theta).add(o.phi);
  return d.value();
}

std::uint64_t ExperimentConfig::measurement_digest() const {
  Digest d;
  d.add(std::string_view("measurement"));
  d.add(room.dimensions).add(room.origin_offset).add(room.max_image_order);
  for (Real b : room.wall_reflection) d.add(b);
  d.add(geometry_digest(geometry()));
  d.add(signal.sound_speed);
  d.add(static_cast<int>(signal.frequencies.size()));
  for (Real f : signal.frequencies) d.add(f);
  d.add(static_cast<int>(extraction.fit));
  return d.value();
}

std::uint64_t ExperimentConfig::coefficient_digest() const {
  Digest d;
  d.add(std::string_view("coefficients"));
  d.add(measurement_digest());
  d.add(signal.f_max).add(extraction.order_margin).add(static_cast<int>(extraction.guard_modes));
  d.add(static_cast<int>(extraction.direct));
  return d.value();
}

MeasurementTensor run_measure(const ExperimentConfig& cfg, int threads) {
  const ArrayGeometry g = cfg.geometry();
  MeasurementTensor mt = simulate_raw_measurements(cfg.room, g.speakers_about_origin(), g.mics,
                                                   cfg.signal.frequencies, cfg.signal.sound_speed,
                                                   cfg.extraction.fit, threads);
  mt.geometry_digest = geometry_digest(g);
  mt.config_digest = cfg.measurement_digest();
  return mt;
}

RtfCoefficientSet run_extract(const ExperimentConfig& cfg, const MeasurementTensor& mt, int threads) {
  const ArrayGeometry g = cfg.geometry();
  if (mt.geometry_digest != geometry_digest(g) || mt.config_digest != cfg.measurement_digest()) {
    throw ConfigError(fmt::format(
        "measurement digest mismatch: file has geometry {} / config {}, this config expects {} / {}",
        digest_hex(mt.geometry_digest), digest_hex(mt.config_digest), digest_hex(geometry_digest(g)),
        digest_hex(cfg.measurement_digest())));
  }
  RtfCoefficientSet set = extract_coefficients(mt, g, cfg.signal.sound_speed, cfg.extraction_options(), threads);
  set.config_digest = cfg.coefficient_digest();
  return set;
}

RtfCoefficientSet obtain_coefficients(const ExperimentConfig& cfg, int threads) {
  namespace fs = std::filesystem;
  if (fs::exists(cfg.output.coefficients)) {
    try {
      RtfCoefficientSet set = read_coefficients(cfg.output.coefficients);
      if (set.config_digest == cfg.coefficient_digest()) return set;
    } catch (const ConfigError&) {
      // stale or foreign file; rebuild below
    }
  }
  std::optional<MeasurementTensor> mt;
  if (fs::exists(cfg.output.measurements)) {
    try {
      mt = read_measurements(cfg.output.measurements);
      if (mt->config_digest != cfg.measurement_digest()) mt.reset();
    } catch (const ConfigError&) {
      mt.reset();
    }
  }
  if (!mt) {
    mt = run_measure(cfg, threads);
    write_measurements(*mt, cfg.output.measurements);
  }
  RtfCoefficientSet set = run_extract(cfg, *mt, threads);
  write_coefficients(set, cfg.output.coefficients);
  return set;
}

std::vector<ProbePair> probe_pairs(const ExperimentConfig& cfg, Real radius) {
  if (cfg.probes.preset == "paper-fig5") return axis_probes(radius);
  if (cfg.probes.pairs.empty()) throw ConfigError("no probes configured");
  return cfg.probes.pairs;
}

SweepTable run_sweep(const ExperimentConfig& cfg, const RtfCoefficientSet& set, int threads) {
  SweepTable table;
  table.frequencies = set.frequencies();
  table.radii = cfg.probes.preset.empty() ? std::vector<Real>{0.0} : cfg.probes.radii;
  for (Real r : table.radii) {
    const auto sweep = broadband_sweep(set, cfg.room, probe_pairs(cfg, r), threads);
    std::vector<Real> column;
    column.reserve(sweep.size());
    for (const auto& [f, e] : sweep) column.push_back(e);
    table.errors.push_back(std::move(column));
  }
  return table;
}

std::vector<CondRow> run_cond(const ExperimentConfig& cfg, int threads) {
  const auto shell = shell_array(cfg.arrays.speakers, cfg.regions.source_radius,
                                 cfg.regions.source_inner_radius, cfg.arrays.seed);
  const auto sphere = sphere_array(cfg.arrays.speakers, cfg.regions.source_radius);
  std::vector<CondRow> rows(cfg.signal.frequencies.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const WaveContext ctx(cfg.signal.frequencies[i], cfg.signal.sound_speed);
    const int n = truncation_order(ctx.wavenumber(), cfg.regions.source_radius);
    rows[i] = {ctx.frequency(), condition_number(build_T(shell, n, ctx)),
               condition_number(build_T(sphere, n, ctx))};
  });
  return rows;
}

std::vector<FieldSample> run_field_map(const ExperimentConfig& cfg, const RtfCoefficientSet& set,
                                       Real frequency, FieldGrid grid, const Cartesian3& fixed,
                                       int resolution, bool with_oracle) {
  if (resolution < 2) throw ConfigError("field map resolution must be >= 2");
  const WaveContext ctx(frequency, set.sound_speed);
  (void)set.at_frequency(frequency);  // off-grid check before any work
  const Cartesian3 center = grid == FieldGrid::kReceiver ? Cartesian3::Zero() : set.regions.offset;
  const Real radius = grid == FieldGrid::kReceiver ? set.regions.receiver_radius : set.regions.source_radius;

  std::vector<FieldSample> out;
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const Real u = -radius + 2.0 * radius * ix / (resolution - 1);
      const Real v = -radius + 2.0 * radius * iy / (resolution - 1);
      const Cartesian3 local(u, v, 0.0);
      if (local.norm() > radius) continue;
      FieldSample s;
      s.receiver = grid == FieldGrid::kReceiver ? center + local : fixed;
      s.source = grid == FieldGrid::kSource ? center + local : fixed;
      if ((s.receiver - s.source).norm() < kCoincidenceTolerance) continue;
      s.estimate = reconstruct_rtf(set, to_spherical(s.receiver), to_spherical(s.source - set.regions.offset), ctx);
      if (with_oracle) s.oracle = rtf_oracle(cfg.room, s.receiver, s.source, ctx);
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace modalrtf
