#include <gtest/gtest.h>

#include <filesystem>

#include "modalrtf/io.hpp"
#include "modalrtf/pipeline.hpp"

using namespace modalrtf;
namespace fs = std::filesystem;

namespace {

std::string with_offset(const std::string& extra) {
  return "regions:\n  offset: [1.0, 1.0, 0.5]\n" + extra;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const ExperimentConfig cfg = parse_config("");
  EXPECT_EQ(cfg.arrays.speakers, 121);
  EXPECT_EQ(cfg.arrays.mic_units, 9);
  EXPECT_EQ(cfg.arrays.mic_order, 3);
  EXPECT_EQ(cfg.arrays.omni_count, 16);
  EXPECT_EQ(cfg.signal.sound_speed, 343.0);
  EXPECT_EQ(cfg.room.max_image_order, 2);
  EXPECT_EQ(cfg.extraction.order_margin, 0);
  EXPECT_FALSE(cfg.extraction.guard_modes);
  EXPECT_EQ(cfg.probes.preset, "paper-fig5");
  EXPECT_NEAR(cfg.mic_spec().local_radius, mic_radius(3, 1000.0, 343.0), 1e-15);
}

TEST(Config, DefaultGridHasSixtyOneRows) {
  const ExperimentConfig cfg = parse_config("");
  ASSERT_EQ(cfg.signal.frequencies.size(), 61u);
  EXPECT_EQ(cfg.signal.frequencies.front(), 200.0);
  EXPECT_EQ(cfg.signal.frequencies.back(), 1700.0);
  EXPECT_EQ(frequency_grid(200, 1000, 25).size(), 33u);
  EXPECT_EQ(frequency_grid(500, 500, 10), std::vector<double>{500.0});
  EXPECT_THROW(frequency_grid(0, 100, 10), ConfigError);
  EXPECT_THROW(frequency_grid(300, 100, 10), ConfigError);
  EXPECT_THROW(frequency_grid(100, 300, 0), ConfigError);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"fig2_conditioning.yaml", "fig3_non_overlapping.yaml", "fig5_broadband.yaml",
                           "fig6_overlapping.yaml", "free_field.yaml"}) {
    EXPECT_NO_THROW(load_config(std::string(MODALRTF_CONFIG_DIR "/") + name)) << name;
  }
  const ExperimentConfig fig5 = load_config(MODALRTF_CONFIG_DIR "/fig5_broadband.yaml");
  EXPECT_EQ(fig5.signal.frequencies.size(), 61u);
  EXPECT_EQ(fig5.probes.radii.size(), 4u);
  EXPECT_EQ(fig5.extraction.fit, LocalFit::kLeastSquares);
  EXPECT_EQ(fig5.extraction.direct, DirectRemoval::kSensor);
}

TEST(Config, ParsesEveryBlock) {
  const ExperimentConfig cfg = parse_config(R"(
room: {dimensions: [7, 6, 3], reflections: [0.5, 0.5, 0.6, 0.6, 0.2, 0.3], max_image_order: 1}
regions: {receiver_radius: 0.35, source_radius: 0.38, source_inner_radius: 0.25, offset: [1.5, 0.5, 0.2]}
arrays: {speakers: 130, mic_units: 10, mic_array_radius: 0.3, mic_order: 3, omni_count: 32, mic_design_frequency: 900, seed: 5}
signal: {sound_speed: 340, f_max: 900, frequencies: [300, 450.5]}
extraction: {local_fit: least_squares, direct_removal: sensor, order_margin: 1, guard_modes: true}
probes:
  radii: [0.2]
  field_resolution: 11
output: {measurements: a.bin, coefficients: b.bin}
)");
  EXPECT_EQ(cfg.room.dimensions, Cartesian3(7, 6, 3));
  EXPECT_EQ(cfg.room.wall_reflection[5], 0.3);
  EXPECT_EQ(cfg.regions.offset, Cartesian3(1.5, 0.5, 0.2));
  EXPECT_EQ(cfg.arrays.seed, 5u);
  EXPECT_EQ(cfg.arrays.omni_count, 32);
  EXPECT_EQ(cfg.signal.frequencies, (std::vector<double>{300, 450.5}));
  EXPECT_TRUE(cfg.extraction.guard_modes);
  EXPECT_EQ(cfg.probes.field_resolution, 11);
  EXPECT_EQ(cfg.output.coefficients, "b.bin");
  EXPECT_NEAR(cfg.mic_spec().local_radius, mic_radius(3, 900.0, 340.0), 1e-15);
  EXPECT_EQ(cfg.extraction_options().design_f_max, 900.0);
}

TEST(Config, ExplicitProbePairs) {
  const ExperimentConfig cfg = parse_config(with_offset(R"(
probes:
  pairs:
    - {receiver: [0.1, 0, 0], source: [0, 0.2, 0]}
    - {receiver: [0, 0, 0], source: [0, 0, -0.1]}
)"));
  EXPECT_TRUE(cfg.probes.preset.empty());
  ASSERT_EQ(probe_pairs(cfg, 0.0).size(), 2u);
  EXPECT_THROW(parse_config(with_offset("probes:\n  pairs:\n    - {receiver: [0.5, 0, 0], source: [0, 0, 0]}\n")),
               ConfigError);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config("rooms: {}"), ConfigError);
  EXPECT_THROW(parse_config("room: {size: [1, 2, 3]}"), ConfigError);
  EXPECT_THROW(parse_config("arrays: {speaker: 121}"), ConfigError);
  EXPECT_THROW(parse_config("signal: {frequencies: {begin: 100}}"), ConfigError);
  EXPECT_THROW(parse_config("extraction: {fit: least_squares}"), ConfigError);
}

TEST(Config, RejectsMalformedValues) {
  EXPECT_THROW(parse_config("room: [1, 2"), ConfigError);
  EXPECT_THROW(parse_config("room: {dimensions: [1, 2]}"), ConfigError);
  EXPECT_THROW(parse_config("room: {reflections: [0.5, 0.5]}"), ConfigError);
  EXPECT_THROW(parse_config("arrays: {speakers: many}"), ConfigError);
  EXPECT_THROW(parse_config("extraction: {local_fit: magic}"), ConfigError);
  EXPECT_THROW(parse_config("extraction: {direct_removal: none}"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Config, RejectsEachBoundViolation) {
  const std::vector<std::string> bad{
      "room: {dimensions: [-6, 5, 2.5]}",
      "room: {reflections: [1.1, 0.9, 0.9, 0.9, 0.7, 0.7]}",
      "room: {max_image_order: -1}",
      "regions: {source_inner_radius: 0.5}",
      "regions: {receiver_radius: 0}",
      "regions: {offset: [10, 0, 0]}",
      "signal: {sound_speed: 0}",
      "signal: {f_max: -5}",
      "signal: {frequencies: []}",
      "signal: {frequencies: [500, 400]}",
      "signal: {frequencies: [0, 400]}",
      "arrays: {speakers: 0}",
      "arrays: {speakers: 99}",
      "arrays: {mic_units: 0}",
      "arrays: {mic_units: 5}",
      "arrays: {mic_array_radius: 0.5}",
      "arrays: {omni_count: 15}",
      "arrays: {mic_order: 0}",
      "arrays: {mic_design_frequency: -1}",
      "extraction: {order_margin: -1}",
      "probes: {field_resolution: 1}",
      "probes: {preset: corners}",
      "probes: {radii: [0.5]}",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(parse_config(text.rfind("regions", 0) == 0 ? text : with_offset(text)), ConfigError) << text;
  }
}

TEST(Config, DigestsTrackTheRightSettings) {
  const ExperimentConfig base = parse_config(with_offset(""));
  ExperimentConfig seed = base;
  seed.arrays.seed = 9;
  EXPECT_NE(seed.measurement_digest(), base.measurement_digest());
  ExperimentConfig margin = base;
  margin.extraction.order_margin = 1;
  EXPECT_EQ(margin.measurement_digest(), base.measurement_digest());
  EXPECT_NE(margin.coefficient_digest(), base.coefficient_digest());
  ExperimentConfig probes = base;
  probes.probes.radii = {0.1};
  EXPECT_EQ(probes.coefficient_digest(), base.coefficient_digest());
  EXPECT_EQ(geometry_digest(base.geometry()), geometry_digest(base.geometry()));
}

TEST(Pipeline, DigestMismatchIsRejected) {
  ExperimentConfig cfg = parse_config(with_offset("signal: {frequencies: [400]}"));
  const MeasurementTensor mt = run_measure(cfg);
  EXPECT_NO_THROW(run_extract(cfg, mt));
  ExperimentConfig other = cfg;
  other.room.wall_reflection[0] = 0.5;
  EXPECT_THROW(run_extract(other, mt), ConfigError);
}

TEST(Pipeline, ObtainCoefficientsReusesMatchingArtifacts) {
  const fs::path dir = fs::temp_directory_path() / "modalrtf_test_config";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(with_offset("signal: {frequencies: [300, 400]}"));
  cfg.output.measurements = (dir / "m.bin").string();
  cfg.output.coefficients = (dir / "c.bin").string();
  const RtfCoefficientSet first = obtain_coefficients(cfg);
  ASSERT_TRUE(fs::exists(cfg.output.coefficients));
  const auto stamp = fs::last_write_time(cfg.output.coefficients);
  const RtfCoefficientSet again = obtain_coefficients(cfg);
  EXPECT_EQ(fs::last_write_time(cfg.output.coefficients), stamp);
  EXPECT_EQ((again.bins[1].alpha - first.bins[1].alpha).norm(), 0.0);

  cfg.extraction.order_margin = 1;
  const RtfCoefficientSet changed = obtain_coefficients(cfg);
  EXPECT_EQ(read_coefficients(cfg.output.coefficients).config_digest, cfg.coefficient_digest());
  EXPECT_EQ(changed.config_digest, cfg.coefficient_digest());
}

TEST(Pipeline, ConditioningTableAndFieldMap) {
  ExperimentConfig cfg = parse_config(with_offset("signal: {frequencies: [300, 600]}"));
  const auto rows = run_cond(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].frequency, 600.0);
  EXPECT_GE(rows[0].kappa_shell, 1.0);

  const RtfCoefficientSet set = run_extract(cfg, run_measure(cfg));
  const auto map = run_field_map(cfg, set, 600.0, FieldGrid::kReceiver, Cartesian3(1.0, 1.0, 0.5), 9, true);
  EXPECT_FALSE(map.empty());
  EXPECT_LE(map.size(), 81u);
  for (const auto& s : map) {
    EXPECT_LE(s.receiver.norm(), 0.4 + 1e-12);
    EXPECT_TRUE(s.oracle.has_value());
  }
  EXPECT_THROW(run_field_map(cfg, set, 650.0, FieldGrid::kReceiver, Cartesian3(1, 1, 0.5), 9, false), DomainError);
}
