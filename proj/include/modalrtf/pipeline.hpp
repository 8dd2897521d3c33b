#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modalrtf/extraction.hpp"
#include "modalrtf/recording.hpp"
#include "modalrtf/room.hpp"
#include "modalrtf/rtf.hpp"

namespace modalrtf {

/// Every constant of one experiment. Parsed from YAML; see configs/ for the schema.
struct ExperimentConfig {
  RoomModel room;
  RegionPair regions;

  struct Arrays {
    int speakers = 121;
    int mic_units = 9;
    Real mic_array_radius = 0.4;
    int mic_order = 3;
    int omni_count = 16;
    /// The HO-mic local radius is mic_radius(mic_order, this, c); 0 means signal.f_max.
    Real mic_design_frequency = 0.0;
    std::uint64_t seed = 1;
  } arrays;

  struct Signal {
    Real sound_speed = 343.0;
    Real f_max = 1000.0;
    std::vector<Real> frequencies;
  } signal;

  struct Extraction {
    LocalFit fit = LocalFit::kOrthogonalSum;
    DirectRemoval direct = DirectRemoval::kAnalytic;
    int order_margin = 0;
    bool guard_modes = false;
  } extraction;

  struct Probes {
    std::string preset = "paper-fig5";
    std::vector<Real> radii{0.4};
    /// Explicit pairs; used when preset is empty. Receiver about O, source about O_s.
    std::vector<ProbePair> pairs;
    int field_resolution = 41;
  } probes;

  struct Output {
    std::string measurements = "measurements.bin";
    std::string coefficients = "coefficients.bin";
  } output;

  /// Throws ConfigError naming the violated bound. Cheap: runs before any simulation.
  void validate() const;

  [[nodiscard]] HoMicSpec mic_spec() const;
  [[nodiscard]] ArrayGeometry geometry() const;
  [[nodiscard]] ExtractionOptions extraction_options() const;

  /// Everything the measurement tensor depends on.
  [[nodiscard]] std::uint64_t measurement_digest() const;
  /// measurement_digest plus the extraction settings.
  [[nodiscard]] std::uint64_t coefficient_digest() const;
};

std::vector<Real> frequency_grid(Real start, Real stop, Real step);

ExperimentConfig parse_config(std::string_view yaml_text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t geometry_digest(const ArrayGeometry& geometry);

MeasurementTensor run_measure(const ExperimentConfig& cfg, int threads = 1);

/// Throws ConfigError when the tensor was recorded under a different configuration.
RtfCoefficientSet run_extract(const ExperimentConfig& cfg, const MeasurementTensor& mt,
                              int threads = 1);

/// Loads the coefficient file when its digest matches, otherwise measures
/// (reusing a matching measurement file) and extracts, writing both artifacts.
RtfCoefficientSet obtain_coefficients(const ExperimentConfig& cfg, int threads = 1);

/// Probe pairs for one radius case: the preset at that radius, or the explicit list.
std::vector<ProbePair> probe_pairs(const ExperimentConfig& cfg, Real radius);

struct SweepTable {
  std::vector<Real> radii;
  std::vector<Real> frequencies;
  /// errors[r][f]
  std::vector<std::vector<Real>> errors;
};

SweepTable run_sweep(const ExperimentConfig& cfg, const RtfCoefficientSet& set, int threads = 1);

struct CondRow {
  Real frequency = 0.0;
  Real kappa_shell = 0.0;
  Real kappa_sphere = 0.0;
};

/// kappa_2 of T for the configured shell and for a single sphere at R_s with the same L.
std::vector<CondRow> run_cond(const ExperimentConfig& cfg, int threads = 1);

struct FieldSample {
  Cartesian3 receiver;  // about O
  Cartesian3 source;    // about O
  Complex estimate;
  std::optional<Complex> oracle;
};

/// Which point is swept over a horizontal slice of its region.
enum class FieldGrid { kReceiver, kSource };

/// resolution x resolution slice through the region center at its own height;
/// points outside the region are skipped. `fixed` is about O.
std::vector<FieldSample> run_field_map(const ExperimentConfig& cfg, const RtfCoefficientSet& set,
                                       Real frequency, FieldGrid grid, const Cartesian3& fixed,
                                       int resolution, bool with_oracle);

}  // namespace modalrtf
