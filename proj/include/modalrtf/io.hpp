#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modalrtf/recording.hpp"
#include "modalrtf/rtf.hpp"

namespace modalrtf {

/// 64-bit FNV-1a over raw bytes. Feed doubles through add() so the digest
/// depends on bit patterns, not on printing.
class Digest {
 public:
  Digest& add_bytes(const void* data, std::size_t size);
  Digest& add(Real v);
  Digest& add(std::int64_t v);
  Digest& add(std::uint64_t v) { return add_bytes(&v, sizeof v); }
  Digest& add(int v) { return add(static_cast<std::int64_t>(v)); }
  Digest& add(const Cartesian3& v);
  Digest& add(std::string_view s);
  [[nodiscard]] std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string digest_hex(std::uint64_t digest);

inline constexpr std::uint32_t kMeasurementFormatVersion = 1;
inline constexpr std::uint32_t kCoefficientFormatVersion = 1;

/// Little-endian binary. Header: magic "MRTFMEAS", version, Q, L, A, frequency
/// count, frequencies, active orders, geometry and config digests. Payload per
/// frequency: complex double pairs with q slowest, then loudspeaker l, then flat ab.
void write_measurements(const MeasurementTensor& mt, const std::string& path);
MeasurementTensor read_measurements(const std::string& path);

/// Little-endian binary. Header: magic "MRTFCOEF", version, c, R_s, R_r, R_s', R_sr,
/// frequency count, frequencies, per-frequency (N_s, N_r), geometry and config
/// digests. Payload per frequency: alpha row-major, (n m) slowest then (v mu).
void write_coefficients(const RtfCoefficientSet& set, const std::string& path);
RtfCoefficientSet read_coefficients(const std::string& path);

/// Comma-separated text with a header row and 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(Real v);
  CsvWriter& operator<<(std::int64_t v);
  CsvWriter& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
  CsvWriter& operator<<(const std::string& s);
  /// Ends the current row; throws if the row width differs from the header.
  void end_row();

 private:
  void separator();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string format_real(Real v);

/// frequency_hz, n, m, v, mu, re, im.
void write_coefficients_csv(const RtfCoefficientSet& set, std::ostream& out);
/// frequency_hz, q, l, a, b, re, im.
void write_measurements_csv(const MeasurementTensor& mt, std::ostream& out);
/// index, x, y, z.
void write_points_csv(std::span<const Cartesian3> points, std::ostream& out);

}  // namespace modalrtf
