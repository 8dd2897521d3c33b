#include "modalrtf/io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

namespace modalrtf {

static_assert(std::endian::native == std::endian::little, "file formats assume little-endian hosts");

namespace {

constexpr char kMeasurementMagic[8] = {'M', 'R', 'T', 'F', 'M', 'E', 'A', 'S'};
constexpr char kCoefficientMagic[8] = {'M', 'R', 'T', 'F', 'C', 'O', 'E', 'F'};

void ensure_parent_directory(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw ConfigError(fmt::format("cannot create directory {}: {}", parent.string(), ec.message()));
}

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path) : path_(path) {
    ensure_parent_directory(path);
    out_.open(path, std::ios::binary);
    if (!out_) throw ConfigError(fmt::format("cannot open {} for writing", path));
  }
  template <typename T>
  void put(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_bytes(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
  void put(const Complex& z) {
    put(z.real());
    put(z.imag());
  }
  void finish() {
    out_.flush();
    if (!out_) throw ConfigError(fmt::format("write to {} failed", path_));
  }

 private:
  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ConfigError(fmt::format("cannot open {}", path));
  }
  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw ConfigError(fmt::format("{} is truncated", path_));
    return v;
  }
  Complex get_complex() {
    const Real re = get<Real>();
    const Real im = get<Real>();
    return {re, im};
  }
  void expect_magic(const char (&magic)[8]) {
    char buf[8];
    in_.read(buf, 8);
    if (!in_ || std::memcmp(buf, magic, 8) != 0) {
      throw ConfigError(fmt::format("{} is not a {:.8} file", path_, magic));
    }
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw ConfigError(fmt::format("{} has trailing bytes", path_));
    }
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
};

void check_count(std::uint64_t n, std::uint64_t limit, const std::string& what, const std::string& path) {
  if (n > limit) throw ConfigError(fmt::format("{}: implausible {} = {}", path, what, n));
}

}  // namespace

Digest& Digest::add_bytes(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state_ ^= p[i];
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Digest& Digest::add(Real v) {
  if (v == 0.0) v = 0.0;  // fold -0
  return add_bytes(&v, sizeof v);
}

Digest& Digest::add(std::int64_t v) { return add_bytes(&v, sizeof v); }

Digest& Digest::add(const Cartesian3& v) { return add(v.x()).add(v.y()).add(v.z()); }

Digest& Digest::add(std::string_view s) {
  add(static_cast<std::int64_t>(s.size()));
  return add_bytes(s.data(), s.size());
}

std::string digest_hex(std::uint64_t digest) { return fmt::format("{:016x}", digest); }

void write_measurements(const MeasurementTensor& mt, const std::string& path) {
  const int nab = mt.local_mode_count();
  if (mt.blocks.size() != mt.frequencies.size() || mt.active_orders.size() != mt.frequencies.size()) {
    throw ConfigError("measurement tensor is inconsistent");
  }
  BinaryWriter w(path);
  w.put_bytes(kMeasurementMagic, 8);
  w.put(kMeasurementFormatVersion);
  w.put(static_cast<std::uint32_t>(mt.mic_count));
  w.put(static_cast<std::uint32_t>(mt.speaker_count));
  w.put(static_cast<std::uint32_t>(mt.mic_order));
  w.put(static_cast<std::uint64_t>(mt.frequencies.size()));
  for (Real f : mt.frequencies) w.put(f);
  for (int a : mt.active_orders) w.put(static_cast<std::int32_t>(a));
  w.put(mt.geometry_digest);
  w.put(mt.config_digest);
  for (const auto& block : mt.blocks) {
    if (block.rows() != mt.mic_count * nab || block.cols() != mt.speaker_count) {
      throw ConfigError("measurement block shape does not match its header");
    }
    for (int q = 0; q < mt.mic_count; ++q) {
      for (int l = 0; l < mt.speaker_count; ++l) {
        for (int ab = 0; ab < nab; ++ab) w.put(block(q * nab + ab, l));
      }
    }
  }
  w.finish();
}

MeasurementTensor read_measurements(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic(kMeasurementMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kMeasurementFormatVersion) {
    throw ConfigError(fmt::format("{}: unsupported measurement format version {}", path, version));
  }
  MeasurementTensor mt;
  mt.mic_count = static_cast<int>(r.get<std::uint32_t>());
  mt.speaker_count = static_cast<int>(r.get<std::uint32_t>());
  mt.mic_order = static_cast<int>(r.get<std::uint32_t>());
  const auto nf = r.get<std::uint64_t>();
  check_count(static_cast<std::uint64_t>(mt.mic_count) * mt.speaker_count, 1u << 24, "Q*L", path);
  check_count(static_cast<std::uint64_t>(mt.mic_order), 64, "A", path);
  check_count(nf, 1u << 20, "frequency count", path);
  mt.frequencies.resize(nf);
  for (auto& f : mt.frequencies) f = r.get<Real>();
  mt.active_orders.resize(nf);
  for (auto& a : mt.active_orders) a = r.get<std::int32_t>();
  mt.geometry_digest = r.get<std::uint64_t>();
  mt.config_digest = r.get<std::uint64_t>();
  const int nab = mt.local_mode_count();
  mt.blocks.assign(nf, MatrixXc(mt.mic_count * nab, mt.speaker_count));
  for (auto& block : mt.blocks) {
    for (int q = 0; q < mt.mic_count; ++q) {
      for (int l = 0; l < mt.speaker_count; ++l) {
        for (int ab = 0; ab < nab; ++ab) block(q * nab + ab, l) = r.get_complex();
      }
    }
  }
  r.expect_end();
  return mt;
}

void write_coefficients(const RtfCoefficientSet& set, const std::string& path) {
  BinaryWriter w(path);
  w.put_bytes(kCoefficientMagic, 8);
  w.put(kCoefficientFormatVersion);
  w.put(set.sound_speed);
  w.put(set.regions.source_radius);
  w.put(set.regions.receiver_radius);
  w.put(set.regions.source_inner_radius);
  for (int i = 0; i < 3; ++i) w.put(set.regions.offset[i]);
  w.put(static_cast<std::uint64_t>(set.bins.size()));
  for (const auto& b : set.bins) w.put(b.frequency);
  for (const auto& b : set.bins) {
    w.put(static_cast<std::int32_t>(b.source_order));
    w.put(static_cast<std::int32_t>(b.receiver_order));
  }
  w.put(set.geometry_digest);
  w.put(set.config_digest);
  for (const auto& b : set.bins) {
    if (b.alpha.rows() != harmonic_count(b.source_order) ||
        b.alpha.cols() != harmonic_count(b.receiver_order)) {
      throw ConfigError(fmt::format("alpha block at {} Hz does not match its orders", b.frequency));
    }
    for (Eigen::Index nm = 0; nm < b.alpha.rows(); ++nm) {
      for (Eigen::Index vmu = 0; vmu < b.alpha.cols(); ++vmu) w.put(b.alpha(nm, vmu));
    }
  }
  w.finish();
}

RtfCoefficientSet read_coefficients(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic(kCoefficientMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kCoefficientFormatVersion) {
    throw ConfigError(fmt::format("{}: unsupported coefficient format version {}", path, version));
  }
  RtfCoefficientSet set;
  set.sound_speed = r.get<Real>();
  set.regions.source_radius = r.get<Real>();
  set.regions.receiver_radius = r.get<Real>();
  set.regions.source_inner_radius = r.get<Real>();
  for (int i = 0; i < 3; ++i) set.regions.offset[i] = r.get<Real>();
  const auto nf = r.get<std::uint64_t>();
  check_count(nf, 1u << 20, "frequency count", path);
  set.bins.resize(nf);
  for (auto& b : set.bins) b.frequency = r.get<Real>();
  for (auto& b : set.bins) {
    b.source_order = r.get<std::int32_t>();
    b.receiver_order = r.get<std::int32_t>();
    if (b.source_order < 0 || b.receiver_order < 0 || b.source_order > 200 || b.receiver_order > 200) {
      throw ConfigError(fmt::format("{}: invalid orders at {} Hz", path, b.frequency));
    }
  }
  set.geometry_digest = r.get<std::uint64_t>();
  set.config_digest = r.get<std::uint64_t>();
  for (auto& b : set.bins) {
    b.alpha.resize(harmonic_count(b.source_order), harmonic_count(b.receiver_order));
    for (Eigen::Index nm = 0; nm < b.alpha.rows(); ++nm) {
      for (Eigen::Index vmu = 0; vmu < b.alpha.cols(); ++vmu) b.alpha(nm, vmu) = r.get_complex();
    }
  }
  r.expect_end();
  return set;
}

std::string format_real(Real v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) *this << h;
  end_row();
}

void CsvWriter::separator() {
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::operator<<(Real v) {
  separator();
  out_ << format_real(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::int64_t v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  separator();
  out_ << s;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw std::logic_error(fmt::format("csv row has {} fields, header has {}", filled_, columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

void write_coefficients_csv(const RtfCoefficientSet& set, std::ostream& out) {
  CsvWriter csv(out, {"frequency_hz", "n", "m", "v", "mu", "re", "im"});
  for (const auto& b : set.bins) {
    for (Eigen::Index nm = 0; nm < b.alpha.rows(); ++nm) {
      const auto src = HarmonicIndex::from_flat(static_cast<int>(nm));
      for (Eigen::Index vmu = 0; vmu < b.alpha.cols(); ++vmu) {
        const auto rcv = HarmonicIndex::from_flat(static_cast<int>(vmu));
        csv << b.frequency << src.order << src.degree << rcv.order << rcv.degree
            << b.alpha(nm, vmu).real() << b.alpha(nm, vmu).imag();
        csv.end_row();
      }
    }
  }
}

void write_measurements_csv(const MeasurementTensor& mt, std::ostream& out) {
  CsvWriter csv(out, {"frequency_hz", "q", "l", "a", "b", "re", "im"});
  const int nab = mt.local_mode_count();
  for (std::size_t i = 0; i < mt.blocks.size(); ++i) {
    for (int q = 0; q < mt.mic_count; ++q) {
      for (int l = 0; l < mt.speaker_count; ++l) {
        for (int ab = 0; ab < nab; ++ab) {
          const auto idx = HarmonicIndex::from_flat(ab);
          const Complex z = mt.blocks[i](q * nab + ab, l);
          csv << mt.frequencies[i] << q << l << idx.order << idx.degree << z.real() << z.imag();
          csv.end_row();
        }
      }
    }
  }
}

void write_points_csv(std::span<const Cartesian3> points, std::ostream& out) {
  CsvWriter csv(out, {"index", "x", "y", "z"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv << static_cast<std::int64_t>(i) << points[i].x() << points[i].y() << points[i].z();
    csv.end_row();
  }
}

}  // namespace modalrtf
