#include "somnograph/edf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

namespace somnograph {

namespace {

constexpr int kDigitalMin = -32768;
constexpr int kDigitalMax = 32767;

std::string pad_field(std::string value, std::size_t width, const char* field) {
  if (value.size() > width)
    throw ArgumentError(std::string("EDF field '") + field + "' exceeds " +
                        std::to_string(width) + " bytes: '" + value + "'");
  value.resize(width, ' ');
  return value;
}

std::string format_number(double value, const char* field) {
  char buf[32];
  if (value == std::floor(value) && std::abs(value) < 1e7) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
  } else {
    std::snprintf(buf, sizeof(buf), "%g", value);
  }
  std::string s(buf);
  if (s.size() > 8)
    throw ArgumentError(std::string("EDF numeric field '") + field + "' does not fit: " + s);
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(' ');
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(' ');
  return s.substr(a, b - a + 1);
}

struct FieldReader {
  const std::string& bytes;
  std::size_t pos = 0;

  std::string take(std::size_t width) {
    std::string out = bytes.substr(pos, width);
    pos += width;
    return out;
  }

  long take_long(std::size_t width, const char* field) {
    const std::size_t at = pos;
    const std::string raw = trim(take(width));
    try {
      std::size_t used = 0;
      long v = std::stol(raw, &used);
      if (used != raw.size() || raw.empty()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("EDF header field '") + field + "' is not an integer: '" +
                           raw + "'",
                       at);
    }
  }

  double take_double(std::size_t width, const char* field) {
    const std::size_t at = pos;
    const std::string raw = trim(take(width));
    try {
      std::size_t used = 0;
      double v = std::stod(raw, &used);
      if (used != raw.size() || raw.empty()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("EDF header field '") + field + "' is not numeric: '" +
                           raw + "'",
                       at);
    }
  }
};

// Picks the shortest data-record duration (in whole seconds) that gives an
// integer sample count per record on every channel and divides the total
// duration evenly.
int pick_record_duration(const Record& record) {
  const double total = record.duration_seconds();
  for (int d = 1; d <= 30; ++d) {
    bool ok = true;
    for (const auto& ch : record.channels) {
      const double spr = ch.sampling_rate_hz * d;
      if (std::abs(spr - std::round(spr)) > 1e-9 || spr < 1.0) ok = false;
    }
    const double n_records = total / d;
    if (std::abs(n_records - std::round(n_records)) > 1e-9) ok = false;
    if (ok) return d;
  }
  throw ArgumentError("EDF: no data-record duration up to 30 s fits all channel rates");
}

}  // namespace

void write_edf(const Record& record, const std::string& path) {
  record.validate();
  if (record.channels.empty()) throw ArgumentError("write_edf: empty channel list");

  const std::size_t ns = record.channels.size();
  const int record_duration = pick_record_duration(record);
  const long n_records =
      static_cast<long>(std::llround(record.duration_seconds() / record_duration));

  std::vector<double> phys_min(ns), phys_max(ns);
  std::vector<long> samples_per_record(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const auto& sig = record.signals[i];
    if (sig.size() == 0) throw ArgumentError("write_edf: empty signal buffer");
    phys_min[i] = std::floor(sig.minCoeff());
    phys_max[i] = std::ceil(sig.maxCoeff());
    if (phys_max[i] <= phys_min[i]) phys_max[i] = phys_min[i] + 1.0;
    samples_per_record[i] =
        std::lround(record.channels[i].sampling_rate_hz * record_duration);
  }

  std::string header;
  header += pad_field("0", 8, "version");
  header += pad_field(record.subject_id, 80, "patient");
  header += pad_field("Startdate 01-JAN-2001", 80, "recording");
  header += pad_field("01.01.01", 8, "startdate");
  header += pad_field("00.00.00", 8, "starttime");
  header += pad_field(std::to_string(256 * (ns + 1)), 8, "header bytes");
  header += pad_field("", 44, "reserved");
  header += pad_field(std::to_string(n_records), 8, "n records");
  header += pad_field(std::to_string(record_duration), 8, "record duration");
  header += pad_field(std::to_string(ns), 4, "n signals");

  // Signal headers are field-major: all labels, then all transducers, ...
  for (const auto& ch : record.channels) header += pad_field(ch.label, 16, "label");
  for (std::size_t i = 0; i < ns; ++i) header += pad_field("", 80, "transducer");
  for (const auto& ch : record.channels)
    header += pad_field(ch.physical_unit, 8, "physical dimension");
  for (std::size_t i = 0; i < ns; ++i)
    header += pad_field(format_number(phys_min[i], "physical min"), 8, "physical min");
  for (std::size_t i = 0; i < ns; ++i)
    header += pad_field(format_number(phys_max[i], "physical max"), 8, "physical max");
  for (std::size_t i = 0; i < ns; ++i)
    header += pad_field(std::to_string(kDigitalMin), 8, "digital min");
  for (std::size_t i = 0; i < ns; ++i)
    header += pad_field(std::to_string(kDigitalMax), 8, "digital max");
  for (std::size_t i = 0; i < ns; ++i) header += pad_field("", 80, "prefiltering");
  for (std::size_t i = 0; i < ns; ++i)
    header += pad_field(std::to_string(samples_per_record[i]), 8, "samples per record");
  for (std::size_t i = 0; i < ns; ++i) header += pad_field("", 32, "signal reserved");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("write_edf: cannot open '" + path + "' for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::vector<char> buf;
  for (long r = 0; r < n_records; ++r) {
    for (std::size_t i = 0; i < ns; ++i) {
      const long spr = samples_per_record[i];
      const double gain =
          (phys_max[i] - phys_min[i]) / static_cast<double>(kDigitalMax - kDigitalMin);
      buf.resize(static_cast<std::size_t>(spr) * 2);
      const auto& sig = record.signals[i];
      for (long j = 0; j < spr; ++j) {
        const double p = sig[r * spr + j];
        long d = std::lround((p - phys_min[i]) / gain) + kDigitalMin;
        d = std::clamp(d, static_cast<long>(kDigitalMin), static_cast<long>(kDigitalMax));
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(d));
        buf[2 * j] = static_cast<char>(u & 0xFF);
        buf[2 * j + 1] = static_cast<char>((u >> 8) & 0xFF);
      }
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  }
  if (!out) throw ArgumentError("write_edf: write failed on '" + path + "'");
}

Record read_edf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("read_edf: cannot open '" + path + "'");

  std::string header(256, '\0');
  in.read(header.data(), 256);
  if (in.gcount() != 256) throw ParseError("read_edf: truncated fixed header", 0);

  FieldReader fr{header};
  const std::string version = fr.take(8);
  if (version != "0       ")
    throw ParseError("read_edf: bad version field '" + version + "'", 0);
  const std::string patient = trim(fr.take(80));
  fr.take(80);  // recording id
  fr.take(8);   // start date
  fr.take(8);   // start time
  const long header_bytes = fr.take_long(8, "header bytes");
  const std::string reserved = trim(fr.take(44));
  if (!reserved.empty() && reserved.rfind("EDF+C", 0) != 0)
    throw ParseError("read_edf: unsupported reserved marker '" + reserved + "'", 192);
  const long n_records = fr.take_long(8, "n records");
  const double record_duration = fr.take_double(8, "record duration");
  const long ns = fr.take_long(4, "n signals");
  if (ns <= 0) throw ParseError("read_edf: non-positive signal count", 252);
  if (n_records < 0) throw ParseError("read_edf: negative record count", 236);
  if (!(record_duration > 0.0))
    throw ParseError("read_edf: non-positive record duration", 244);
  if (header_bytes != 256 * (ns + 1))
    throw ParseError("read_edf: header byte count " + std::to_string(header_bytes) +
                         " != 256*(ns+1)",
                     184);

  std::string sig_header(static_cast<std::size_t>(ns) * 256, '\0');
  in.read(sig_header.data(), static_cast<std::streamsize>(sig_header.size()));
  if (in.gcount() != static_cast<std::streamsize>(sig_header.size()))
    throw ParseError("read_edf: truncated signal headers", 256);

  FieldReader sr{sig_header};
  std::vector<std::string> labels(ns), units(ns);
  std::vector<double> phys_min(ns), phys_max(ns);
  std::vector<long> dig_min(ns), dig_max(ns), spr(ns);
  for (long i = 0; i < ns; ++i) labels[i] = trim(sr.take(16));
  for (long i = 0; i < ns; ++i) sr.take(80);
  for (long i = 0; i < ns; ++i) units[i] = trim(sr.take(8));
  for (long i = 0; i < ns; ++i) phys_min[i] = sr.take_double(8, "physical min");
  for (long i = 0; i < ns; ++i) phys_max[i] = sr.take_double(8, "physical max");
  for (long i = 0; i < ns; ++i) dig_min[i] = sr.take_long(8, "digital min");
  for (long i = 0; i < ns; ++i) dig_max[i] = sr.take_long(8, "digital max");
  for (long i = 0; i < ns; ++i) sr.take(80);
  for (long i = 0; i < ns; ++i) {
    spr[i] = sr.take_long(8, "samples per record");
    if (spr[i] <= 0)
      throw ParseError("read_edf: non-positive samples-per-record", 256 + sr.pos - 8);
  }
  for (long i = 0; i < ns; ++i) {
    if (dig_min[i] == dig_max[i])
      throw ParseError("read_edf: degenerate digital range on signal '" + labels[i] + "'",
                       256 + static_cast<std::size_t>(ns) * (16 + 80 + 8 + 8 + 8) +
                           static_cast<std::size_t>(i) * 8);
  }

  Record record;
  record.subject_id = patient;
  record.channels.resize(ns);
  record.signals.resize(ns);
  for (long i = 0; i < ns; ++i) {
    record.channels[i].label = labels[i];
    record.channels[i].modality = modality_from_label(labels[i]);
    record.channels[i].physical_unit = units[i];
    record.channels[i].sampling_rate_hz = static_cast<double>(spr[i]) / record_duration;
    record.signals[i].resize(n_records * spr[i]);
  }

  std::vector<char> buf;
  std::size_t offset = 256 + static_cast<std::size_t>(ns) * 256;
  for (long r = 0; r < n_records; ++r) {
    for (long i = 0; i < ns; ++i) {
      buf.resize(static_cast<std::size_t>(spr[i]) * 2);
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw ParseError("read_edf: truncated data record " + std::to_string(r) +
                             " signal " + std::to_string(i),
                         offset);
      const double gain = (phys_max[i] - phys_min[i]) / static_cast<double>(dig_max[i] -
                                                                            dig_min[i]);
      auto& sig = record.signals[i];
      for (long j = 0; j < spr[i]; ++j) {
        const auto u = static_cast<std::uint16_t>(
            static_cast<unsigned char>(buf[2 * j]) |
            (static_cast<unsigned char>(buf[2 * j + 1]) << 8));
        const auto d = static_cast<std::int16_t>(u);
        sig[r * spr[i] + j] = (static_cast<double>(d) - dig_min[i]) * gain + phys_min[i];
      }
      offset += buf.size();
    }
  }
  record.validate();
  return record;
}

std::string hypnogram_sidecar_path(const std::string& edf_path) {
  std::filesystem::path p(edf_path);
  p.replace_extension(".hyp");
  return p.string();
}

Record load_record(const std::string& edf_path) {
  Record record = read_edf(edf_path);
  const std::string sidecar = hypnogram_sidecar_path(edf_path);
  if (std::filesystem::exists(sidecar)) {
    record.hypnogram = read_hypnogram(sidecar);
    record.validate();
  }
  return record;
}

void save_record(const Record& record, const std::string& edf_path) {
  write_edf(record, edf_path);
  if (record.hypnogram) write_hypnogram(*record.hypnogram, hypnogram_sidecar_path(edf_path));
}

}  // namespace somnograph
