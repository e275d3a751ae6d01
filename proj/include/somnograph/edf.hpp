#pragma once

#include <string>

#include "somnograph/record.hpp"

namespace somnograph {

// EDF container, continuous records only. 256-byte fixed header plus 256
// bytes per channel (field-major), samples as 16-bit little-endian signed
// integers mapped to physical units per channel.

// Parses an EDF file. The hypnogram is not part of EDF here; use
// load_record for the sidecar convention.
Record read_edf(const std::string& path);

// Writes a record as EDF. Physical ranges are derived from the data
// (floor/ceil, widened when flat); digital range is the full int16 span.
// Header text fields are deterministic functions of the record content.
void write_edf(const Record& record, const std::string& path);

// EDF plus the ".hyp" sidecar next to it (one stage token per line).
Record load_record(const std::string& edf_path);
void save_record(const Record& record, const std::string& edf_path);

// "foo.edf" -> "foo.hyp"
std::string hypnogram_sidecar_path(const std::string& edf_path);

}  // namespace somnograph
