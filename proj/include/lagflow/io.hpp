#pragma once

#include <map>
#include <string>

#include "lagflow/cone.hpp"
#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/soliton.hpp"

namespace lagflow {

// 17 significant digits in scientific notation: round-trips every double
// bit-for-bit through strtod, independent of locale.
std::string format_sig17(double v);

// Strict full-token double parse; usage_error on anything malformed.
double parse_double(const std::string& token);

// Field snapshot file:
//   lagflow-field v1
//   dim=<n> m=<m> R=<radius>
//   <m^n values, one per line, axis 0 slowest>
void write_field(const ScalarField& u, const std::string& path);
ScalarField read_field(const std::string& path);

// Cone description file:
//   lagflow-cone v1
//   <one line per sector: n sign tokens (+/-), then the n(n+1)/2
//    upper-triangular entries of A in row-major order>
// The dimension is inferred from the token count per line.
void write_cone(const ConeSpec& spec, const std::string& path);
ConeSpec read_cone(const std::string& path);

// Diagnostics table; the header line is part of the format contract.
std::string report_csv(const FlowReport& report);
void write_report_csv(const FlowReport& report, const std::string& path);

// Certificate JSON. All numeric evidence is serialized as 17-significant-digit
// strings so the file is byte-stable across platforms and JSON printers; the
// residual field itself is written next to the certificate as a .field file
// and referenced by name.
std::string certificate_json(const SolitonCertificate& cert, const std::string& residual_file);
void write_certificate(const SolitonCertificate& cert, const std::string& json_path,
                       const std::string& residual_path);

// "key = value" run manifest, one entry per line, in map (lexicographic) order.
void write_manifest(const std::map<std::string, std::string>& entries, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace lagflow
