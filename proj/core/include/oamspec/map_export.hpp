#pragma once

// Portable exports of a SpectrumMap.
//
// CSV: one '#' header line with the grid metadata and the inputs that
// produced the map, then `resolution` rows of comma-separated values in
// shortest round-trip decimal form. Row 0 is +y, column 0 is -x. Pole cells
// are written as "nan".
//
// Image: binary 8-bit greyscale PGM (P5), same orientation, values min-max
// normalised per map. Pole cells are black. A map with max == min is drawn
// uniform mid-grey (128). The raw range goes to a ".range.txt" sidecar.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "oamspec/fieldmap.hpp"

namespace oamspec {

enum class MapFormat { Csv, Image };

std::string export_map(const SpectrumMap& map, MapFormat format);

/// Sidecar text for an image export: "min=...\nmax=...\ndegenerate=0|1\n".
std::string range_sidecar(const SpectrumMap& map);

/// Read back the grid and values of a CSV export. scenario_digest is left default.
SpectrumMap parse_map_csv(std::string_view text);

/// Write through a temporary file in the same directory and rename into place.
/// Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

} // namespace oamspec
