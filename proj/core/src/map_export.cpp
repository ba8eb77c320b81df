#include "oamspec/map_export.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "oamspec/errors.hpp"

namespace oamspec {

namespace {

void append_double(std::string& out, double v) {
    if (std::isnan(v)) {
        out += "nan";
        return;
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), end);
}

std::string csv_header(const SpectrumMap& map) {
    const MapInputs& in = map.scenario_digest;
    std::string h = "# oamspec-map";
    const auto kv = [&h](const char* key, double v) {
        h += ' ';
        h += key;
        h += '=';
        append_double(h, v);
    };
    h += " resolution=" + std::to_string(map.grid.resolution);
    kv("half_extent", map.grid.half_extent);
    kv("delta_k", in.delta_k);
    kv("gamma1", in.atom.gamma1);
    kv("gamma2", in.atom.gamma2);
    kv("p", in.atom.p);
    kv("delta1", in.atom.delta1);
    kv("delta2", in.atom.delta2);
    kv("o01", in.fields.o01);
    kv("omega02", in.fields.omega02);
    kv("waist", in.fields.waist);
    h += " winding=" + std::to_string(in.fields.winding);
    h += in.fields.coupling_profile == CouplingProfile::Gaussian ? " coupling_profile=gaussian"
                                                                 : " coupling_profile=constant";
    h += '\n';
    return h;
}

std::string export_csv(const SpectrumMap& map) {
    std::string out = csv_header(map);
    const int n = map.grid.resolution;
    out.reserve(out.size() + static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * 20);
    for (int row = 0; row < n; ++row) {
        for (int column = 0; column < n; ++column) {
            if (column > 0) out += ',';
            append_double(out, map.masked(row, column) ? std::numeric_limits<double>::quiet_NaN() : map.at(row, column));
        }
        out += '\n';
    }
    return out;
}

std::string export_pgm(const SpectrumMap& map) {
    const int n = map.grid.resolution;
    const MapStats stats = map_stats(map);
    const bool degenerate = !(stats.max > stats.min);

    std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) {
        for (int column = 0; column < n; ++column) {
            unsigned char grey = 0;
            if (!map.masked(row, column)) {
                if (degenerate) {
                    grey = 128;
                } else {
                    const double t = (map.at(row, column) - stats.min) / (stats.max - stats.min);
                    grey = static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
                }
            }
            out[header + map.index(row, column)] = static_cast<char>(grey);
        }
    }
    return out;
}

} // namespace

std::string export_map(const SpectrumMap& map, MapFormat format) {
    return format == MapFormat::Csv ? export_csv(map) : export_pgm(map);
}

std::string range_sidecar(const SpectrumMap& map) {
    const MapStats stats = map_stats(map);
    std::string out = "min=";
    append_double(out, stats.min);
    out += "\nmax=";
    append_double(out, stats.max);
    out += "\ndegenerate=";
    out += stats.max > stats.min ? "0" : "1";
    out += "\nmasked_cells=" + std::to_string(stats.masked_cells) + "\n";
    return out;
}

SpectrumMap parse_map_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("# oamspec-map", 0) != 0)
        throw ParseError("map CSV must start with a '# oamspec-map' header", 1);

    SpectrumMap map;
    bool have_resolution = false;
    std::istringstream header(line.substr(1));
    std::string token;
    while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "resolution") {
            map.grid.resolution = std::stoi(value);
            have_resolution = true;
        } else if (key == "half_extent") {
            map.grid.half_extent = std::stod(value);
        }
    }
    if (!have_resolution || map.grid.resolution <= 0)
        throw ParseError("map CSV header lacks a valid resolution", 1);

    const int n = map.grid.resolution;
    const auto cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    map.values.assign(cells, 0.0);
    map.pole_mask.assign(cells, 0);
    for (int row = 0; row < n; ++row) {
        if (!std::getline(in, line))
            throw ParseError("map CSV has fewer rows than its resolution", row + 2);
        std::size_t pos = 0;
        for (int column = 0; column < n; ++column) {
            const auto comma = line.find(',', pos);
            const bool last = column == n - 1;
            if (last != (comma == std::string::npos))
                throw ParseError("map CSV row has the wrong number of columns", row + 2);
            const std::string_view cell = std::string_view(line).substr(pos, last ? std::string::npos : comma - pos);
            const std::size_t idx = map.index(row, column);
            if (cell == "nan") {
                map.values[idx] = std::numeric_limits<double>::quiet_NaN();
                map.pole_mask[idx] = 1;
            } else {
                double v = 0.0;
                const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{} || ptr != cell.data() + cell.size())
                    throw ParseError("map CSV cell is not a number: '" + std::string(cell) + "'", row + 2);
                map.values[idx] = v;
            }
            pos = comma + 1;
        }
    }
    return map;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

} // namespace oamspec
