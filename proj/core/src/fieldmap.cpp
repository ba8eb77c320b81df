#include "oamspec/fieldmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "oamspec/emission.hpp"
#include "oamspec/errors.hpp"
#include "parallel.hpp"

namespace oamspec {

void GridSpec::validate() const {
    if (resolution < 16)
        throw ValidationError("grid resolution must be >= 16, got " + std::to_string(resolution));
    if (!(half_extent > 0.0) || !std::isfinite(half_extent))
        throw ValidationError("grid half_extent must be positive");
}

double GridSpec::x_at(int column) const noexcept {
    const double spacing = 2.0 * half_extent / resolution;
    return -half_extent + (column + 0.5) * spacing;
}

double GridSpec::y_at(int row) const noexcept {
    const double spacing = 2.0 * half_extent / resolution;
    return half_extent - (row + 0.5) * spacing;
}

SpectrumMap evaluate_map(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                         double delta_k, const GridSpec& grid, unsigned threads,
                         PolePolicy poles) {
    atom.validate();
    fields.validate();
    init.validate();
    grid.validate();

    SpectrumMap map;
    map.grid = grid;
    map.scenario_digest = {atom, fields, init, delta_k};
    const auto cells = static_cast<std::size_t>(grid.resolution) * static_cast<std::size_t>(grid.resolution);
    map.values.assign(cells, 0.0);
    map.pole_mask.assign(cells, 0);

    const auto rows = static_cast<std::size_t>(grid.resolution);
    detail::parallel_for(rows, threads, [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t row = row_begin; row < row_end; ++row) {
            const double y = grid.y_at(static_cast<int>(row)) * fields.waist;
            for (int column = 0; column < grid.resolution; ++column) {
                const double x = grid.x_at(column) * fields.waist;
                const std::size_t idx = map.index(static_cast<int>(row), column);
                try {
                    map.values[idx] = spectrum(atom, fields, init, SpectralPoint{std::hypot(x, y), std::atan2(y, x), delta_k}, poles);
                } catch (const SpectralPole&) {
                    map.values[idx] = std::numeric_limits<double>::quiet_NaN();
                    map.pole_mask[idx] = 1;
                }
            }
        }
    });
    return map;
}

MapStats map_stats(const SpectrumMap& map) {
    MapStats stats;
    stats.min = std::numeric_limits<double>::infinity();
    stats.max = -std::numeric_limits<double>::infinity();
    for (int row = 0; row < map.grid.resolution; ++row) {
        for (int column = 0; column < map.grid.resolution; ++column) {
            if (map.masked(row, column)) {
                ++stats.masked_cells;
                continue;
            }
            const double v = map.at(row, column);
            stats.min = std::min(stats.min, v);
            if (v > stats.max) {
                stats.max = v;
                stats.argmax_row = row;
                stats.argmax_column = column;
            }
        }
    }
    if (stats.argmax_row < 0) stats.min = stats.max = std::numeric_limits<double>::quiet_NaN();
    return stats;
}

int count_spots(const SpectrumMap& map, double rel_threshold) {
    const MapStats stats = map_stats(map);
    if (!(stats.max > 0.0)) return 0;
    const double threshold = rel_threshold * stats.max;
    const int n = map.grid.resolution;

    std::vector<std::uint8_t> visited(map.values.size(), 0);
    std::vector<std::pair<int, int>> stack;
    int spots = 0;
    for (int row = 0; row < n; ++row) {
        for (int column = 0; column < n; ++column) {
            const std::size_t idx = map.index(row, column);
            if (visited[idx] || map.pole_mask[idx] || !(map.values[idx] >= threshold)) continue;
            ++spots;
            visited[idx] = 1;
            stack.emplace_back(row, column);
            while (!stack.empty()) {
                const auto [r, c] = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int rr = r + dr;
                        const int cc = c + dc;
                        if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
                        const std::size_t j = map.index(rr, cc);
                        if (visited[j] || map.pole_mask[j] || !(map.values[j] >= threshold)) continue;
                        visited[j] = 1;
                        stack.emplace_back(rr, cc);
                    }
                }
            }
        }
    }
    return spots;
}

std::vector<ProfileSample> azimuthal_profile(const AtomParams& atom, const FieldConfig& fields,
                                             const InitialState& init, double delta_k, double r,
                                             int n_phi, PolePolicy poles) {
    if (!(r > 0.0))
        throw ValidationError("azimuthal profile radius must be positive");
    if (n_phi < 8)
        throw ValidationError("azimuthal profile needs at least 8 samples");

    std::vector<ProfileSample> profile(static_cast<std::size_t>(n_phi));
    for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / n_phi;
        profile[static_cast<std::size_t>(j)] = {phi, spectrum(atom, fields, init, SpectralPoint{r, phi, delta_k}, poles)};
    }
    return profile;
}

double spot_radius(const FieldConfig& fields) {
    const int l = std::max(std::abs(fields.winding), 1);
    return fields.waist * std::sqrt(l / 2.0);
}

PeakCount count_peaks(std::span<const ProfileSample> profile, double rel_threshold) {
    if (profile.empty())
        throw ValidationError("count_peaks needs a non-empty profile");
    double max_value = -std::numeric_limits<double>::infinity();
    for (const auto& s : profile) {
        if (!std::isfinite(s.value))
            throw ValidationError("count_peaks needs finite profile values");
        max_value = std::max(max_value, s.value);
    }
    if (!(max_value > 0.0)) return {0, true};

    const double threshold = rel_threshold * max_value;
    const std::size_t n = profile.size();
    int runs = 0;
    bool all_inside = true;
    for (std::size_t j = 0; j < n; ++j) {
        const bool inside = profile[j].value >= threshold;
        const bool prev_inside = profile[(j + n - 1) % n].value >= threshold;
        all_inside = all_inside && inside;
        if (inside && !prev_inside) ++runs;
    }
    return {all_inside ? 1 : runs, false};
}

namespace {

bool is_constant(std::span<const ProfileSample> profile) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : profile) {
        lo = std::min(lo, s.value);
        hi = std::max(hi, s.value);
    }
    return !(hi - lo > 1e-12 * std::max(std::abs(hi), std::abs(lo)));
}

double mean_value(std::span<const ProfileSample> profile) {
    double sum = 0.0;
    for (const auto& s : profile) sum += s.value;
    return sum / static_cast<double>(profile.size());
}

} // namespace

double rotation_offset(std::span<const ProfileSample> a, std::span<const ProfileSample> b) {
    if (a.size() != b.size() || a.empty())
        throw ValidationError("rotation_offset needs two profiles with equal sampling");
    if (is_constant(a) || is_constant(b))
        throw DegenerateProfile("rotation_offset: profile is constant, rotation undefined");

    const std::size_t n = a.size();
    const double mean_a = mean_value(a);
    const double mean_b = mean_value(b);
    std::size_t best_shift = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        double corr = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            corr += (a[j].value - mean_a) * (b[(j + k) % n].value - mean_b);
        if (corr > best) {
            best = corr;
            best_shift = k;
        }
    }
    const auto shift = static_cast<double>(best_shift);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    return shift * 2.0 > static_cast<double>(n) ? (shift - static_cast<double>(n)) * step : shift * step;
}

double coefficient_of_variation(std::span<const ProfileSample> profile) {
    if (profile.empty()) return 0.0;
    const double mean = mean_value(profile);
    if (mean == 0.0) return 0.0;
    double var = 0.0;
    for (const auto& s : profile) var += (s.value - mean) * (s.value - mean);
    var /= static_cast<double>(profile.size());
    return std::sqrt(var) / std::abs(mean);
}

} // namespace oamspec
