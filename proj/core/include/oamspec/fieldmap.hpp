#pragma once

// Spectrum over the transverse plane and the figure-level observables
// derived from it (azimuthal profiles, spot counts, rotation offsets).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "oamspec/emission.hpp"
#include "oamspec/types.hpp"

namespace oamspec {

/// Square Cartesian grid centred on the beam axis. Extent is in units of the waist.
struct GridSpec {
    double half_extent = 2.0;
    int resolution = 256;

    void validate() const;

    /// Cell-centre coordinates (units of the waist). Column 0 is -x, row 0 is +y.
    double x_at(int column) const noexcept;
    double y_at(int row) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Everything the spectrum depends on except the transverse position.
struct MapInputs {
    AtomParams atom;
    FieldConfig fields;
    InitialState init;
    double delta_k = 0.0;

    friend bool operator==(const MapInputs&, const MapInputs&) = default;
};

struct SpectrumMap {
    GridSpec grid;
    MapInputs scenario_digest;
    std::vector<double> values;        ///< row-major, row 0 = +y; NaN where masked
    std::vector<std::uint8_t> pole_mask; ///< 1 where the cell sits on a spectral pole

    double at(int row, int column) const { return values[index(row, column)]; }
    bool masked(int row, int column) const { return pole_mask[index(row, column)] != 0; }
    std::size_t index(int row, int column) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(grid.resolution) +
               static_cast<std::size_t>(column);
    }
};

struct MapStats {
    double min = 0.0;
    double max = 0.0;
    int argmax_row = -1;
    int argmax_column = -1;
    std::size_t masked_cells = 0;
};

/// Evaluate the spectrum at every cell centre. Pole cells are masked instead
/// of aborting. The result does not depend on `threads` (0 = hardware).
/// By default removable zeros of Z are continued rather than masked.
SpectrumMap evaluate_map(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                         double delta_k, const GridSpec& grid, unsigned threads = 0,
                         PolePolicy poles = PolePolicy::RemovableLimit);

MapStats map_stats(const SpectrumMap& map);

/// Number of 8-connected regions with value >= rel_threshold * max (unmasked cells only).
int count_spots(const SpectrumMap& map, double rel_threshold = 0.5);

struct ProfileSample {
    double phi;
    double value;
};

/// Exact spectrum at n_phi uniform angles phi_j = 2 pi j / n_phi on the circle of radius r.
std::vector<ProfileSample> azimuthal_profile(const AtomParams& atom, const FieldConfig& fields,
                                             const InitialState& init, double delta_k, double r,
                                             int n_phi, PolePolicy poles = PolePolicy::RemovableLimit);

/// Radius of maximum vortex intensity, w sqrt(|l|/2); w/sqrt(2) for l = 0.
double spot_radius(const FieldConfig& fields);

struct PeakCount {
    int count = 0;
    bool degenerate = false; ///< max(S) == 0, nothing to count
};

/// Connected angular runs with S >= rel_threshold * max(S), merging the run
/// that wraps through phi = 0. A profile entirely above threshold is one run.
PeakCount count_peaks(std::span<const ProfileSample> profile, double rel_threshold = 0.5);

/// Angle by which `b` is rotated relative to `a` (positive = counterclockwise),
/// from the argmax of their circular cross-correlation; result in (-pi, pi].
/// Throws DegenerateProfile when either profile is constant.
double rotation_offset(std::span<const ProfileSample> a, std::span<const ProfileSample> b);

/// Coefficient of variation (stddev / mean) of profile values; 0 for an all-zero profile.
double coefficient_of_variation(std::span<const ProfileSample> profile);

} // namespace oamspec
