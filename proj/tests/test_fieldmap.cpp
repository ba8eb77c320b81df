#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "oamspec/emission.hpp"
#include "oamspec/errors.hpp"
#include "oamspec/fieldmap.hpp"
#include "oamspec/scenario.hpp"
#include "test_support.hpp"

using namespace oamspec;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<ProfileSample> sampled(int n, auto&& f) {
    std::vector<ProfileSample> out;
    for (int j = 0; j < n; ++j) {
        const double phi = kTwoPi * j / n;
        out.push_back({phi, f(phi)});
    }
    return out;
}

Scenario builtin(const char* label) {
    auto s = find_builtin(label);
    REQUIRE(s.has_value());
    return *s;
}

SpectrumMap synthetic(int resolution, std::vector<double> values) {
    SpectrumMap m;
    m.grid = GridSpec{1.0, resolution};
    m.values = std::move(values);
    m.pole_mask.assign(m.values.size(), 0);
    return m;
}

} // namespace

TEST_CASE("grid geometry") {
    const GridSpec g{2.0, 16};
    CHECK(g.x_at(0) == doctest::Approx(-2.0 + 0.125));
    CHECK(g.x_at(15) == doctest::Approx(2.0 - 0.125));
    CHECK(g.y_at(0) == doctest::Approx(2.0 - 0.125));
    CHECK(g.y_at(15) == doctest::Approx(-2.0 + 0.125));
    CHECK_THROWS_AS((GridSpec{2.0, 8}.validate()), ValidationError);
    CHECK_THROWS_AS((GridSpec{0.0, 64}.validate()), ValidationError);
    CHECK(spot_radius(FieldConfig{}) == doctest::Approx(std::sqrt(0.5)));
    FieldConfig f;
    f.winding = -2;
    f.waist = 1.5;
    CHECK(spot_radius(f) == doctest::Approx(1.5));
}

TEST_CASE("map cells hold the spectrum at the cell centre") {
    const Scenario s = builtin("fig3b-l2");
    const GridSpec grid{2.0, 32};
    const SpectrumMap map = evaluate_map(s.atom, s.fields, s.init, 0.3, grid, 1);
    REQUIRE(map.values.size() == 32u * 32u);
    CHECK(map.scenario_digest == MapInputs{s.atom, s.fields, s.init, 0.3});
    for (const auto& [row, col] : {std::pair{0, 0}, std::pair{5, 27}, std::pair{16, 16}, std::pair{31, 3}}) {
        const double x = grid.x_at(col);
        const double y = grid.y_at(row);
        const double expected = spectrum(s.atom, s.fields, s.init, SpectralPoint{std::hypot(x, y), std::atan2(y, x), 0.3});
        CHECK(map.at(row, col) == expected);
        CHECK_FALSE(map.masked(row, col));
    }
}

TEST_CASE("parallel and serial maps are bit-identical") {
    for (const char* label : {"fig2b-l3", "fig6a-l4", "fig7b-ii"}) {
        const Scenario s = builtin(label);
        const GridSpec grid{2.0, 96};
        const SpectrumMap serial = evaluate_map(s.atom, s.fields, s.init, s.delta_k, grid, 1);
        for (unsigned threads : {2u, 3u, 8u}) {
            const SpectrumMap parallel = evaluate_map(s.atom, s.fields, s.init, s.delta_k, grid, threads);
            CHECK(std::memcmp(serial.values.data(), parallel.values.data(), serial.values.size() * sizeof(double)) == 0);
            CHECK(serial.pole_mask == parallel.pole_mask);
        }
    }
}

TEST_CASE("pole cells are masked, removable zeros are continued") {
    FieldConfig off;
    off.o01 = 0.0;
    off.omega02 = 0.0;
    const double h = 1.0 / std::sqrt(2.0);
    const InitialState pair{{}, {h, 0.0}, {h, 0.0}};

    const SpectrumMap strict = evaluate_map(AtomParams{}, off, pair, 0.0, GridSpec{1.0, 16}, 0, PolePolicy::Strict);
    const MapStats st = map_stats(strict);
    CHECK(st.masked_cells == 256u);
    CHECK(std::isnan(strict.at(3, 4)));
    CHECK(strict.masked(3, 4));

    const SpectrumMap limit = evaluate_map(AtomParams{}, off, pair, 0.0, GridSpec{1.0, 16});
    CHECK(map_stats(limit).masked_cells == 0u);
    CHECK(limit.at(3, 4) == doctest::Approx(4.0));

    const Scenario g = builtin("fig7a-ii");
    const SpectrumMap ring = evaluate_map(g.atom, g.fields, g.init, g.delta_k, GridSpec{2.0, 64});
    CHECK(map_stats(ring).masked_cells == 0u);
    for (double v : ring.values) REQUIRE(std::isfinite(v));
    const SpectrumMap ring_strict = evaluate_map(g.atom, g.fields, g.init, g.delta_k, GridSpec{2.0, 64}, 0, PolePolicy::Strict);
    CHECK(map_stats(ring_strict).masked_cells == 64u * 64u);
}

TEST_CASE("map statistics") {
    SpectrumMap m = synthetic(2, {0.0, 1.0, 2.0, 3.0});
    m.values[1] = std::nan("");
    m.pole_mask[1] = 1;
    const MapStats st = map_stats(m);
    CHECK(st.min == 0.0);
    CHECK(st.max == 3.0);
    CHECK(st.argmax_row == 1);
    CHECK(st.argmax_column == 1);
    CHECK(st.masked_cells == 1u);
}

TEST_CASE("count_spots") {
    std::vector<double> v(16 * 16, 0.0);
    v[2 * 16 + 2] = 1.0;
    v[2 * 16 + 3] = 0.9;
    v[3 * 16 + 4] = 0.8; // diagonal neighbour: same region
    v[12 * 16 + 12] = 0.7;
    v[8 * 16 + 0] = 0.2; // below threshold
    CHECK(count_spots(synthetic(16, v)) == 2);
    CHECK(count_spots(synthetic(16, v), 0.1) == 3);
    CHECK(count_spots(synthetic(16, std::vector<double>(256, 0.0))) == 0);
}

TEST_CASE("count_peaks") {
    CHECK(count_peaks(sampled(360, [](double phi) { return (1.0 + std::cos(3.0 * phi)) / 2.0; })).count == 3);
    const PeakCount flat = count_peaks(sampled(90, [](double) { return 0.7; }));
    CHECK(flat.count == 1);
    CHECK_FALSE(flat.degenerate);
    const PeakCount zero = count_peaks(sampled(90, [](double) { return 0.0; }));
    CHECK(zero.degenerate);
    CHECK(zero.count == 0);
    // a lobe straddling phi = 0 counts once
    CHECK(count_peaks(sampled(360, [](double phi) { return 1.0 + std::cos(phi); })).count == 1);
    CHECK(count_peaks(sampled(360, [](double phi) { return 1.0 + std::cos(4.0 * phi + 0.3); })).count == 4);
    // threshold is relative
    const auto bumps = sampled(360, [](double phi) { return std::cos(2.0 * phi) > 0.9 ? 1.0 : (std::cos(phi) > 0.99 ? 0.0 : 0.4); });
    CHECK(count_peaks(bumps, 0.5).count == 2);
    CHECK(count_peaks(bumps, 0.3).count == 1);
}

TEST_CASE("rotation_offset") {
    const auto lobe = [](double phi) { return std::exp(3.0 * std::cos(phi - 1.0)); };
    const auto a = sampled(720, lobe);
    CHECK(rotation_offset(a, a) == 0.0);

    const double step = kTwoPi / 720.0;
    const auto ccw = sampled(720, [&](double phi) { return lobe(phi - kTwoPi / 8.0); });
    CHECK(std::abs(rotation_offset(a, ccw) - kTwoPi / 8.0) <= step);
    const auto cw = sampled(720, [&](double phi) { return lobe(phi + 0.5); });
    CHECK(std::abs(rotation_offset(a, cw) + 0.5) <= step);

    const auto flat = sampled(720, [](double) { return 2.0; });
    CHECK_THROWS_AS(rotation_offset(a, flat), DegenerateProfile);
    CHECK_THROWS_AS(rotation_offset(flat, a), DegenerateProfile);
    CHECK_THROWS_AS(rotation_offset(a, sampled(360, lobe)), ValidationError);
}

TEST_CASE("coefficient_of_variation") {
    CHECK(coefficient_of_variation(sampled(64, [](double) { return 3.0; })) == 0.0);
    CHECK(coefficient_of_variation(sampled(64, [](double) { return 0.0; })) == 0.0);
    // 1 + cos has mean 1 and standard deviation 1/sqrt(2)
    CHECK(coefficient_of_variation(sampled(64, [](double phi) { return 1.0 + std::cos(phi); })) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("azimuthal profiles") {
    Scenario s = builtin("fig2b-l3");
    s.atom.p = 0.0;
    const auto flat = azimuthal_profile(s.atom, s.fields, s.init, 0.0, 1.1, 360);
    CHECK(coefficient_of_variation(flat) < 1e-12);
    CHECK(flat[17].phi == doctest::Approx(kTwoPi * 17 / 360));

    CHECK_THROWS_AS(azimuthal_profile(s.atom, s.fields, s.init, 0.0, 0.0, 360), ValidationError);
    CHECK_THROWS_AS(azimuthal_profile(s.atom, s.fields, s.init, 0.0, 1.0, 4), ValidationError);

    // nondegenerate ground start with interference: l lobes 2 pi / l apart
    for (int l = 1; l <= 4; ++l) {
        const Scenario b = builtin(("fig2b-l" + std::to_string(l)).c_str());
        const auto prof = azimuthal_profile(b.atom, b.fields, b.init, b.delta_k, spot_radius(b.fields), 720);
        CAPTURE(l);
        CHECK(count_peaks(prof).count == l);
        // exact periodicity where the shifted angle is a sample
        const std::size_t shift = 720 / static_cast<std::size_t>(l);
        for (std::size_t j = 0; j < 720; j += 7)
            CHECK(testsupport::rel_diff(prof[j].value, prof[(j + shift) % 720].value) < 1e-12);
    }
}

TEST_CASE("Gaussian panels are azimuthally uniform") {
    for (const auto& s : figure_panels("fig7b")) {
        for (double r : {0.25, 0.9, 1.6}) {
            const auto prof = azimuthal_profile(s.atom, s.fields, s.init, s.delta_k, r, 360);
            CHECK(coefficient_of_variation(prof) < 1e-10);
        }
    }
}
