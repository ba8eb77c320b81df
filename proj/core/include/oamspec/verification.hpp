#pragma once

// Invariant suites run by `oamspec verify` and by the acceptance tests.
// Every check takes its tolerance explicitly; randomised checks draw from
// a seeded std::mt19937_64 so failures reproduce from the printed seed.

#include <cstdint>
#include <string>
#include <vector>

namespace oamspec {

struct CheckReport {
    std::string name;
    bool passed = false;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0.0;  ///< largest observed deviation, in the check's own metric
    std::string detail;
};

CheckReport check_periodicity(std::uint64_t seed, int probes, double rel_tol);
CheckReport check_mirror(std::uint64_t seed, int probes, double rel_tol);

/// Ground start, p = 0: coefficient of variation around `radii` circles.
CheckReport check_phi_independence(int radii, double cv_tol);

/// Gaussian coupling, l = 0 (the fig7 panels): coefficient of variation around `radii` circles.
CheckReport check_gaussian_homogeneity(int radii, double cv_tol);

/// spectrum_ground_no_qi and resonant_closed_form against spectrum() on their domains.
CheckReport check_fast_paths(std::uint64_t seed, int probes, double rel_tol);

/// S(c * rates) * c^2 == S(rates).
CheckReport check_scaling(std::uint64_t seed, int draws, double rel_tol);

struct OracleOptions {
    std::uint64_t seed = 20240611;
    int trials = 20;
    double rel_tol = 5e-3;
    double abs_floor = 1e-9;
    double dt = 1e-3;
    double tail_tolerance = 1e-14;
    double max_t_final = 480.0;
};

/// Randomised closed form vs. time-domain oracle. Draws whose trajectory
/// cannot settle within max_t_final (near-trapped states) or that land on a
/// pole are redrawn; the number of redraws is reported in `detail`.
CheckReport check_oracle(const OracleOptions& options);

/// lhs/rhs of the Parseval identity within [lo, hi] on five fixed scenarios,
/// one of which keeps a dark (non-radiating) remainder.
CheckReport check_parseval(double lo, double hi);

/// count_peaks at the vortex ring radius equals l for fig2a, fig4a, fig6a, l = 1..4.
CheckReport check_peak_counts();

/// rotation_offset(fig2a-l1, fig2b-l1) at the ring radius is nonzero and counterclockwise.
CheckReport check_rotation();

std::vector<std::string> suite_names();

struct SuiteOptions {
    std::uint64_t seed = 20240611;
    int trials = 0; ///< 0 = each suite's default
};

/// Run one named suite with its default tolerances. Throws std::invalid_argument for unknown names.
CheckReport run_suite(const std::string& name, const SuiteOptions& options);

} // namespace oamspec
