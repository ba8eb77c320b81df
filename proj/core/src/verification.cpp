#include "oamspec/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "oamspec/dynamics.hpp"
#include "oamspec/emission.hpp"
#include "oamspec/errors.hpp"
#include "oamspec/fieldmap.hpp"
#include "oamspec/scenario.hpp"

namespace oamspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CheckReport named(std::string name) {
    CheckReport report;
    report.name = std::move(name);
    return report;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Figure scenarios with a vortex (fig2..fig6); some draws also get a random p.
Scenario random_vortex_scenario(std::mt19937_64& rng) {
    const auto& all = builtin_scenarios();
    std::vector<const Scenario*> vortex;
    for (const auto& s : all)
        if (s.fields.winding != 0) vortex.push_back(&s);
    Scenario s = *vortex[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(vortex.size()) - 1))];
    if (uniform(rng, 0.0, 1.0) < 0.5) s.atom.p = uniform(rng, -1.0, 1.0);
    s.delta_k = uniform(rng, -2.0, 2.0);
    return s;
}

InitialState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    InitialState st{{gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}};
    const double norm = std::sqrt(st.norm_squared());
    st.b0 /= norm;
    st.b1 /= norm;
    st.b2 /= norm;
    return st;
}

void finish(CheckReport& report, std::ostringstream& detail) {
    report.passed = report.failures == 0 && report.checks > 0;
    report.detail = detail.str();
}

std::vector<double> radii_between(double lo, double hi, int count) {
    std::vector<double> radii;
    for (int i = 0; i < count; ++i)
        radii.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return radii;
}

CheckReport cv_check(const std::string& name, const std::vector<Scenario>& scenarios, int radii, double cv_tol) {
    CheckReport report = named(name);
    std::ostringstream detail;
    for (const auto& s : scenarios) {
        for (const double r : radii_between(0.25, 2.0, radii)) {
            const auto profile = azimuthal_profile(s.atom, s.fields, s.init, s.delta_k, r * s.fields.waist, 360);
            const double cv = coefficient_of_variation(profile);
            ++report.checks;
            report.worst = std::max(report.worst, cv);
            if (!(cv < cv_tol)) {
                ++report.failures;
                detail << s.label << " r=" << r << " cv=" << cv << "; ";
            }
        }
    }
    detail << report.checks << " circles, worst cv " << report.worst;
    finish(report, detail);
    return report;
}

struct ParsevalCase {
    std::string name;
    AtomParams atom;
    FieldConfig fields;
    InitialState init;
    double r;
    double phi;
};

std::vector<ParsevalCase> parseval_cases() {
    std::vector<ParsevalCase> cases;
    const auto panel = [](const char* label) { return *find_builtin(label); };

    FieldConfig off;
    off.o01 = 0.0;
    off.omega02 = 0.0;
    const InitialState upper1{{}, {1.0, 0.0}, {}};

    cases.push_back({"free-decay", AtomParams{1.0, 1.0, 0.0, 0.0, 0.0}, off, upper1, 0.5, 0.0});
    cases.push_back({"dark-remainder(p=1)", AtomParams{1.0, 1.0, 1.0, 0.0, 0.0}, off, upper1, 0.5, 0.0});
    for (const auto& [label, r, phi] : {std::tuple{"fig3a-l2", 0.9, 0.7}, std::tuple{"fig2b-l3", 1.1, 2.3},
                                        std::tuple{"fig5b-l1", 0.6, 4.0}}) {
        const Scenario s = panel(label);
        cases.push_back({label, s.atom, s.fields, s.init, r, phi});
    }
    return cases;
}

} // namespace

CheckReport check_periodicity(std::uint64_t seed, int probes, double rel_tol) {
    CheckReport report = named("periodicity");
    std::ostringstream detail;
    std::mt19937_64 rng(seed);
    int poles = 0;
    for (int i = 0; i < probes; ++i) {
        const Scenario s = random_vortex_scenario(rng);
        const double r = uniform(rng, 0.2, 2.0) * s.fields.waist;
        const double phi = uniform(rng, 0.0, kTwoPi);
        const double shift = kTwoPi / std::abs(s.fields.winding);
        try {
            const double a = spectrum(s.atom, s.fields, s.init, SpectralPoint{r, phi, s.delta_k});
            const double b = spectrum(s.atom, s.fields, s.init, SpectralPoint{r, phi + shift, s.delta_k});
            const double d = rel_diff(a, b);
            ++report.checks;
            report.worst = std::max(report.worst, d);
            if (!(d <= rel_tol)) {
                ++report.failures;
                detail << s.label << " r=" << r << " phi=" << phi << " rel=" << d << "; ";
            }
        } catch (const SpectralPole&) {
            ++poles;
        }
    }
    detail << report.checks << " probes, worst rel " << report.worst << ", poles skipped " << poles;
    finish(report, detail);
    return report;
}

CheckReport check_mirror(std::uint64_t seed, int probes, double rel_tol) {
    CheckReport report = named("mirror");
    std::ostringstream detail;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    int poles = 0;
    for (int i = 0; i < probes; ++i) {
        const Scenario s = random_vortex_scenario(rng);
        const double r = uniform(rng, 0.2, 2.0) * s.fields.waist;
        const double phi = uniform(rng, 0.0, kTwoPi);
        FieldConfig flipped = s.fields;
        flipped.winding = -s.fields.winding;
        try {
            const double a = spectrum(s.atom, flipped, s.init, SpectralPoint{r, phi, s.delta_k});
            const double b = spectrum(s.atom, s.fields, s.init, SpectralPoint{r, -phi, s.delta_k});
            const double d = rel_diff(a, b);
            ++report.checks;
            report.worst = std::max(report.worst, d);
            if (!(d <= rel_tol)) {
                ++report.failures;
                detail << s.label << " r=" << r << " phi=" << phi << " rel=" << d << "; ";
            }
        } catch (const SpectralPole&) {
            ++poles;
        }
    }
    detail << report.checks << " probes, worst rel " << report.worst << ", poles skipped " << poles;
    finish(report, detail);
    return report;
}

CheckReport check_phi_independence(int radii, double cv_tol) {
    std::vector<Scenario> scenarios;
    for (const auto& id : {"fig2a", "fig2b"}) {
        for (Scenario s : figure_panels(id)) {
            s.atom.p = 0.0;
            s.label += "(p=0)";
            scenarios.push_back(s);
        }
    }
    return cv_check("phi-independence", scenarios, radii, cv_tol);
}

CheckReport check_gaussian_homogeneity(int radii, double cv_tol) {
    std::vector<Scenario> scenarios = figure_panels("fig7a");
    for (const auto& s : figure_panels("fig7b")) scenarios.push_back(s);
    return cv_check("homogeneity", scenarios, radii, cv_tol);
}

CheckReport check_fast_paths(std::uint64_t seed, int probes, double rel_tol) {
    CheckReport report = named("fast-path");
    std::ostringstream detail;
    std::mt19937_64 rng(seed + 17);
    int poles = 0;
    double worst_ground = 0.0;
    double worst_resonant = 0.0;
    for (int i = 0; i < probes; ++i) {
        FieldConfig fields;
        fields.o01 = uniform(rng, 0.0, 2.0);
        fields.omega02 = uniform(rng, 0.0, 2.0);
        fields.winding = uniform_int(rng, -4, 4);
        const SpectralPoint point{uniform(rng, 0.05, 2.0), uniform(rng, 0.0, kTwoPi), uniform(rng, -3.0, 3.0)};
        try {
            if (i % 2 == 0) {
                fields.coupling_profile = uniform(rng, 0.0, 1.0) < 0.5 ? CouplingProfile::Constant : CouplingProfile::Gaussian;
                const AtomParams atom{uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), 0.0,
                                      uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
                const double d = rel_diff(spectrum_ground_no_qi(atom, fields, point),
                                          spectrum(atom, fields, InitialState::ground(), point));
                worst_ground = std::max(worst_ground, d);
                ++report.checks;
                if (!(d <= rel_tol)) ++report.failures;
            } else {
                const double gamma = uniform(rng, 0.5, 2.0);
                const AtomParams atom{gamma, gamma, 1.0, 0.0, 0.0};
                // every other resonant probe sits exactly on delta_k = 0
                const SpectralPoint probe = (i % 4 == 1) ? point.with_delta_k(0.0) : point;
                const double d = rel_diff(resonant_closed_form(atom, fields, probe),
                                          spectrum(atom, fields, InitialState::ground(), probe));
                worst_resonant = std::max(worst_resonant, d);
                ++report.checks;
                if (!(d <= rel_tol)) ++report.failures;
            }
        } catch (const SpectralPole&) {
            ++poles;
        }
    }
    report.worst = std::max(worst_ground, worst_resonant);
    detail << report.checks << " probes, worst rel (ground, p=0) " << worst_ground
           << ", worst rel (resonant, p=1) " << worst_resonant << ", poles skipped " << poles;
    finish(report, detail);
    return report;
}

CheckReport check_scaling(std::uint64_t seed, int draws, double rel_tol) {
    CheckReport report = named("scaling");
    std::ostringstream detail;
    std::mt19937_64 rng(seed + 31);
    int poles = 0;
    for (int i = 0; i < draws; ++i) {
        AtomParams atom{uniform(rng, 0.3, 2.0), uniform(rng, 0.3, 2.0), uniform(rng, -1.0, 1.0),
                        uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        FieldConfig fields;
        fields.o01 = uniform(rng, 0.1, 2.0);
        fields.omega02 = uniform(rng, 0.1, 2.0);
        fields.winding = uniform_int(rng, 0, 4);
        fields.coupling_profile = uniform(rng, 0.0, 1.0) < 0.5 ? CouplingProfile::Constant : CouplingProfile::Gaussian;
        const InitialState init = random_state(rng);
        const double r = uniform(rng, 0.1, 2.0);
        const double phi = uniform(rng, 0.0, kTwoPi);
        const double dk = uniform(rng, -2.0, 2.0);
        const double c = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));

        AtomParams scaled_atom = atom;
        scaled_atom.gamma1 *= c;
        scaled_atom.gamma2 *= c;
        scaled_atom.delta1 *= c;
        scaled_atom.delta2 *= c;
        FieldConfig scaled_fields = fields;
        scaled_fields.o01 *= c;
        scaled_fields.omega02 *= c;
        try {
            const double base = spectrum(atom, fields, init, SpectralPoint{r, phi, dk});
            const double scaled = spectrum(scaled_atom, scaled_fields, init, SpectralPoint{r, phi, c * dk});
            const double d = rel_diff(scaled * c * c, base);
            ++report.checks;
            report.worst = std::max(report.worst, d);
            if (!(d <= rel_tol)) {
                ++report.failures;
                detail << "c=" << c << " rel=" << d << "; ";
            }
        } catch (const SpectralPole&) {
            ++poles;
        }
    }
    detail << report.checks << " draws, worst rel " << report.worst << ", poles skipped " << poles;
    finish(report, detail);
    return report;
}

CheckReport check_oracle(const OracleOptions& options) {
    CheckReport report = named("oracle");
    std::ostringstream detail;
    std::mt19937_64 rng(options.seed);
    const double h = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(3.0);
    const std::array<InitialState, 3> states = {
        InitialState{{1.0, 0.0}, {}, {}},
        InitialState{{}, {h, 0.0}, {h, 0.0}},
        InitialState{{t, 0.0}, {t, 0.0}, {t, 0.0}},
    };
    const std::array<double, 3> detunings = {-1.0, 0.0, 1.0};
    const auto pick = [&rng](int n) { return static_cast<std::size_t>(uniform_int(rng, 0, n - 1)); };

    int redraws = 0;
    const int max_draws = options.trials * 20;
    for (int draw = 0; static_cast<int>(report.checks) < options.trials && draw < max_draws; ++draw) {
        AtomParams atom{1.0, 1.0, pick(2) == 0 ? 0.0 : 1.0, detunings[pick(3)], detunings[pick(3)]};
        FieldConfig fields;
        fields.winding = uniform_int(rng, 0, 4);
        const InitialState& init = states[pick(3)];
        const double dk = detunings[pick(3)];
        const double r = uniform(rng, 0.2, 2.0);
        const double phi = uniform(rng, 0.0, kTwoPi);

        double expected = 0.0;
        try {
            expected = spectrum(atom, fields, init, SpectralPoint{r, phi, dk});
        } catch (const SpectralPole&) {
            ++redraws;
            continue;
        }
        const IntegratorConfig cfg{60.0, options.dt, options.tail_tolerance};
        const Trajectory traj = evolve_until_converged(atom, fields, init, r, phi, cfg, options.max_t_final);
        if (!traj.usable()) {
            ++redraws;
            continue;
        }
        const double oracle = oracle_spectrum(traj, dk);
        const double allowed = std::max(options.rel_tol * expected, options.abs_floor);
        const double err = std::abs(oracle - expected);
        ++report.checks;
        report.worst = std::max(report.worst, expected > options.abs_floor ? err / expected : 0.0);
        if (!(err <= allowed)) {
            ++report.failures;
            detail << "l=" << fields.winding << " p=" << atom.p << " d1=" << atom.delta1 << " d2=" << atom.delta2
                   << " dk=" << dk << " r=" << r << " phi=" << phi << ": oracle " << oracle << " vs " << expected << "; ";
        }
    }
    if (static_cast<int>(report.checks) < options.trials) {
        ++report.failures;
        detail << "only " << report.checks << " of " << options.trials << " trials could be evaluated; ";
    }
    detail << report.checks << " trials (seed " << options.seed << "), worst rel " << report.worst
           << ", redraws " << redraws;
    finish(report, detail);
    return report;
}

CheckReport check_parseval(double lo, double hi) {
    CheckReport report = named("parseval");
    std::ostringstream detail;
    for (const auto& c : parseval_cases()) {
        const IntegratorConfig cfg{60.0, 1e-3, 1e-12};
        const Trajectory traj = evolve_until_converged(c.atom, c.fields, c.init, c.r, c.phi, cfg, 480.0);
        ++report.checks;
        if (!traj.usable()) {
            ++report.failures;
            detail << c.name << ": not converged; ";
            continue;
        }
        const double scale = std::max({c.atom.gamma1, c.atom.gamma2, std::abs(c.atom.delta1),
                                       std::abs(c.atom.delta2), c.fields.o01, c.fields.omega02});
        const auto grid = uniform_grid(80.0 * scale, 8193);
        const ParsevalResult pr = parseval_check(traj, grid);
        const double ratio = pr.lhs / pr.rhs;
        report.worst = std::max(report.worst, std::abs(ratio - 1.0));
        if (!(ratio >= lo && ratio <= hi)) ++report.failures;
        detail << c.name << (traj.convergence == Convergence::DarkState ? " [dark]" : "") << " ratio=" << ratio << "; ";
    }
    finish(report, detail);
    return report;
}

CheckReport check_peak_counts() {
    CheckReport report = named("peaks");
    std::ostringstream detail;
    for (const auto& id : {"fig2a", "fig4a", "fig6a"}) {
        for (const auto& s : figure_panels(id)) {
            const auto profile = azimuthal_profile(s.atom, s.fields, s.init, s.delta_k, spot_radius(s.fields), 720);
            const PeakCount pc = count_peaks(profile);
            ++report.checks;
            const bool ok = !pc.degenerate && pc.count == s.fields.winding;
            if (!ok) ++report.failures;
            detail << s.label << ":" << (pc.degenerate ? std::string("degenerate") : std::to_string(pc.count))
                   << (ok ? "" : "(expected " + std::to_string(s.fields.winding) + ")") << " ";
        }
    }
    finish(report, detail);
    return report;
}

CheckReport check_rotation() {
    CheckReport report = named("rotation");
    std::ostringstream detail;
    const Scenario a = *find_builtin("fig2a-l1");
    const Scenario b = *find_builtin("fig2b-l1");
    const double r = spot_radius(a.fields);
    const auto pa = azimuthal_profile(a.atom, a.fields, a.init, a.delta_k, r, 720);
    const auto pb = azimuthal_profile(b.atom, b.fields, b.init, b.delta_k, r, 720);
    report.checks = 1;
    try {
        const double offset = rotation_offset(pa, pb);
        report.worst = offset;
        if (!(offset > 0.0)) report.failures = 1;
        detail << "offset " << offset << " rad";
    } catch (const DegenerateProfile& e) {
        report.failures = 1;
        detail << e.what() << " (fig2a-l1 profile max " << std::max_element(pa.begin(), pa.end(), [](auto x, auto y) {
            return x.value < y.value;
        })->value << ")";
    }
    finish(report, detail);
    return report;
}

std::vector<std::string> suite_names() {
    return {"periodicity", "mirror", "phi-independence", "homogeneity", "fast-path",
            "scaling", "oracle", "parseval", "peaks", "rotation"};
}

CheckReport run_suite(const std::string& name, const SuiteOptions& options) {
    const auto trials = [&options](int fallback) { return options.trials > 0 ? options.trials : fallback; };
    if (name == "periodicity") return check_periodicity(options.seed, trials(100), 1e-12);
    if (name == "mirror") return check_mirror(options.seed, trials(100), 1e-12);
    if (name == "phi-independence") return check_phi_independence(5, 1e-10);
    if (name == "homogeneity") return check_gaussian_homogeneity(5, 1e-10);
    if (name == "fast-path") return check_fast_paths(options.seed, trials(200), 1e-10);
    if (name == "scaling") return check_scaling(options.seed, trials(20), 1e-10);
    if (name == "oracle") {
        OracleOptions oracle;
        oracle.seed = options.seed;
        oracle.trials = trials(20);
        return check_oracle(oracle);
    }
    if (name == "parseval") return check_parseval(0.99, 1.01);
    if (name == "peaks") return check_peak_counts();
    if (name == "rotation") return check_rotation();
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace oamspec
