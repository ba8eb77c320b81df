// oamspec command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 invalid scenario/config,
// 4 verification failure, 5 I/O error.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "oamspec/emission.hpp"
#include "oamspec/errors.hpp"
#include "oamspec/fieldmap.hpp"
#include "oamspec/map_export.hpp"
#include "oamspec/scenario.hpp"
#include "oamspec/verification.hpp"

namespace fs = std::filesystem;
using namespace oamspec;

namespace {

enum Exit : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kInvalid = 3,
    kVerifyFailed = 4,
    kIo = 5,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SourceOptions {
    std::string builtin;
    std::string config;
    std::vector<std::string> sets;
    std::string out;
};

void add_source_options(CLI::App* cmd, SourceOptions& src, bool with_builtin = true) {
    CLI::Option* builtin = nullptr;
    if (with_builtin)
        builtin = cmd->add_option("--builtin", src.builtin, "builtin scenario id, e.g. fig2a-l3");
    auto* config = cmd->add_option("--config", src.config, "scenario document");
    if (builtin) builtin->excludes(config);
    cmd->add_option("--set", src.sets, "override a scenario key (key=value, repeatable)");
    cmd->add_option("--out", src.out, "output directory (default: $OAMSPEC_OUT or .)");
}

void apply_sets(Scenario& s, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--set expects key=value, got '" + kv + "'");
        apply_setting(s, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

Scenario resolve_scenario(const SourceOptions& src) {
    Scenario s;
    if (!src.builtin.empty()) {
        auto found = find_builtin(src.builtin);
        if (!found) throw UsageError("unknown builtin scenario '" + src.builtin + "'");
        s = *found;
    } else if (!src.config.empty()) {
        s = load_scenario(src.config);
    }
    apply_sets(s, src.sets);
    s.validate();
    return s;
}

fs::path output_dir(const std::string& flag) {
    fs::path dir = ".";
    if (!flag.empty()) {
        dir = flag;
    } else if (const char* env = std::getenv("OAMSPEC_OUT"); env && *env) {
        dir = env;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::string file_stem(const std::string& label) {
    std::string out;
    for (const char c : label) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out += keep ? c : '_';
    }
    return out.empty() ? "scenario" : out;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct MapSummary {
    MapStats stats;
    PeakCount peaks;
    int spots = 0;
};

MapSummary summarize(const Scenario& s, const SpectrumMap& map) {
    MapSummary sum;
    sum.stats = map_stats(map);
    try {
        const auto profile = azimuthal_profile(s.atom, s.fields, s.init, s.delta_k, spot_radius(s.fields), 720);
        sum.peaks = count_peaks(profile);
    } catch (const SpectralPole&) {
        sum.peaks = {0, true};
    }
    sum.spots = count_spots(map);
    return sum;
}

MapSummary write_map(const Scenario& s, const fs::path& dir, const std::string& stem) {
    const SpectrumMap map = evaluate_map(s.atom, s.fields, s.init, s.delta_k, s.grid);
    write_file_atomic(dir / (stem + ".csv"), export_map(map, MapFormat::Csv));
    write_file_atomic(dir / (stem + ".pgm"), export_map(map, MapFormat::Image));
    write_file_atomic(dir / (stem + ".range.txt"), range_sidecar(map));

    const MapSummary sum = summarize(s, map);
    const auto& st = sum.stats;
    std::cout << s.label << ": " << s.grid.resolution << "x" << s.grid.resolution << " min=" << num(st.min)
              << " max=" << num(st.max);
    if (st.argmax_row >= 0)
        std::cout << " argmax=(row " << st.argmax_row << ", col " << st.argmax_column << "; x="
                  << num(s.grid.x_at(st.argmax_column) * s.fields.waist)
                  << ", y=" << num(s.grid.y_at(st.argmax_row) * s.fields.waist) << ")";
    std::cout << " masked=" << st.masked_cells << " peaks="
              << (sum.peaks.degenerate ? std::string("degenerate") : std::to_string(sum.peaks.count))
              << " spots=" << sum.spots << " -> " << (dir / (stem + ".csv")).string() << "\n";
    return sum;
}

int run_map(const SourceOptions& src) {
    const Scenario s = resolve_scenario(src);
    write_map(s, output_dir(src.out), file_stem(s.label));
    return kOk;
}

struct SpectrumOptions {
    std::optional<double> r;
    double phi = 0.0;
    double dk_min = -10.0;
    double dk_max = 10.0;
    int points = 2001;
};

int run_spectrum(const SourceOptions& src, const SpectrumOptions& opt) {
    const Scenario s = resolve_scenario(src);
    if (!std::isfinite(opt.dk_min) || !std::isfinite(opt.dk_max) || !(opt.dk_min < opt.dk_max))
        throw ValidationError("spectrum range must be finite with dk-min < dk-max");
    if (opt.points < 2) throw ValidationError("spectrum needs at least 2 points");
    const double r = opt.r.value_or(spot_radius(s.fields));

    std::string csv = "delta_k,S\n";
    int poles = 0;
    for (int i = 0; i < opt.points; ++i) {
        const double dk = i + 1 == opt.points ? opt.dk_max
                                              : opt.dk_min + (opt.dk_max - opt.dk_min) * i / (opt.points - 1);
        double value = std::nan("");
        try {
            value = spectrum(s.atom, s.fields, s.init, SpectralPoint{r, opt.phi, dk}, PolePolicy::RemovableLimit);
        } catch (const SpectralPole&) {
            ++poles;
        }
        csv += num(dk) + "," + num(value) + "\n";
    }
    const fs::path path = output_dir(src.out) / (file_stem(s.label) + ".spectrum.csv");
    write_file_atomic(path, csv);
    std::cout << s.label << ": " << opt.points << " points at r=" << num(r) << " phi=" << num(opt.phi)
              << " poles=" << poles << " -> " << path.string() << "\n";
    return kOk;
}

struct ProfileOptions {
    std::optional<double> r;
    int n_phi = 360;
};

int run_profile(const SourceOptions& src, const ProfileOptions& opt) {
    const Scenario s = resolve_scenario(src);
    const double r = opt.r.value_or(spot_radius(s.fields));
    const auto profile = azimuthal_profile(s.atom, s.fields, s.init, s.delta_k, r, opt.n_phi);
    std::string csv = "phi,S\n";
    for (const auto& sample : profile) csv += num(sample.phi) + "," + num(sample.value) + "\n";
    const fs::path path = output_dir(src.out) / (file_stem(s.label) + ".profile.csv");
    write_file_atomic(path, csv);
    const PeakCount pc = count_peaks(profile);
    std::cout << s.label << ": r=" << num(r) << " samples=" << profile.size()
              << " peaks=" << (pc.degenerate ? std::string("degenerate") : std::to_string(pc.count))
              << " cv=" << coefficient_of_variation(profile) << " -> " << path.string() << "\n";
    return kOk;
}

std::string id_list() {
    std::string out;
    for (const auto& id : figure_ids()) out += (out.empty() ? "" : ", ") + id;
    return out;
}

int run_reproduce(const std::string& id, const SourceOptions& src) {
    const auto panels = figure_panels(id);
    if (panels.empty()) {
        std::cerr << "error: unknown figure id '" << id << "'; valid ids: " << id_list() << "\n";
        return kUsage;
    }
    const fs::path dir = output_dir(src.out);
    for (Scenario s : panels) {
        apply_sets(s, src.sets);
        s.validate();
        write_map(s, dir, file_stem(s.label));
    }
    return kOk;
}

int run_sweep(const SourceOptions& src, const std::string& param, const std::vector<std::string>& values) {
    const Scenario base = resolve_scenario(src);
    const auto& keys = scenario_keys();
    if (std::find(keys.begin(), keys.end(), param) == keys.end() || param == "label")
        throw UsageError("cannot sweep '" + param + "'");
    if (values.empty()) throw UsageError("--values needs at least one value");

    const fs::path dir = output_dir(src.out);
    const std::string stem = file_stem(base.label);
    std::string index = param + ",max_S,peaks,spots\n";
    for (const auto& value : values) {
        Scenario s = base;
        apply_setting(s, param, value);
        s.label = base.label + "." + param + "-" + value;
        s.validate();
        const MapSummary sum = write_map(s, dir, file_stem(s.label));
        index += value + "," + num(sum.stats.max) + "," +
                 (sum.peaks.degenerate ? std::string("degenerate") : std::to_string(sum.peaks.count)) + "," +
                 std::to_string(sum.spots) + "\n";
    }
    const fs::path path = dir / (stem + ".sweep-" + param + ".csv");
    write_file_atomic(path, index);
    std::cout << "index -> " << path.string() << "\n";
    return kOk;
}

int run_verify(const std::vector<std::string>& suites, std::uint64_t seed, int trials) {
    const auto names = suites.empty() ? suite_names() : suites;
    const auto known = suite_names();
    for (const auto& n : names)
        if (std::find(known.begin(), known.end(), n) == known.end())
            throw UsageError("unknown suite '" + n + "'");

    std::cout << "seed " << seed << "\n";
    bool all = true;
    for (const auto& n : names) {
        const CheckReport r = run_suite(n, SuiteOptions{seed, trials});
        all = all && r.passed;
        std::cout << std::left << std::setw(18) << r.name << (r.passed ? "PASS" : "FAIL") << "  checks="
                  << r.checks << " failures=" << r.failures << "  " << r.detail << "\n";
    }
    return all ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatially structured spontaneous-emission spectra of a vortex-driven V atom"};
    app.require_subcommand(1);

    SourceOptions src;

    auto* map = app.add_subcommand("map", "evaluate a spectrum map and write CSV, PGM and range sidecar");
    add_source_options(map, src);

    SpectrumOptions spec_opt;
    auto* spec = app.add_subcommand("spectrum", "spectrum versus detuning at a fixed point");
    add_source_options(spec, src);
    spec->add_option("--r", spec_opt.r, "radius (default: vortex ring radius)");
    spec->add_option("--phi", spec_opt.phi, "azimuth");
    spec->add_option("--dk-min", spec_opt.dk_min, "first detuning");
    spec->add_option("--dk-max", spec_opt.dk_max, "last detuning");
    spec->add_option("--points", spec_opt.points, "number of detunings");

    ProfileOptions prof_opt;
    auto* prof = app.add_subcommand("profile", "azimuthal profile on a circle");
    add_source_options(prof, src);
    prof->add_option("--r", prof_opt.r, "radius (default: vortex ring radius)");
    prof->add_option("--n-phi", prof_opt.n_phi, "number of angles");

    std::string figure;
    auto* repro = app.add_subcommand("reproduce", "write every panel of a figure family");
    repro->add_option("figure", figure, "figure id, e.g. fig2a")->required();
    repro->add_option("--set", src.sets, "override a key in every panel (key=value, repeatable)");
    repro->add_option("--out", src.out, "output directory (default: $OAMSPEC_OUT or .)");

    std::string param;
    std::vector<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "one map per value of a scenario key");
    add_source_options(sweep, src);
    sweep->add_option("--param", param, "scenario key to vary")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

    std::vector<std::string> suites;
    std::uint64_t seed = 20240611;
    int trials = 0;
    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    verify->add_option("--suite", suites, "suite to run (repeatable; default all)");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--trials", trials, "trials for randomised suites (0 = suite default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*map) return run_map(src);
        if (*spec) return run_spectrum(src, spec_opt);
        if (*prof) return run_profile(src, prof_opt);
        if (*repro) return run_reproduce(figure, src);
        if (*sweep) return run_sweep(src, param, values);
        if (*verify) return run_verify(suites, seed, trials);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const ValidationError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kInvalid;
    } catch (const InvalidScenario& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kInvalid;
    } catch (const ConfigError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}
