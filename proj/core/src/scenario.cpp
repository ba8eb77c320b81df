#include "oamspec/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "oamspec/errors.hpp"

namespace oamspec {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

double parse_real(std::string_view key, std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError("key '" + std::string(key) + "': expected a number, got '" + std::string(text) + "'");
    if (!std::isfinite(value))
        throw ValidationError("key '" + std::string(key) + "' must be finite");
    return value;
}

int parse_integer(std::string_view key, std::string_view text) {
    const double value = parse_real(key, text);
    if (value != std::floor(value) || std::abs(value) > 1e9)
        throw ValidationError("key '" + std::string(key) + "' must be an integer, got " + std::string(trim(text)));
    return static_cast<int>(value);
}

Complex parse_complex(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        throw ParseError("key '" + std::string(key) + "': expected [re, im]");
    text = text.substr(1, text.size() - 2);
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
        throw ParseError("key '" + std::string(key) + "': expected exactly two components [re, im]");
    return {parse_real(key, text.substr(0, comma)), parse_real(key, text.substr(comma + 1))};
}

std::string parse_text(std::string_view text) {
    text = trim(text);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
    return std::string(text);
}

CouplingProfile parse_profile(std::string_view text) {
    std::string v = parse_text(text);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "constant") return CouplingProfile::Constant;
    if (v == "gaussian") return CouplingProfile::Gaussian;
    throw ParseError("coupling_profile must be 'constant' or 'gaussian', got '" + v + "'");
}

std::string format_complex(Complex z) {
    return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

// Strip a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

void renormalize_if_close(InitialState& init) {
    const double n2 = init.norm_squared();
    if (std::abs(n2 - 1.0) <= 1e-12) return;
    const double norm = std::sqrt(n2);
    if (!(std::abs(norm - 1.0) <= 1e-9))
        throw ValidationError("initial amplitudes must have unit norm, |b| = " + format_double(norm));
    init.b0 /= norm;
    init.b1 /= norm;
    init.b2 /= norm;
}

} // namespace

void Scenario::validate() const {
    atom.validate();
    fields.validate();
    init.validate();
    grid.validate();
    if (!std::isfinite(delta_k))
        throw ValidationError("delta_k must be finite");
    if (label.empty())
        throw ValidationError("scenario label must not be empty");
}

const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = {
        "label", "gamma1", "gamma2", "p", "delta1", "delta2", "o01", "omega02", "waist", "winding",
        "coupling_profile", "b0", "b1", "b2", "delta_k", "half_extent", "resolution",
    };
    return keys;
}

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
    if (key == "label") s.label = parse_text(value);
    else if (key == "gamma1") s.atom.gamma1 = parse_real(key, value);
    else if (key == "gamma2") s.atom.gamma2 = parse_real(key, value);
    else if (key == "p") s.atom.p = parse_real(key, value);
    else if (key == "delta1") s.atom.delta1 = parse_real(key, value);
    else if (key == "delta2") s.atom.delta2 = parse_real(key, value);
    else if (key == "o01") s.fields.o01 = parse_real(key, value);
    else if (key == "omega02") s.fields.omega02 = parse_real(key, value);
    else if (key == "waist") s.fields.waist = parse_real(key, value);
    else if (key == "winding") s.fields.winding = parse_integer(key, value);
    else if (key == "coupling_profile") s.fields.coupling_profile = parse_profile(value);
    else if (key == "b0") s.init.b0 = parse_complex(key, value);
    else if (key == "b1") s.init.b1 = parse_complex(key, value);
    else if (key == "b2") s.init.b2 = parse_complex(key, value);
    else if (key == "delta_k") s.delta_k = parse_real(key, value);
    else if (key == "half_extent") s.grid.half_extent = parse_real(key, value);
    else if (key == "resolution") s.grid.resolution = parse_integer(key, value);
    else throw ParseError("unknown key '" + std::string(key) + "'");
}

Scenario parse_scenario(std::string_view text) {
    Scenario scenario;
    std::map<std::string, int, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no);
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line_no);
        if (value.empty()) throw ParseError("missing value for '" + std::string(key) + "'", line_no);
        if (auto [it, inserted] = seen.emplace(std::string(key), line_no); !inserted)
            throw ParseError("duplicate key '" + std::string(key) + "' (first on line " + std::to_string(it->second) + ")", line_no);
        try {
            apply_setting(scenario, key, value);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    renormalize_if_close(scenario.init);
    scenario.validate();
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "label = \"" << s.label << "\"\n"
        << "gamma1 = " << format_double(s.atom.gamma1) << "\n"
        << "gamma2 = " << format_double(s.atom.gamma2) << "\n"
        << "p = " << format_double(s.atom.p) << "\n"
        << "delta1 = " << format_double(s.atom.delta1) << "\n"
        << "delta2 = " << format_double(s.atom.delta2) << "\n"
        << "o01 = " << format_double(s.fields.o01) << "\n"
        << "omega02 = " << format_double(s.fields.omega02) << "\n"
        << "waist = " << format_double(s.fields.waist) << "\n"
        << "winding = " << s.fields.winding << "\n"
        << "coupling_profile = "
        << (s.fields.coupling_profile == CouplingProfile::Gaussian ? "gaussian" : "constant") << "\n"
        << "b0 = " << format_complex(s.init.b0) << "\n"
        << "b1 = " << format_complex(s.init.b1) << "\n"
        << "b2 = " << format_complex(s.init.b2) << "\n"
        << "delta_k = " << format_double(s.delta_k) << "\n"
        << "half_extent = " << format_double(s.grid.half_extent) << "\n"
        << "resolution = " << s.grid.resolution << "\n";
    return out.str();
}

namespace {

struct Family {
    int figure;
    double p;
    InitialState init;
};

std::vector<Scenario> make_builtins() {
    const double h = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(3.0);
    const InitialState ground{{1.0, 0.0}, {}, {}};
    const InitialState excited{{}, {h, 0.0}, {h, 0.0}};
    const InitialState all_three{{t, 0.0}, {t, 0.0}, {t, 0.0}};

    // Common to every figure: Gamma1 = Gamma2 = Gamma, O01 = Omega02 = Gamma,
    // delta_k = 0; panel (a) degenerate, panel (b) delta1 = -delta2 = -Gamma.
    const auto base = [](char panel) {
        Scenario s;
        s.atom.gamma1 = s.atom.gamma2 = 1.0;
        s.atom.delta1 = panel == 'a' ? 0.0 : -1.0;
        s.atom.delta2 = panel == 'a' ? 0.0 : 1.0;
        s.fields.o01 = s.fields.omega02 = 1.0;
        s.fields.waist = 1.0;
        s.delta_k = 0.0;
        return s;
    };

    const std::array<Family, 5> families = {{
        {2, 1.0, ground},
        {3, 0.0, excited},
        {4, 1.0, excited},
        {5, 0.0, all_three},
        {6, 1.0, all_three},
    }};

    std::vector<Scenario> out;
    for (const auto& family : families) {
        for (const char panel : {'a', 'b'}) {
            for (int l = 1; l <= 4; ++l) {
                Scenario s = base(panel);
                s.atom.p = family.p;
                s.init = family.init;
                s.fields.winding = l;
                s.label = "fig" + std::to_string(family.figure) + panel + "-l" + std::to_string(l);
                out.push_back(s);
            }
        }
    }

    const std::array<std::pair<const char*, Family>, 4> gaussian = {{
        {"i", {7, 0.0, ground}},
        {"ii", {7, 1.0, ground}},
        {"iii", {7, 0.0, excited}},
        {"iv", {7, 1.0, excited}},
    }};
    for (const char panel : {'a', 'b'}) {
        for (const auto& [roman, family] : gaussian) {
            Scenario s = base(panel);
            s.atom.p = family.p;
            s.init = family.init;
            s.fields.winding = 0;
            s.fields.coupling_profile = CouplingProfile::Gaussian;
            s.label = std::string("fig7") + panel + "-" + roman;
            out.push_back(s);
        }
    }
    return out;
}

std::string family_of(const std::string& label) {
    return label.substr(0, label.find('-'));
}

} // namespace

const std::vector<Scenario>& builtin_scenarios() {
    static const std::vector<Scenario> scenarios = make_builtins();
    return scenarios;
}

std::optional<Scenario> find_builtin(std::string_view label) {
    for (const auto& s : builtin_scenarios())
        if (s.label == label) return s;
    return std::nullopt;
}

std::vector<std::string> figure_ids() {
    std::vector<std::string> ids;
    for (const auto& s : builtin_scenarios()) {
        std::string id = family_of(s.label);
        if (ids.empty() || ids.back() != id) ids.push_back(std::move(id));
    }
    return ids;
}

std::vector<Scenario> figure_panels(std::string_view figure_id) {
    std::vector<Scenario> panels;
    for (const auto& s : builtin_scenarios())
        if (family_of(s.label) == figure_id) panels.push_back(s);
    return panels;
}

} // namespace oamspec
