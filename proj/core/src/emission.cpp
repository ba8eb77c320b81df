#include "oamspec/emission.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "oamspec/errors.hpp"

namespace oamspec {

namespace {

constexpr Complex kI{0.0, 1.0};

double radial_gaussian(double r, double waist) {
    const double rho = r / waist;
    return std::exp(-rho * rho);
}

} // namespace

void AtomParams::validate() const {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
        throw ValidationError("decay rates gamma1, gamma2 must be positive");
    if (!(p >= -1.0 && p <= 1.0))
        throw ValidationError("alignment parameter p must lie in [-1, 1], got " + std::to_string(p));
    if (!std::isfinite(delta1) || !std::isfinite(delta2))
        throw ValidationError("detunings must be finite");
}

void FieldConfig::validate() const {
    if (!(o01 >= 0.0) || !std::isfinite(o01))
        throw ValidationError("vortex amplitude o01 must be finite and >= 0");
    if (!(omega02 >= 0.0) || !std::isfinite(omega02))
        throw ValidationError("coupling amplitude omega02 must be finite and >= 0");
    if (!(waist > 0.0) || !std::isfinite(waist))
        throw ValidationError("beam waist must be positive");
}

void InitialState::validate() const {
    const double n2 = norm_squared();
    if (!(std::abs(n2 - 1.0) <= 1e-12))
        throw ValidationError("initial amplitudes must have unit norm, |b|^2 = " + std::to_string(n2));
}

SpectralPoint::SpectralPoint(double r, double phi, double delta_k)
    : r_(r), phi_(normalize_angle(phi)), delta_k_(delta_k) {
    if (!(r >= 0.0))
        throw ValidationError("radial coordinate must be >= 0");
}

Complex vortex_rabi(const SpectralPoint& point, const FieldConfig& fields) {
    const int l = fields.winding;
    const double rho = point.r() / fields.waist;
    const double magnitude = fields.o01 * std::pow(rho, std::abs(l)) * radial_gaussian(point.r(), fields.waist);
    return std::polar(magnitude, static_cast<double>(l) * point.phi());
}

Complex coupling_rabi(const SpectralPoint& point, const FieldConfig& fields) {
    switch (fields.coupling_profile) {
    case CouplingProfile::Gaussian:
        return {fields.omega02 * radial_gaussian(point.r(), fields.waist), 0.0};
    case CouplingProfile::Constant:
        break;
    }
    return {fields.omega02, 0.0};
}

ResolventParts resolvent_parts(const AtomParams& atom, const FieldConfig& fields,
                               const SpectralPoint& point) {
    const double dk = point.delta_k();
    const double q = atom.cross_damping();

    const Complex o01 = vortex_rabi(point, fields);
    const Complex o10 = std::conj(o01);
    const Complex o02 = coupling_rabi(point, fields);
    const Complex o20 = std::conj(o02);
    const double i01 = std::norm(o01);
    const double i02 = std::norm(o02);

    ResolventParts parts;
    parts.x1 = Complex{dk - atom.delta1, atom.gamma1 / 2.0};
    parts.x2 = Complex{dk - atom.delta2, atom.gamma2 / 2.0};

    parts.xi0 = o10 * parts.x2 - kI * o20 * q;
    parts.xi1 = dk * parts.x2 - i02;
    parts.xi2 = kI * dk * q - o10 * o02;
#ifdef OAMSPEC_MUTANT_XI2_SIGN
    parts.xi2 = -parts.xi2;
#endif
    parts.xi3 = o20 * parts.x1 - kI * o10 * q;
    parts.xi4 = kI * dk * q - o01 * o20;
    parts.xi5 = dk * parts.x1 - i01;

    parts.lambda_ = dk * (parts.x1 * parts.x2 + q * q) - (i01 * parts.x2 + i02 * parts.x1);
    parts.z_coef = parts.lambda_ + kI * q * (o10 * o02 + o01 * o20);
    return parts;
}

ResolventParts resolvent_parts(const AtomParams& atom, const FieldConfig& fields,
                               const SpectralPoint& point, const InitialState& init) {
    ResolventParts parts = resolvent_parts(atom, fields, point);
    const auto [m, n] = mn_from_initial(parts, init);
    parts.m_coef = m;
    parts.n_coef = n;
    return parts;
}

EmissionNumerators mn_from_initial(const ResolventParts& parts, const InitialState& init) {
    return {
        kI * init.b0 * parts.xi0 + kI * init.b1 * parts.xi1 - kI * init.b2 * parts.xi2,
        kI * init.b0 * parts.xi3 - kI * init.b1 * parts.xi4 + kI * init.b2 * parts.xi5,
    };
}

namespace {

// Taylor data in delta_k at the evaluation point: M and N are quadratic, Z is
// cubic, and dX1/d(delta_k) = dX2/d(delta_k) = 1.
struct Jets {
    std::array<Complex, 3> m;
    std::array<Complex, 3> n;
    std::array<Complex, 4> z;
};

Jets jets(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
          const SpectralPoint& point, const ResolventParts& parts, const EmissionNumerators& mn) {
    const double dk = point.delta_k();
    const Complex iq = kI * atom.cross_damping();
    const double q = atom.cross_damping();
    const Complex o01 = vortex_rabi(point, fields);
    const Complex o02 = coupling_rabi(point, fields);
    const Complex& x1 = parts.x1;
    const Complex& x2 = parts.x2;

    Jets j;
    j.m = {mn.m, kI * (init.b0 * std::conj(o01) + init.b1 * (x2 + dk) - init.b2 * iq), 2.0 * kI * init.b1};
    j.n = {mn.n, kI * (init.b0 * std::conj(o02) - init.b1 * iq + init.b2 * (x1 + dk)), 2.0 * kI * init.b2};
    j.z = {parts.z_coef, x1 * x2 + q * q + dk * (x1 + x2) - std::norm(o01) - std::norm(o02),
           2.0 * (x1 + x2) + 2.0 * dk, Complex{6.0, 0.0}};
    return j;
}

// Limit of top/bottom at a common zero, from the lowest derivative of
// `bottom` that does not vanish. Empty when the zero of `bottom` is not removable.
std::optional<Complex> removable_ratio(const std::array<Complex, 3>& top, const std::array<Complex, 4>& bottom,
                                       double eps) {
    if (std::abs(bottom[0]) >= eps) return top[0] / bottom[0];
    for (std::size_t order = 1; order < bottom.size(); ++order) {
        if (std::abs(top[order - 1]) >= eps) return std::nullopt;
        if (std::abs(bottom[order]) >= eps)
            return (order < top.size() ? top[order] : Complex{}) / bottom[order];
    }
    return std::nullopt;
}

std::array<Complex, 3> combine(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b, double sign) {
    return {a[0] + sign * b[0], a[1] + sign * b[1], a[2] + sign * b[2]};
}

// |M|^2 + |N|^2 + 2p Re(M N*), written as a sum of non-negative terms.
double channel_sum(Complex m, Complex n, double p) {
    const double w = std::abs(p);
    const Complex coherent = p >= 0.0 ? m + n : m - n;
    return w * std::norm(coherent) + (1.0 - w) * (std::norm(m) + std::norm(n));
}

} // namespace

Complex bk_infinity(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                    const SpectralPoint& point, double pole_epsilon) {
    const ResolventParts parts = resolvent_parts(atom, fields, point);
    const double z_abs = std::abs(parts.z_coef);
    if (!(z_abs >= pole_epsilon))
        throw SpectralPole(z_abs);
    const auto [m, n] = mn_from_initial(parts, init);
    return -(m + n) / parts.z_coef;
}

double spectrum(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                const SpectralPoint& point, double pole_epsilon) {
    const ResolventParts parts = resolvent_parts(atom, fields, point);
    const double z_abs = std::abs(parts.z_coef);
    if (!(z_abs >= pole_epsilon))
        throw SpectralPole(z_abs);
    const auto [m, n] = mn_from_initial(parts, init);
    return channel_sum(m, n, atom.p) / std::norm(parts.z_coef);
}

Complex bk_infinity_continuous(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                               const SpectralPoint& point, double pole_epsilon) {
    const ResolventParts parts = resolvent_parts(atom, fields, point);
    const EmissionNumerators mn = mn_from_initial(parts, init);
    if (std::abs(parts.z_coef) >= pole_epsilon)
        return -(mn.m + mn.n) / parts.z_coef;
    const Jets j = jets(atom, fields, init, point, parts, mn);
    const auto ratio = removable_ratio(combine(j.m, j.n, 1.0), j.z, pole_epsilon);
    if (!ratio) throw SpectralPole(std::abs(parts.z_coef));
    return -*ratio;
}

double spectrum_continuous(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                           const SpectralPoint& point, double pole_epsilon) {
    const ResolventParts parts = resolvent_parts(atom, fields, point);
    const EmissionNumerators mn = mn_from_initial(parts, init);
    if (std::abs(parts.z_coef) >= pole_epsilon)
        return channel_sum(mn.m, mn.n, atom.p) / std::norm(parts.z_coef);

    const Jets j = jets(atom, fields, init, point, parts, mn);
    const double w = std::abs(atom.p);
    const auto pole = [&] { return SpectralPole(std::abs(parts.z_coef)); };

    double value = 0.0;
    if (w > 0.0) {
        const auto coherent = removable_ratio(combine(j.m, j.n, atom.p >= 0.0 ? 1.0 : -1.0), j.z, pole_epsilon);
        if (!coherent) throw pole();
        value += w * std::norm(*coherent);
    }
    if (w < 1.0) {
        const auto m = removable_ratio(j.m, j.z, pole_epsilon);
        const auto n = removable_ratio(j.n, j.z, pole_epsilon);
        if (!m || !n) throw pole();
        value += (1.0 - w) * (std::norm(*m) + std::norm(*n));
    }
    return value;
}

double spectrum(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                const SpectralPoint& point, PolePolicy policy, double pole_epsilon) {
    return policy == PolePolicy::Strict ? spectrum(atom, fields, init, point, pole_epsilon)
                                        : spectrum_continuous(atom, fields, init, point, pole_epsilon);
}

double spectrum_ground_no_qi(const AtomParams& atom, const FieldConfig& fields,
                             const SpectralPoint& point, double pole_epsilon) {
    if (atom.p != 0.0)
        throw InvalidScenario("spectrum_ground_no_qi requires p = 0");
    const double dk = point.delta_k();
    const Complex x1{dk - atom.delta1, atom.gamma1 / 2.0};
    const Complex x2{dk - atom.delta2, atom.gamma2 / 2.0};
    const double i01 = std::norm(vortex_rabi(point, fields));
    const double i02 = std::norm(coupling_rabi(point, fields));

    const Complex z = dk * x1 * x2 - (i01 * x2 + i02 * x1);
    const double z_abs = std::abs(z);
    if (!(z_abs >= pole_epsilon))
        throw SpectralPole(z_abs);
    return (i01 * std::norm(x2) + i02 * std::norm(x1)) / std::norm(z);
}

double resonant_closed_form(const AtomParams& atom, const FieldConfig& fields,
                            const SpectralPoint& point, double pole_epsilon) {
    if (atom.p != 1.0 || atom.delta1 != 0.0 || atom.delta2 != 0.0 || atom.gamma1 != atom.gamma2)
        throw InvalidScenario("resonant_closed_form requires p = 1, delta1 = delta2 = 0, gamma1 = gamma2");
    if (fields.coupling_profile != CouplingProfile::Constant)
        throw InvalidScenario("resonant_closed_form requires a constant coupling field");

    const double gamma = atom.gamma1;
    const double dk = point.delta_k();
    const double omega = std::abs(vortex_rabi(point, fields));
    const double omega02 = fields.omega02;
    const double l_phi = static_cast<double>(fields.winding) * point.phi();

    const double a = omega * omega + omega02 * omega02;
    const double b = 2.0 * omega * omega02 * std::cos(l_phi);

    const Complex z = dk * dk * Complex{dk, gamma} - a * dk - Complex{0.0, gamma * (a - b) / 2.0};
    const double z_abs = std::abs(z);
    if (!(z_abs >= pole_epsilon))
        throw SpectralPole(z_abs);
    return dk * dk * (a + b) / std::norm(z);
}

} // namespace oamspec
