#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace oamspec {

using Complex = std::complex<double>;

/// Atomic parameters. Rates and detunings are in units of the reference decay rate Gamma.
struct AtomParams {
    double gamma1 = 1.0; ///< decay rate |1> -> |3>
    double gamma2 = 1.0; ///< decay rate |2> -> |3>
    double p = 0.0;      ///< dipole alignment; cross-damping strength, in [-1, 1]
    double delta1 = 0.0; ///< detuning of the vortex transition |0> <-> |1>
    double delta2 = 0.0; ///< detuning of the coupling transition |0> <-> |2>

    /// Upper-state splitting omega21 = delta2 - delta1.
    double omega21() const noexcept { return delta2 - delta1; }

    /// Cross-damping amplitude p*sqrt(gamma1*gamma2)/2.
    double cross_damping() const noexcept { return p * std::sqrt(gamma1 * gamma2) / 2.0; }

    /// Throws ValidationError when an invariant is violated.
    void validate() const;

    friend bool operator==(const AtomParams&, const AtomParams&) = default;
};

enum class CouplingProfile { Constant, Gaussian };

/// Vortex beam on |0> <-> |1> and coupling beam on |0> <-> |2>.
/// Lengths are measured in the same unit as `waist`.
struct FieldConfig {
    double o01 = 1.0;     ///< vortex peak amplitude
    double waist = 1.0;   ///< beam waist w
    int winding = 1;      ///< OAM number l
    double omega02 = 1.0; ///< coupling amplitude
    CouplingProfile coupling_profile = CouplingProfile::Constant;

    void validate() const;

    friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

struct InitialState {
    Complex b0{1.0, 0.0};
    Complex b1{0.0, 0.0};
    Complex b2{0.0, 0.0};

    double norm_squared() const noexcept { return std::norm(b0) + std::norm(b1) + std::norm(b2); }

    /// Throws ValidationError unless the state has unit norm to 1e-12.
    void validate() const;

    static InitialState ground() { return {}; }

    friend bool operator==(const InitialState&, const InitialState&) = default;
};

/// Wrap an angle into [0, 2*pi).
inline double normalize_angle(double phi) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(phi, two_pi);
    if (wrapped < 0.0) wrapped += two_pi;
    // fmod of a tiny negative number can round back up to exactly 2*pi
    if (wrapped >= two_pi) wrapped = 0.0;
    return wrapped;
}

/// Transverse position (polar) plus the emitted-photon detuning.
class SpectralPoint {
public:
    SpectralPoint() = default;
    SpectralPoint(double r, double phi, double delta_k);

    double r() const noexcept { return r_; }
    double phi() const noexcept { return phi_; }
    double delta_k() const noexcept { return delta_k_; }

    SpectralPoint with_delta_k(double delta_k) const { return {r_, phi_, delta_k}; }

private:
    double r_ = 0.0;
    double phi_ = 0.0;
    double delta_k_ = 0.0;
};

/// Intermediate quantities of the closed-form resolvent at one (r, phi, delta_k).
struct ResolventParts {
    Complex x1, x2;
    Complex lambda_;
    Complex xi0, xi1, xi2, xi3, xi4, xi5;
    Complex z_coef;
    // M and N depend on the initial state; see mn_from_initial().
    Complex m_coef, n_coef;
};

} // namespace oamspec
