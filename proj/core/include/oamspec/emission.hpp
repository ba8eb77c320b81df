#pragma once

// Closed-form long-time spontaneous-emission spectrum of the driven V-type
// atom. The upper states |1>, |2> decay to |3> through two channels with
// cross-damping p; |0> <-> |1> is driven by a vortex beam and |0> <-> |2> by
// a coupling beam. All coupling constants g are 1, so the spectrum is
// normalised by the mode-density factor S0.

#include "oamspec/types.hpp"

namespace oamspec {

/// |Z| below this (in Gamma^3) is treated as a resolvent zero.
inline constexpr double kPoleEpsilon = 1e-12;

/// Omega01(r, phi) = o01 (r/w)^|l| exp(-r^2/w^2) exp(i l phi). Omega10 is its conjugate.
Complex vortex_rabi(const SpectralPoint& point, const FieldConfig& fields);

/// Omega02 at the point: a real constant, or omega02 exp(-r^2/w^2) for the Gaussian profile.
Complex coupling_rabi(const SpectralPoint& point, const FieldConfig& fields);

ResolventParts resolvent_parts(const AtomParams& atom, const FieldConfig& fields,
                               const SpectralPoint& point);

/// Same as above with m_coef / n_coef filled in for `init`.
ResolventParts resolvent_parts(const AtomParams& atom, const FieldConfig& fields,
                               const SpectralPoint& point, const InitialState& init);

struct EmissionNumerators {
    Complex m; ///< weight of channel |1> -> |3>
    Complex n; ///< weight of channel |2> -> |3>
};

/// M = i b0 xi0 + i b1 xi1 - i b2 xi2,  N = i b0 xi3 - i b1 xi4 + i b2 xi5.
EmissionNumerators mn_from_initial(const ResolventParts& parts, const InitialState& init);

/// Long-time photon amplitude b_k(inf) = -(M + N) / Z (both channels radiating
/// into one polarisation). |b_k|^2 equals spectrum() when p = 1.
/// Throws SpectralPole when |Z| < pole_epsilon.
Complex bk_infinity(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                    const SpectralPoint& point, double pole_epsilon = kPoleEpsilon);

/// S(delta_k)/S0 = (|M|^2 + |N|^2 + 2 p Re(M N*)) / |Z|^2.
/// The interference term is weighted by the dipole alignment p: photons from
/// orthogonal dipoles (p = 0) carry orthogonal polarisations and add in
/// intensity, parallel dipoles (p = 1) add in amplitude, giving |b_k(inf)|^2.
double spectrum(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                const SpectralPoint& point, double pole_epsilon = kPoleEpsilon);

/// Like bk_infinity / spectrum, but where Z vanishes together with the
/// numerators (a removable zero, e.g. a trapped state that does not radiate)
/// the value is continued by its limit in delta_k. Only non-removable zeros
/// raise SpectralPole.
Complex bk_infinity_continuous(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                               const SpectralPoint& point, double pole_epsilon = kPoleEpsilon);

double spectrum_continuous(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                           const SpectralPoint& point, double pole_epsilon = kPoleEpsilon);

/// How map and profile evaluation treat zeros of Z.
enum class PolePolicy {
    Strict,         ///< every |Z| < epsilon is a pole (spectrum())
    RemovableLimit, ///< removable zeros are continued (spectrum_continuous())
};

double spectrum(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                const SpectralPoint& point, PolePolicy policy, double pole_epsilon = kPoleEpsilon);

/// Ground-state start without cross-damping:
///   S/S0 = (|Omega01|^2 |X2|^2 + |Omega02|^2 |X1|^2) / |Z|^2,  Z = dk X1 X2 - (|Omega01|^2 X2 + |Omega02|^2 X1).
/// Only |Omega01| enters, so the result carries no azimuthal dependence.
/// Throws InvalidScenario if atom.p != 0.
double spectrum_ground_no_qi(const AtomParams& atom, const FieldConfig& fields,
                             const SpectralPoint& point, double pole_epsilon = kPoleEpsilon);

/// Ground-state start, p = 1, resonant degenerate drive (delta1 = delta2 = 0),
/// equal decay rates Gamma. With Omega = |Omega01|, A = Omega^2 + Omega02^2 and
/// B = 2 Omega Omega02 cos(l phi) the full spectrum reduces to
///
///   S/S0 = dk^2 (A + B) / | dk^2 (dk + i Gamma) - A dk - i Gamma (A - B) / 2 |^2
///
/// (obtained from M + N = i dk (Omega10 + Omega02) and Z on this domain).
/// At dk = 0 the two channels cancel exactly and the spectrum vanishes for
/// every (r, phi); off resonance the cos(l phi) terms give the l-fold pattern.
/// Throws InvalidScenario outside the domain, SpectralPole on a zero of Z.
double resonant_closed_form(const AtomParams& atom, const FieldConfig& fields,
                            const SpectralPoint& point, double pole_epsilon = kPoleEpsilon);

} // namespace oamspec
