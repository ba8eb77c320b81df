#pragma once

// Time-domain cross-check of the closed-form spectrum. The three atomic
// amplitudes are integrated with a fixed-step RK4 scheme under the
// effective non-Hermitian Hamiltonian
//
//   H = [ 0      Omega01          Omega02         ]
//       [ Omega10  delta1 - i G1/2  -i q            ]
//       [ Omega20  -i q             delta2 - i G2/2 ]     q = p sqrt(G1 G2)/2
//
// (i db/dt = H b), and the photon amplitude is the Fourier integral of the
// emission source b1 + b2.

#include <array>
#include <span>
#include <vector>

#include "oamspec/types.hpp"

namespace oamspec {

struct IntegratorConfig {
    double t_final = 60.0;         ///< horizon, units of 1/Gamma
    double dt = 1e-3;              ///< fixed RK4 step
    double tail_tolerance = 1e-8;  ///< allowed radiating population left at t_final

    void validate() const;
};

enum class Convergence {
    Converged,    ///< survival probability fell below the tail tolerance
    DarkState,    ///< a non-radiating remainder is left; the source has decayed
    NotConverged, ///< still radiating at t_final
};

using Amplitudes = std::array<Complex, 3>;

struct Trajectory {
    std::vector<double> times;
    std::vector<Amplitudes> amps;
    std::vector<Complex> emission_source; ///< g1 b1 + g2 b2 with g = 1
    double alignment = 0.0;               ///< p, weight of the b1/b2 interference in emitted power
    Convergence convergence = Convergence::NotConverged;
    double final_survival = 1.0;

    double dt() const noexcept { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    double survival(std::size_t i) const noexcept;
    bool usable() const noexcept { return convergence != Convergence::NotConverged; }
};

/// The 3x3 effective Hamiltonian with field values frozen at (r, phi).
std::array<Amplitudes, 3> effective_hamiltonian(const AtomParams& atom, const FieldConfig& fields,
                                                double r, double phi);

/// Integrate from t = 0 to cfg.t_final. Throws ConfigError on a bad config;
/// non-convergence is reported through Trajectory::convergence.
Trajectory evolve(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                  double r, double phi, const IntegratorConfig& cfg = {});

/// Repeatedly doubles the horizon (starting from cfg.t_final) until the
/// trajectory is usable or max_t_final is reached.
Trajectory evolve_until_converged(const AtomParams& atom, const FieldConfig& fields,
                                  const InitialState& init, double r, double phi,
                                  IntegratorConfig cfg, double max_t_final);

/// -integral_0^inf exp(i dk t) (b1 + b2) dt by composite trapezoid over the samples.
/// Throws NotConverged if the trajectory is not usable.
Complex spectral_amplitude(const Trajectory& traj, double delta_k);

/// The two channel integrals -integral exp(i dk t) b1 dt and the same for b2.
struct ChannelAmplitudes {
    Complex a1;
    Complex a2;
};

ChannelAmplitudes channel_amplitudes(const Trajectory& traj, double delta_k);

/// Time-domain spectrum |a1|^2 + |a2|^2 + 2 p Re(a1 a2*), the counterpart of spectrum().
double oracle_spectrum(const Trajectory& traj, double delta_k);

/// Emitted power |b1|^2 + |b2|^2 + 2 p Re(b1 b2*) at sample i (the decay rate of the survival when Gamma1 = Gamma2 = 1).
double emitted_power(const Trajectory& traj, std::size_t i);

/// spectral_amplitude over many detunings, spread across `threads` workers (0 = hardware).
std::vector<Complex> spectral_amplitudes(const Trajectory& traj, std::span<const double> delta_ks,
                                         unsigned threads = 0);

struct ParsevalResult {
    double lhs = 0.0; ///< integral of oracle_spectrum over the detuning grid
    double rhs = 0.0; ///< 2 pi integral of emitted_power over time
};

/// oracle_spectrum over many detunings, spread across `threads` workers.
std::vector<double> oracle_spectra(const Trajectory& traj, std::span<const double> delta_ks,
                                   unsigned threads = 0);

/// Uniformly spaced detuning grid of `points` samples over [-half_width, half_width].
std::vector<double> uniform_grid(double half_width, std::size_t points);

ParsevalResult parseval_check(const Trajectory& traj, std::span<const double> delta_k_grid,
                              unsigned threads = 0);

} // namespace oamspec
