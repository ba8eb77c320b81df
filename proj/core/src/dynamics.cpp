#include "oamspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oamspec/emission.hpp"
#include "oamspec/errors.hpp"
#include "parallel.hpp"

namespace oamspec {

namespace {

constexpr Complex kI{0.0, 1.0};

using Matrix3 = std::array<Amplitudes, 3>;

Amplitudes derivative(const Matrix3& h, const Amplitudes& b) {
    Amplitudes out;
    for (std::size_t row = 0; row < 3; ++row) {
        const Complex hb = h[row][0] * b[0] + h[row][1] * b[1] + h[row][2] * b[2];
        out[row] = -kI * hb;
    }
    return out;
}

Amplitudes axpy(const Amplitudes& b, double scale, const Amplitudes& k) {
    return {b[0] + scale * k[0], b[1] + scale * k[1], b[2] + scale * k[2]};
}

double population(const Amplitudes& b) {
    return std::norm(b[0]) + std::norm(b[1]) + std::norm(b[2]);
}

double max_rate(const Matrix3& h) {
    double rate = 0.0;
    for (const auto& row : h)
        for (const auto& entry : row) rate = std::max(rate, std::abs(entry));
    return rate;
}

// Phasor is re-seeded from std::polar every this many samples so the
// recurrence error stays at round-off level regardless of trajectory length.
constexpr std::size_t kReseedInterval = 256;

} // namespace

void IntegratorConfig::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw ConfigError("t_final must be positive and finite");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("dt must be positive and finite");
    if (dt > t_final)
        throw ConfigError("dt must not exceed t_final");
    if (!(tail_tolerance > 0.0))
        throw ConfigError("tail_tolerance must be positive");
}

double Trajectory::survival(std::size_t i) const noexcept {
    return population(amps[i]);
}

Matrix3 effective_hamiltonian(const AtomParams& atom, const FieldConfig& fields, double r, double phi) {
    const SpectralPoint point{r, phi, 0.0};
    const Complex o01 = vortex_rabi(point, fields);
    const Complex o02 = coupling_rabi(point, fields);
    const Complex q{0.0, -atom.cross_damping()};
    return {{
        {Complex{}, o01, o02},
        {std::conj(o01), Complex{atom.delta1, -atom.gamma1 / 2.0}, q},
        {std::conj(o02), q, Complex{atom.delta2, -atom.gamma2 / 2.0}},
    }};
}

Trajectory evolve(const AtomParams& atom, const FieldConfig& fields, const InitialState& init,
                  double r, double phi, const IntegratorConfig& cfg) {
    cfg.validate();
    atom.validate();
    fields.validate();
    init.validate();

    const Matrix3 h = effective_hamiltonian(atom, fields, r, phi);
    if (cfg.dt * max_rate(h) > 0.1)
        throw ConfigError("dt too coarse for the fastest rate in the Hamiltonian (need dt * rate <= 0.1)");

    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
    Trajectory traj;
    traj.alignment = atom.p;
    traj.times.resize(steps + 1);
    traj.amps.resize(steps + 1);
    traj.emission_source.resize(steps + 1);

    Amplitudes b{init.b0, init.b1, init.b2};
    const double dt = cfg.dt;
    for (std::size_t i = 0;; ++i) {
        traj.times[i] = static_cast<double>(i) * dt;
        traj.amps[i] = b;
        traj.emission_source[i] = b[1] + b[2];
        if (i == steps) break;

        const Amplitudes k1 = derivative(h, b);
        const Amplitudes k2 = derivative(h, axpy(b, dt / 2.0, k1));
        const Amplitudes k3 = derivative(h, axpy(b, dt / 2.0, k2));
        const Amplitudes k4 = derivative(h, axpy(b, dt, k3));
        for (std::size_t c = 0; c < 3; ++c)
            b[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }

    traj.final_survival = population(traj.amps.back());
    if (traj.final_survival <= cfg.tail_tolerance) {
        traj.convergence = Convergence::Converged;
        return traj;
    }

    // A remainder that neither decays nor radiates over the last tenth of the
    // horizon is a trapped (dark) component and does not feed the spectrum.
    const std::size_t window_start = steps - steps / 10;
    const double drop = population(traj.amps[window_start]) - traj.final_survival;
    double tail_source = 0.0;
    for (std::size_t i = window_start; i <= steps; ++i)
        tail_source = std::max(tail_source, emitted_power(traj, i));
    traj.convergence = (drop <= cfg.tail_tolerance && tail_source <= cfg.tail_tolerance)
                           ? Convergence::DarkState
                           : Convergence::NotConverged;
    return traj;
}

Trajectory evolve_until_converged(const AtomParams& atom, const FieldConfig& fields,
                                  const InitialState& init, double r, double phi,
                                  IntegratorConfig cfg, double max_t_final) {
    Trajectory traj = evolve(atom, fields, init, r, phi, cfg);
    while (!traj.usable() && cfg.t_final * 2.0 <= max_t_final) {
        cfg.t_final *= 2.0;
        traj = evolve(atom, fields, init, r, phi, cfg);
    }
    return traj;
}

namespace {

void require_usable(const Trajectory& traj) {
    if (!traj.usable())
        throw NotConverged("trajectory still radiating at t_final (survival " +
                           std::to_string(traj.final_survival) + ")");
}

} // namespace

ChannelAmplitudes channel_amplitudes(const Trajectory& traj, double delta_k) {
    require_usable(traj);
    const std::size_t n = traj.times.size();
    if (n < 2) return {};

    const double dt = traj.dt();
    const Complex step = std::polar(1.0, delta_k * dt);
    Complex s1{};
    Complex s2{};
    Complex phasor{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (i % kReseedInterval == 0) phasor = std::polar(1.0, delta_k * traj.times[i]);
        const Complex w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * phasor;
        s1 += w * traj.amps[i][1];
        s2 += w * traj.amps[i][2];
        phasor *= step;
    }
    return {-dt * s1, -dt * s2};
}

Complex spectral_amplitude(const Trajectory& traj, double delta_k) {
    const ChannelAmplitudes c = channel_amplitudes(traj, delta_k);
    return c.a1 + c.a2;
}

double oracle_spectrum(const Trajectory& traj, double delta_k) {
    const ChannelAmplitudes c = channel_amplitudes(traj, delta_k);
    return std::norm(c.a1) + std::norm(c.a2) + 2.0 * traj.alignment * (c.a1 * std::conj(c.a2)).real();
}

double emitted_power(const Trajectory& traj, std::size_t i) {
    const Amplitudes& b = traj.amps[i];
    return std::norm(b[1]) + std::norm(b[2]) + 2.0 * traj.alignment * (b[1] * std::conj(b[2])).real();
}

std::vector<Complex> spectral_amplitudes(const Trajectory& traj, std::span<const double> delta_ks,
                                         unsigned threads) {
    require_usable(traj);
    std::vector<Complex> out(delta_ks.size());
    detail::parallel_for(delta_ks.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = spectral_amplitude(traj, delta_ks[i]);
    });
    return out;
}

std::vector<double> oracle_spectra(const Trajectory& traj, std::span<const double> delta_ks, unsigned threads) {
    require_usable(traj);
    std::vector<double> out(delta_ks.size());
    detail::parallel_for(delta_ks.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = oracle_spectrum(traj, delta_ks[i]);
    });
    return out;
}

std::vector<double> uniform_grid(double half_width, std::size_t points) {
    if (points < 2 || !(half_width > 0.0))
        throw ConfigError("uniform grid needs >= 2 points and a positive half width");
    std::vector<double> grid(points);
    const double spacing = 2.0 * half_width / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = -half_width + static_cast<double>(i) * spacing;
    return grid;
}

ParsevalResult parseval_check(const Trajectory& traj, std::span<const double> delta_k_grid,
                              unsigned threads) {
    if (delta_k_grid.size() < 2)
        throw ConfigError("Parseval check needs at least two detuning samples");
    const auto spectra = oracle_spectra(traj, delta_k_grid, threads);

    ParsevalResult result;
    for (std::size_t i = 0; i + 1 < delta_k_grid.size(); ++i) {
        const double width = delta_k_grid[i + 1] - delta_k_grid[i];
        result.lhs += 0.5 * width * (spectra[i] + spectra[i + 1]);
    }

    const double dt = traj.dt();
    double source_energy = 0.0;
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i)
        source_energy += 0.5 * dt * (emitted_power(traj, i) + emitted_power(traj, i + 1));
    result.rhs = 2.0 * std::numbers::pi * source_energy;
    return result;
}

} // namespace oamspec
