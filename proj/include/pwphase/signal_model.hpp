#pragma once

#include "pwphase/core_numerics.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace pwphase {

struct SpectrumPiece {
    double a = 0.0;
    double b = 0.0;
    cplx value = 0.0;

    bool operator==(const SpectrumPiece&) const = default;
};

/// Bandlimited signal whose spectrum is piecewise constant on [-B, B].
/// Pieces are kept sorted by left endpoint and never overlap.
class PWSignal {
public:
    /// Throws InvalidArgument on B <= 0, overlapping or out-of-band pieces, or
    /// a real_on_line flag the spectrum does not honour.
    PWSignal(double B, std::vector<SpectrumPiece> pieces, bool real_on_line = false);

    double band() const noexcept { return B_; }
    const std::vector<SpectrumPiece>& pieces() const noexcept { return pieces_; }
    bool real_on_line() const noexcept { return real_; }

    /// Spectral L2 norm squared, which equals the time-domain energy.
    double energy() const;
    double spectrum_l1() const;

    PWSignal scaled(cplx factor) const;

    bool operator==(const PWSignal&) const = default;

private:
    double B_;
    std::vector<SpectrumPiece> pieces_;
    bool real_;
};

/// Closed form; each piece contributes v (b-a) e^{pi i (a+b) t} sinc((b-a) t).
cplx eval_time(const PWSignal& f, double t);
/// Half-open [a, b) lookup, 0 outside the pieces.
cplx eval_spectrum(const PWSignal& f, double xi);
std::vector<cplx> sample(const PWSignal& f, const UniformGrid& grid);

/// Exact ambiguity function, summing closed-form integrals over piece overlaps.
cplx pw_ambiguity(const PWSignal& f, double x, double omega);
/// Exact V_w f(x, omega) when both f and w are piecewise-constant spectra.
cplx pw_cross_stft(const PWSignal& f, const PWSignal& w, double x, double omega);

PWSignal random_pw_signal(double B, int piece_count, bool real_on_line, std::uint64_t seed);

/// [-8/B, 8/B] with step min(1e-2, 1/(32 B)).
UniformGrid default_time_grid(double B);

struct PhaseDistance {
    double distance = 0.0;
    /// arg <f, g>; f is closest to e^{i alpha} g.
    double alpha = 0.0;
};

/// Discrete l2 distance scaled by sqrt(step) when a grid step is supplied.
PhaseDistance distance_up_to_phase(std::span<const cplx> f, std::span<const cplx> g, double step = 1.0);
PhaseDistance distance_up_to_phase(const PWSignal& f, const PWSignal& g, const UniformGrid& grid);

/// Discrete L2 norm on a grid, same scaling as distance_up_to_phase.
double grid_norm(std::span<const cplx> f, double step = 1.0);

enum class CounterexampleKind { Real, Complex };

/// Real: sinc(Bt) against its frequency-shifted twin. Complex: the two
/// narrow indicator spectra at opposite band edges, width eps.
std::pair<PWSignal, PWSignal> counterexample_pair(CounterexampleKind kind, double B,
                                                  std::optional<double> eps = std::nullopt);

/// Lattice shift used with the complex pair, 1/(2B - eps).
double counterexample_shift(double B, double eps);

struct LatticeSamples {
    double spacing = 1.0;
    double offset = 0.0;
    CenteredSequence<cplx> values;

    double time(long n) const { return offset + static_cast<double>(n) * spacing; }
};

LatticeSamples sample_lattice(const PWSignal& f, double spacing, double offset, long half_count);

}  // namespace pwphase
