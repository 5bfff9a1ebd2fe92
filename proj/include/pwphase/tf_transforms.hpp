#pragma once

#include "pwphase/core_numerics.hpp"
#include "pwphase/signal_model.hpp"
#include "pwphase/windows.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

namespace pwphase {

using TimeFunction = std::function<cplx(double)>;
using AmbiguityFunction = std::function<cplx(double, double)>;

/// Time trapezoid used for the Gaussian (step 1/16, half-width 6) and
/// Hermite (step 1/16, half-width 8) windows. Compactly supported windows
/// use panelled Gauss-Legendre over their support and ignore the scheme.
QuadratureScheme default_quadrature(const WindowSpec& w);

/// V_w f(x, omega) on every grid node. PW windows are evaluated exactly in
/// the frequency domain.
ComplexField2D stft_grid(const PWSignal& f, const WindowSpec& w, const UniformGrid& x_axis,
                         const UniformGrid& omega_axis, const QuadratureScheme& quad,
                         bool* truncation_warning = nullptr);

/// Same, for an arbitrary time-domain signal. PW windows are rejected.
ComplexField2D stft_grid(const TimeFunction& f, const WindowSpec& w, const UniformGrid& x_axis,
                         const UniformGrid& omega_axis, const QuadratureScheme& quad,
                         bool* truncation_warning = nullptr);

/// A f on the grid, exact for piecewise-constant spectra.
ComplexField2D ambiguity_grid(const PWSignal& f, const UniformGrid& x_axis, const UniformGrid& omega_axis);

struct MagnitudeGrid {
    UniformGrid x_axis;
    UniformGrid omega_axis;
    std::vector<double> values;  // row per x node

    double at(std::size_t ix, std::size_t iw) const { return values[ix * omega_axis.count() + iw]; }
};

struct MagnitudeSamples {
    double B = 1.0;
    CenteredSequence<double> values;  // |V_w f(n/(4B), 0)|

    double spacing() const { return 1.0 / (4.0 * B); }
};

struct NoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// x in [-128/B, 128/B] with step 1/(8B); omega symmetric with a
/// window-dependent reach and step 1/16 (Gaussian) or 1/32.
struct MeasurementAxes {
    UniformGrid x_axis;
    UniformGrid omega_axis;
};
MeasurementAxes pipeline_axes(double B, const WindowSpec& w);

MagnitudeGrid measure_grid(const PWSignal& f, const WindowSpec& w, const UniformGrid& x_axis,
                           const UniformGrid& omega_axis, const NoiseModel& noise = {});
MagnitudeSamples measure_samples(const PWSignal& f, const WindowSpec& w, long N, const NoiseModel& noise = {});

struct RelationResult {
    double residual = 0.0;
    bool truncation_warning = false;
};

/// max |F(|V_w f|^2)(omega, -x) - A f(x, omega) conj(A w(x, omega))| over the
/// grid nodes. The transform in the STFT time variable is carried out exactly
/// in the frequency domain; the STFT frequency variable uses a trapezoid
/// whose reach depends on the window's spectral decay.
struct RelationOptions {
    /// Trapezoid step in the STFT frequency variable; default 1/32 (1/16
    /// for the rectangular window, 1/512 for PW windows).
    std::optional<double> step;
    /// Half-width of that trapezoid; default depends on the window decay.
    std::optional<double> reach;
};

RelationResult ambiguity_relation_residual(const PWSignal& f, const WindowSpec& w, const UniformGrid& x_axis,
                                           const UniformGrid& omega_axis, const RelationOptions& opts = {});

/// F(|V_w f|^2)(omega, -x) at each x, the left side of the relation above.
std::vector<cplx> relation_lhs(const PWSignal& f, const WindowSpec& w, double omega, std::span<const double> xs,
                               const RelationOptions& opts = {}, bool* truncation_warning = nullptr);

/// max |A f| over probes; every probe frequency must satisfy |omega| >= 2B.
/// Throws BadProbe otherwise.
double band_support_residual(const PWSignal& f, std::span<const double> omega_probe,
                             std::span<const double> x_probe);
double band_support_residual(const AmbiguityFunction& amb, double B, std::span<const double> omega_probe,
                             std::span<const double> x_probe);

}  // namespace pwphase
