#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pwphase {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform axis: point(i) = start + i * step for 0 <= i < count.
class UniformGrid {
public:
    UniformGrid(double start, double step, std::size_t count);

    /// Grid with the given step covering [lo, hi]; hi is included when it
    /// lies on the lattice up to rounding.
    static UniformGrid covering(double lo, double hi, double step);

    /// Odd-count grid symmetric about 0: [-half_width, half_width].
    static UniformGrid symmetric(double half_width, double step);

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    std::size_t count() const noexcept { return count_; }
    double point(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
    double last() const noexcept { return point(count_ - 1); }
    std::vector<double> points() const;

    bool operator==(const UniformGrid&) const = default;

private:
    double start_;
    double step_;
    std::size_t count_;
};

/// Complex values on a rectangular grid, row per x node, column per y node.
class ComplexField2D {
public:
    ComplexField2D(UniformGrid x_axis, UniformGrid y_axis);

    const UniformGrid& x_axis() const noexcept { return x_axis_; }
    const UniformGrid& y_axis() const noexcept { return y_axis_; }
    cplx& at(std::size_t ix, std::size_t iy) { return values_[ix * y_axis_.count() + iy]; }
    const cplx& at(std::size_t ix, std::size_t iy) const { return values_[ix * y_axis_.count() + iy]; }
    std::span<cplx> row(std::size_t ix) { return {values_.data() + ix * y_axis_.count(), y_axis_.count()}; }
    std::span<const cplx> row(std::size_t ix) const
    {
        return {values_.data() + ix * y_axis_.count(), y_axis_.count()};
    }
    std::span<const cplx> values() const noexcept { return values_; }
    double max_abs() const;

private:
    UniformGrid x_axis_;
    UniformGrid y_axis_;
    std::vector<cplx> values_;
};

/// Composite trapezoid on [-half_width, half_width] (shifted by the caller).
struct QuadratureScheme {
    double spacing = 1e-3;
    double half_width = 6.0;

    /// Throws InvalidArgument unless spacing > 0 and half_width >= spacing.
    void validate() const;
    /// Odd node count, so the centre is always a node.
    std::size_t node_count() const;
};

/// Normalized sinc, sin(pi x) / (pi x) with sinc(0) = 1.
double sinc(double x) noexcept;

/// Fixed-order Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Supported orders: 8, 16, 24, 32, 48, 64.
const GaussLegendre& gauss_legendre(int order);

/// Integrates fn over [a, b] with `panels` equal Gauss-Legendre panels.
cplx integrate_gl(const std::function<cplx(double)>& fn, double a, double b, int panels, int order = 16);

/// Samples indexed n = -N..N; values[n + N].
template <typename T>
struct CenteredSequence {
    std::vector<T> values;

    std::size_t half() const noexcept { return values.empty() ? 0 : (values.size() - 1) / 2; }
    const T& operator[](long n) const { return values[static_cast<std::size_t>(n + static_cast<long>(half()))]; }
    T& operator[](long n) { return values[static_cast<std::size_t>(n + static_cast<long>(half()))]; }
};

/// Sum_{n=-N}^{N} samples[n] sinc(t / spacing - n).
cplx wsk_interpolate(const CenteredSequence<cplx>& samples, double spacing, double t);
double wsk_interpolate(const CenteredSequence<double>& samples, double spacing, double t);

/// l2 norm of the samples in the outer eighth of the index range, a rough
/// indicator of how much the truncated series is missing.
double wsk_tail_estimate(const CenteredSequence<cplx>& samples);

enum class FourierDirection { Forward, Inverse };

struct FourierResult {
    std::vector<cplx> values;
    /// Endpoint magnitude exceeded 1e-9 of the peak: support not captured.
    bool truncation_warning = false;
};

/// Trapezoid approximation of the continuous transform
/// F g(xi) = integral g(t) e^{-2 pi i t xi} dt (inverse: e^{+2 pi i t xi}),
/// evaluated at every target. Summation runs left to right over the nodes.
FourierResult fourier_on_grid(const UniformGrid& nodes, std::span<const cplx> values, const UniformGrid& targets,
                              FourierDirection direction = FourierDirection::Forward);

/// Trapezoid weights for a grid (half weight at both ends).
std::vector<double> trapezoid_weights(const UniformGrid& grid);

}  // namespace pwphase
