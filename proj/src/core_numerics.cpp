#include "pwphase/core_numerics.hpp"

#include "pwphase/errors.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <string>

namespace pwphase {

UniformGrid::UniformGrid(double start, double step, std::size_t count)
    : start_(start), step_(step), count_(count)
{
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
        throw Error(ErrorKind::InvalidArgument, "grid step must be positive and finite");
    if (count == 0) throw Error(ErrorKind::InvalidArgument, "grid needs at least one node");
}

UniformGrid UniformGrid::covering(double lo, double hi, double step)
{
    if (!(hi >= lo)) throw Error(ErrorKind::InvalidArgument, "grid bounds reversed");
    const double n = std::floor((hi - lo) / step + 1e-9);
    return UniformGrid(lo, step, static_cast<std::size_t>(n) + 1);
}

UniformGrid UniformGrid::symmetric(double half_width, double step)
{
    const auto half = static_cast<std::size_t>(std::floor(half_width / step + 1e-9));
    return UniformGrid(-static_cast<double>(half) * step, step, 2 * half + 1);
}

std::vector<double> UniformGrid::points() const
{
    std::vector<double> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = point(i);
    return out;
}

ComplexField2D::ComplexField2D(UniformGrid x_axis, UniformGrid y_axis)
    : x_axis_(x_axis), y_axis_(y_axis), values_(x_axis.count() * y_axis.count())
{
}

double ComplexField2D::max_abs() const
{
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

void QuadratureScheme::validate() const
{
    if (!(spacing > 0.0) || !(half_width >= spacing))
        throw Error(ErrorKind::InvalidArgument, "quadrature needs spacing > 0 and half_width >= spacing");
}

std::size_t QuadratureScheme::node_count() const
{
    return 2 * static_cast<std::size_t>(std::floor(half_width / spacing + 1e-9)) + 1;
}

double sinc(double x) noexcept
{
    if (x == 0.0) return 1.0;
    return boost::math::sin_pi(x) / (kPi * x);
}

namespace {

template <unsigned N>
GaussLegendre make_rule()
{
    using rule = boost::math::quadrature::gauss<double, N>;
    const auto& xs = rule::abscissa();
    const auto& ws = rule::weights();
    GaussLegendre out;
    // boost stores the non-negative half; 0 is the first abscissa when N is odd
    for (std::size_t i = xs.size(); i-- > 0;) {
        if (xs[i] == 0.0) continue;
        out.nodes.push_back(-xs[i]);
        out.weights.push_back(ws[i]);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.nodes.push_back(xs[i]);
        out.weights.push_back(ws[i]);
    }
    return out;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order)
{
    static const GaussLegendre r8 = make_rule<8>();
    static const GaussLegendre r16 = make_rule<16>();
    static const GaussLegendre r24 = make_rule<24>();
    static const GaussLegendre r32 = make_rule<32>();
    static const GaussLegendre r48 = make_rule<48>();
    static const GaussLegendre r64 = make_rule<64>();
    switch (order) {
    case 8: return r8;
    case 16: return r16;
    case 24: return r24;
    case 32: return r32;
    case 48: return r48;
    case 64: return r64;
    default: throw Error(ErrorKind::InvalidArgument, "unsupported Gauss-Legendre order " + std::to_string(order));
    }
}

cplx integrate_gl(const std::function<cplx(double)>& fn, double a, double b, int panels, int order)
{
    const auto& rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    cplx acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            acc += rule.weights[k] * 0.5 * h * fn(mid + 0.5 * h * rule.nodes[k]);
    }
    return acc;
}

template <typename T>
static cplx wsk_sum(const CenteredSequence<T>& samples, double spacing, double t)
{
    const long half = static_cast<long>(samples.half());
    const double u = t / spacing;
    cplx acc = 0.0;
    for (long n = -half; n <= half; ++n) acc += samples[n] * sinc(u - static_cast<double>(n));
    return acc;
}

cplx wsk_interpolate(const CenteredSequence<cplx>& samples, double spacing, double t)
{
    if (samples.values.empty()) return 0.0;
    return wsk_sum(samples, spacing, t);
}

double wsk_interpolate(const CenteredSequence<double>& samples, double spacing, double t)
{
    if (samples.values.empty()) return 0.0;
    return wsk_sum(samples, spacing, t).real();
}

double wsk_tail_estimate(const CenteredSequence<cplx>& samples)
{
    const std::size_t n = samples.values.size();
    const std::size_t edge = std::max<std::size_t>(1, n / 16);
    double acc = 0.0;
    for (std::size_t i = 0; i < std::min(edge, n); ++i) {
        acc += std::norm(samples.values[i]);
        if (n - 1 - i != i) acc += std::norm(samples.values[n - 1 - i]);
    }
    return std::sqrt(acc);
}

std::vector<double> trapezoid_weights(const UniformGrid& grid)
{
    std::vector<double> w(grid.count(), grid.step());
    if (grid.count() == 1) {
        w[0] = 0.0;
        return w;
    }
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

FourierResult fourier_on_grid(const UniformGrid& nodes, std::span<const cplx> values, const UniformGrid& targets,
                              FourierDirection direction)
{
    if (values.size() != nodes.count())
        throw Error(ErrorKind::InvalidArgument, "value count does not match the node grid");
    FourierResult out;
    out.values.assign(targets.count(), 0.0);

    double peak = 0.0;
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::InvalidArgument, "non-finite input to fourier_on_grid");
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) return out;
    const double edge = std::max(std::abs(values.front()), std::abs(values.back()));
    out.truncation_warning = edge > 1e-9 * peak;

    const double sign = direction == FourierDirection::Forward ? -1.0 : 1.0;
    const auto weights = trapezoid_weights(nodes);
    for (std::size_t j = 0; j < targets.count(); ++j) {
        const double xi = targets.point(j);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < nodes.count(); ++k) {
            const double phase = sign * 2.0 * kPi * nodes.point(k) * xi;
            acc += weights[k] * values[k] * cplx(std::cos(phase), std::sin(phase));
        }
        out.values[j] = acc;
    }
    return out;
}

}  // namespace pwphase
