#include "pwphase/tf_transforms.hpp"

#include "pwphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <gsl/gsl_sf_expint.h>
#include <random>
#include <set>

namespace pwphase {

namespace {

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

// acc[j] += g * e^{-2 pi i t omega_j} over a uniform omega axis, by phase recurrence
void accumulate_chirp(std::vector<cplx>& acc, cplx g, double t, const UniformGrid& omega)
{
    cplx p = g * expi(-2.0 * kPi * t * omega.start());
    const cplx step = expi(-2.0 * kPi * t * omega.step());
    for (auto& a : acc) {
        a += p;
        p *= step;
    }
}

double window_reach(const WindowSpec& w)
{
    switch (w.family()) {
    case WindowFamily::Rectangular: return 1.0;
    case WindowFamily::Hanning: return kPi / 2;
    default: return 0.0;
    }
}

void fill_row(const TimeFunction& f, const WindowSpec& w, double x, const UniformGrid& omega_axis,
              const QuadratureScheme& quad, std::span<cplx> row)
{
    std::vector<cplx> acc(omega_axis.count(), 0.0);
    const double reach = window_reach(w);
    if (reach > 0.0) {
        const double max_omega = std::max(std::abs(omega_axis.start()), std::abs(omega_axis.last()));
        const double lo = x - reach;
        const double hi = x + reach;
        const int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) * (max_omega + 4.0))));
        const auto& rule = gauss_legendre(16);
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * h;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double t = mid + 0.5 * h * rule.nodes[k];
                const cplx g = 0.5 * h * rule.weights[k] * f(t) * std::conj(window_eval(w, t - x));
                accumulate_chirp(acc, g, t, omega_axis);
            }
        }
    } else {
        const long half = static_cast<long>(quad.node_count() / 2);
        for (long k = -half; k <= half; ++k) {
            const double s = static_cast<double>(k) * quad.spacing;
            const double wt = (k == -half || k == half) ? 0.5 * quad.spacing : quad.spacing;
            const double t = x + s;
            accumulate_chirp(acc, wt * f(t) * std::conj(window_eval(w, s)), t, omega_axis);
        }
    }
    std::copy(acc.begin(), acc.end(), row.begin());
}

bool window_truncated(const WindowSpec& w, const QuadratureScheme& quad)
{
    if (window_reach(w) > 0.0 || w.family() == WindowFamily::FromSignal) return false;
    const double edge = std::abs(window_eval(w, quad.half_width));
    double peak = 0.0;
    for (double t = 0.0; t <= quad.half_width; t += quad.spacing) peak = std::max(peak, std::abs(window_eval(w, t)));
    return edge > 1e-9 * peak;
}

}  // namespace

QuadratureScheme default_quadrature(const WindowSpec& w)
{
    if (w.family() == WindowFamily::Hermite) return {1.0 / 16.0, 8.0};
    return {1.0 / 16.0, 6.0};
}

ComplexField2D stft_grid(const TimeFunction& f, const WindowSpec& w, const UniformGrid& x_axis,
                         const UniformGrid& omega_axis, const QuadratureScheme& quad, bool* truncation_warning)
{
    if (w.family() == WindowFamily::FromSignal)
        throw Error(ErrorKind::InvalidArgument, "PW windows need a PW signal");
    quad.validate();
    ComplexField2D out(x_axis, omega_axis);
    for (std::size_t ix = 0; ix < x_axis.count(); ++ix) fill_row(f, w, x_axis.point(ix), omega_axis, quad, out.row(ix));
    if (truncation_warning) *truncation_warning = window_truncated(w, quad);
    return out;
}

ComplexField2D stft_grid(const PWSignal& f, const WindowSpec& w, const UniformGrid& x_axis,
                         const UniformGrid& omega_axis, const QuadratureScheme& quad, bool* truncation_warning)
{
    if (w.family() == WindowFamily::FromSignal) {
        ComplexField2D out(x_axis, omega_axis);
        for (std::size_t ix = 0; ix < x_axis.count(); ++ix)
            for (std::size_t iw = 0; iw < omega_axis.count(); ++iw)
                out.at(ix, iw) = pw_cross_stft(f, *w.signal(), x_axis.point(ix), omega_axis.point(iw));
        if (truncation_warning) *truncation_warning = false;
        return out;
    }
    return stft_grid([&f](double t) { return eval_time(f, t); }, w, x_axis, omega_axis, quad, truncation_warning);
}

ComplexField2D ambiguity_grid(const PWSignal& f, const UniformGrid& x_axis, const UniformGrid& omega_axis)
{
    ComplexField2D out(x_axis, omega_axis);
    for (std::size_t ix = 0; ix < x_axis.count(); ++ix)
        for (std::size_t iw = 0; iw < omega_axis.count(); ++iw)
            out.at(ix, iw) = pw_ambiguity(f, x_axis.point(ix), omega_axis.point(iw));
    return out;
}

MeasurementAxes pipeline_axes(double B, const WindowSpec& w)
{
    double reach = B + 4.0;
    double step = 1.0 / 16.0;
    switch (w.family()) {
    case WindowFamily::Gaussian: break;
    case WindowFamily::Hermite: reach = B + 8.0; step = 1.0 / 32.0; break;
    case WindowFamily::FromSignal: reach = 2.0 * B; step = 1.0 / 32.0; break;
    default: reach = B + 32.0; step = 1.0 / 32.0; break;
    }
    return {UniformGrid::symmetric(128.0 / B, 1.0 / (8.0 * B)), UniformGrid::symmetric(reach, step)};
}

namespace {

double noisy(double v, const NoiseModel& noise, std::mt19937_64& rng, std::normal_distribution<double>& normal)
{
    if (noise.sigma <= 0.0) return v;
    return std::max(0.0, v + noise.sigma * normal(rng));
}

}  // namespace

MagnitudeGrid measure_grid(const PWSignal& f, const WindowSpec& w, const UniformGrid& x_axis,
                           const UniformGrid& omega_axis, const NoiseModel& noise)
{
    if (noise.sigma < 0.0) throw Error(ErrorKind::InvalidArgument, "noise sigma must be non-negative");
    const auto v = stft_grid(f, w, x_axis, omega_axis, default_quadrature(w));
    MagnitudeGrid m{x_axis, omega_axis, std::vector<double>(v.values().size())};
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = noisy(std::abs(v.values()[i]), noise, rng, normal);
    return m;
}

MagnitudeSamples measure_samples(const PWSignal& f, const WindowSpec& w, long N, const NoiseModel& noise)
{
    if (N < 0) throw Error(ErrorKind::InvalidArgument, "sample half-count must be non-negative");
    if (noise.sigma < 0.0) throw Error(ErrorKind::InvalidArgument, "noise sigma must be non-negative");
    const double B = f.band();
    const UniformGrid xs(-static_cast<double>(N) / (4.0 * B), 1.0 / (4.0 * B), static_cast<std::size_t>(2 * N + 1));
    const UniformGrid zero(0.0, 1.0, 1);
    const auto v = stft_grid(f, w, xs, zero, default_quadrature(w));
    MagnitudeSamples s;
    s.B = B;
    s.values.values.resize(xs.count());
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < xs.count(); ++i) s.values.values[i] = noisy(std::abs(v.at(i, 0)), noise, rng, normal);
    return s;
}

namespace {

// K(eta) = F(eta + a) conj(F(eta)) is piecewise constant; Gauss-Legendre nodes on
// each piece, weights already multiplied by K.
struct WeightedNodes {
    std::vector<double> eta;
    std::vector<cplx> weight;
};

WeightedNodes autocorrelation_nodes(const PWSignal& f, double a)
{
    std::set<double> br;
    for (const auto& p : f.pieces()) {
        br.insert(p.a);
        br.insert(p.b);
        br.insert(p.a - a);
        br.insert(p.b - a);
    }
    WeightedNodes out;
    const auto& rule = gauss_legendre(24);
    for (auto it = br.begin(); it != br.end() && std::next(it) != br.end(); ++it) {
        const double l = *it;
        const double u = *std::next(it);
        if (!(u > l)) continue;
        const double mid = 0.5 * (l + u);
        const cplx k = eval_spectrum(f, mid + a) * std::conj(eval_spectrum(f, mid));
        if (k == 0.0) continue;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            out.eta.push_back(mid + 0.5 * (u - l) * rule.nodes[i]);
            out.weight.push_back(0.5 * (u - l) * rule.weights[i] * k);
        }
    }
    return out;
}

// integral over |w'| > W of e^{2 pi i w' x} / w'^2 style tails for the rectangular window
double tail_kernel(double k, double W)
{
    k = std::abs(k);
    if (k == 0.0) return 2.0 / W;
    return 2.0 * (std::cos(k * W) / W - k * (kPi / 2 - gsl_sf_Si(k * W)));
}

struct RelationGrid {
    double reach;
    double step;
};

RelationGrid relation_grid(const WindowSpec& w, double B, double a)
{
    switch (w.family()) {
    case WindowFamily::Gaussian:
    case WindowFamily::Hermite: return {2.0 * B + std::abs(a) + 8.0, 1.0 / 32.0};
    case WindowFamily::Hanning: return {64.0, 1.0 / 32.0};
    case WindowFamily::Rectangular: return {256.0, 1.0 / 16.0};
    case WindowFamily::FromSignal: return {2.0 * B + std::abs(a) + 1.0, 1.0 / 512.0};
    }
    return {64.0, 1.0 / 32.0};
}

}  // namespace

std::vector<cplx> relation_lhs(const PWSignal& f, const WindowSpec& w, double a, std::span<const double> xs,
                               const RelationOptions& opts, bool* truncation_warning)
{
    const double B = std::max(f.band(), w.signal() ? w.signal()->band() : 0.0);
    const auto kn = autocorrelation_nodes(f, a);
    auto g = relation_grid(w, B, a);
    if (opts.step) g.step = *opts.step;
    if (opts.reach) g.reach = *opts.reach;
    if (!(g.step > 0.0) || !(g.reach > g.step)) throw Error(ErrorKind::InvalidArgument, "bad relation grid");
    const UniformGrid wp = UniformGrid::symmetric(g.reach, g.step);
    const auto tw = trapezoid_weights(wp);

    // R(w') = integral of K(eta) conj(Fw(eta + a - w')) Fw(eta - w')
    std::vector<cplx> R(wp.count(), 0.0);
    for (std::size_t j = 0; j < wp.count(); ++j) {
        const double s = wp.point(j);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < kn.eta.size(); ++k)
            acc += kn.weight[k] * std::conj(window_ft(w, kn.eta[k] + a - s)) * window_ft(w, kn.eta[k] - s);
        R[j] = acc;
    }
    double peak = 0.0;
    for (const auto& r : R) peak = std::max(peak, std::abs(r));
    const double edge = std::max(std::abs(R.front()), std::abs(R.back()));

    // the rectangular window's |Fw|^2 ~ 1/w'^2 tail is added analytically
    const bool rect = w.family() == WindowFamily::Rectangular;
    cplx c0 = 0.0;
    cplx cp = 0.0;
    cplx cm = 0.0;
    if (rect) {
        cplx sum = 0.0;
        for (std::size_t k = 0; k < kn.eta.size(); ++k) {
            sum += kn.weight[k];
            cp += kn.weight[k] * expi(4.0 * kPi * kn.eta[k]);
            cm += kn.weight[k] * expi(-4.0 * kPi * kn.eta[k]);
        }
        c0 = std::cos(2.0 * kPi * a) * sum;
        cp *= 0.5 * expi(2.0 * kPi * a);
        cm *= 0.5 * expi(-2.0 * kPi * a);
    }
    if (truncation_warning) *truncation_warning = !rect && edge > 1e-9 * peak;

    std::vector<cplx> out(xs.size());
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const double x = xs[ix];
        cplx lhs = 0.0;
        cplx p = expi(2.0 * kPi * wp.start() * x);
        const cplx step = expi(2.0 * kPi * wp.step() * x);
        for (std::size_t j = 0; j < wp.count(); ++j) {
            lhs += tw[j] * R[j] * p;
            p *= step;
        }
        if (rect) {
            const double W = wp.last();
            lhs += (c0 * tail_kernel(2.0 * kPi * x, W) - cp * tail_kernel(2.0 * kPi * x - 4.0 * kPi, W) -
                    cm * tail_kernel(2.0 * kPi * x + 4.0 * kPi, W)) /
                   (2.0 * kPi * kPi);
        }
        out[ix] = lhs;
    }
    return out;
}

RelationResult ambiguity_relation_residual(const PWSignal& f, const WindowSpec& w, const UniformGrid& x_axis,
                                           const UniformGrid& omega_axis, const RelationOptions& opts)
{
    RelationResult out;
    const auto xs = x_axis.points();
    for (std::size_t ia = 0; ia < omega_axis.count(); ++ia) {
        const double a = omega_axis.point(ia);
        bool warn = false;
        const auto lhs = relation_lhs(f, w, a, xs, opts, &warn);
        out.truncation_warning = out.truncation_warning || warn;
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const cplx rhs = pw_ambiguity(f, xs[ix], a) * std::conj(window_ambiguity(w, xs[ix], a));
            out.residual = std::max(out.residual, std::abs(lhs[ix] - rhs));
        }
    }
    return out;
}

double band_support_residual(const AmbiguityFunction& amb, double B, std::span<const double> omega_probe,
                             std::span<const double> x_probe)
{
    for (double om : omega_probe)
        if (!(std::abs(om) >= 2.0 * B * (1.0 - 1e-12)))
            throw Error(ErrorKind::BadProbe, "probe frequency inside (-2B, 2B)");
    double m = 0.0;
    for (double om : omega_probe)
        for (double x : x_probe) m = std::max(m, std::abs(amb(x, om)));
    return m;
}

double band_support_residual(const PWSignal& f, std::span<const double> omega_probe, std::span<const double> x_probe)
{
    return band_support_residual([&f](double x, double om) { return pw_ambiguity(f, x, om); }, f.band(), omega_probe,
                                 x_probe);
}

}  // namespace pwphase
