#include "pwphase/windows.hpp"

#include "pwphase/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pwphase {

WindowSpec WindowSpec::gaussian() { return WindowSpec(WindowFamily::Gaussian); }

WindowSpec WindowSpec::hermite(int n)
{
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "Hermite index must be non-negative");
    if (n > kHermiteMaxIndex) throw Error(ErrorKind::IndexTooLarge, "Hermite index above 20");
    return WindowSpec(WindowFamily::Hermite, n);
}

WindowSpec WindowSpec::rectangular() { return WindowSpec(WindowFamily::Rectangular); }

WindowSpec WindowSpec::hanning() { return WindowSpec(WindowFamily::Hanning); }

WindowSpec WindowSpec::from_signal(PWSignal signal)
{
    WindowSpec w(WindowFamily::FromSignal);
    w.signal_ = std::move(signal);
    return w;
}

bool WindowSpec::is_real() const
{
    return family_ != WindowFamily::FromSignal || signal_->real_on_line();
}

std::string WindowSpec::family_name() const
{
    switch (family_) {
    case WindowFamily::Gaussian: return "gaussian";
    case WindowFamily::Hermite: return "hermite";
    case WindowFamily::Rectangular: return "rect";
    case WindowFamily::Hanning: return "hanning";
    case WindowFamily::FromSignal: return "pw";
    }
    return "unknown";
}

double laguerre_eval(int k, int j, double t)
{
    if (k < 0 || j < 0) throw Error(ErrorKind::InvalidArgument, "Laguerre indices must be non-negative");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = 1.0 + j - t;
    for (int m = 1; m < k; ++m) {
        const double next = ((2.0 * m + 1.0 + j - t) * cur - (m + j) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_eval(int n, double t)
{
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "Hermite index must be non-negative");
    if (n > kHermiteMaxIndex) throw Error(ErrorKind::IndexTooLarge, "Hermite index above 20");
    // orthonormal Hermite functions in s = sqrt(2 pi) t, rescaled to unit L2 norm in t
    const double s = std::sqrt(2.0 * kPi) * t;
    double prev = 0.0;
    double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * s * s);
    for (int m = 0; m < n; ++m) {
        const double next = std::sqrt(2.0 / (m + 1.0)) * s * cur - std::sqrt(m / (m + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return std::pow(2.0 * kPi, 0.25) * cur;
}

namespace {

cplx minus_i_power(int n)
{
    switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

// e^{pi i x w} * integral over [lo, hi] of w(t) w(t - x) e^{-2 pi i t omega} for a real window
template <typename Fn>
cplx compact_ambiguity(Fn window, double lo, double hi, double x, double omega)
{
    if (!(hi > lo)) return 0.0;
    const int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) * (std::abs(omega) + 2.0))));
    const cplx v = integrate_gl(
        [&](double t) { return window(t) * window(t - x) * expi(-2.0 * kPi * t * omega); }, lo, hi, panels, 16);
    return expi(kPi * x * omega) * v;
}

double hanning_value(double t)
{
    if (std::abs(t) > kPi / 2) return 0.0;
    const double c = std::cos(t);
    return c * c;
}

}  // namespace

cplx window_eval(const WindowSpec& w, double t)
{
    switch (w.family()) {
    case WindowFamily::Gaussian: return std::exp(-kPi * t * t);
    case WindowFamily::Hermite: return hermite_eval(w.index(), t);
    case WindowFamily::Rectangular: return std::abs(t) <= 1.0 ? 1.0 : 0.0;
    case WindowFamily::Hanning: return hanning_value(t);
    case WindowFamily::FromSignal: return eval_time(*w.signal(), t);
    }
    return 0.0;
}

cplx window_ft(const WindowSpec& w, double xi)
{
    switch (w.family()) {
    case WindowFamily::Gaussian: return std::exp(-kPi * xi * xi);
    case WindowFamily::Hermite: return minus_i_power(w.index()) * hermite_eval(w.index(), xi);
    case WindowFamily::Rectangular: return 2.0 * sinc(2.0 * xi);
    case WindowFamily::Hanning: {
        const double u = kPi * xi;
        return kPi / 2 * sinc(u) + kPi / 4 * (sinc(u - 1.0) + sinc(u + 1.0));
    }
    case WindowFamily::FromSignal: return eval_spectrum(*w.signal(), xi);
    }
    return 0.0;
}

cplx window_ambiguity(const WindowSpec& w, double x, double omega)
{
    const double r2 = x * x + omega * omega;
    switch (w.family()) {
    case WindowFamily::Gaussian: return std::exp(-kPi / 2 * r2) / std::sqrt(2.0);
    case WindowFamily::Hermite: return std::exp(-kPi / 2 * r2) * laguerre_eval(w.index(), 0, kPi * r2);
    case WindowFamily::FromSignal: return pw_ambiguity(*w.signal(), x, omega);
    default: return window_ambiguity_quadrature(w, x, omega);
    }
}

cplx window_ambiguity_quadrature(const WindowSpec& w, double x, double omega)
{
    switch (w.family()) {
    case WindowFamily::Gaussian:
    case WindowFamily::Hermite: {
        // trapezoid about the overlap centre x/2; the integrand is smooth and decays like e^{-pi t^2}
        const double h = 1.0 / 32.0;
        const int half = 8 * 32;
        cplx acc = 0.0;
        for (int k = -half; k <= half; ++k) {
            const double t = x / 2 + k * h;
            const double wt = (k == -half || k == half) ? 0.5 * h : h;
            acc += wt * window_eval(w, t).real() * window_eval(w, t - x).real() * expi(-2.0 * kPi * t * omega);
        }
        return expi(kPi * x * omega) * acc;
    }
    case WindowFamily::Rectangular:
        return compact_ambiguity([](double t) { return std::abs(t) <= 1.0 ? 1.0 : 0.0; }, std::max(-1.0, x - 1.0),
                                 std::min(1.0, x + 1.0), x, omega);
    case WindowFamily::Hanning:
        return compact_ambiguity(hanning_value, std::max(-kPi / 2, x - kPi / 2), std::min(kPi / 2, x + kPi / 2), x,
                                 omega);
    case WindowFamily::FromSignal: return pw_ambiguity(*w.signal(), x, omega);
    }
    return 0.0;
}

AmbiguitySlice ambiguity_slice(const WindowSpec& w, double x0, const UniformGrid& axis)
{
    AmbiguitySlice s{axis, x0, std::vector<cplx>(axis.count()), 0.0};
    double m = INFINITY;
    for (std::size_t i = 0; i < axis.count(); ++i) {
        s.values[i] = window_ambiguity(w, x0, axis.point(i));
        m = std::min(m, std::abs(s.values[i]));
    }
    s.min_modulus = m;
    return s;
}

}  // namespace pwphase
