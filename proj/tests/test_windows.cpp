#include "doctest.h"

#include "pwphase/core_numerics.hpp"
#include "pwphase/errors.hpp"
#include "pwphase/windows.hpp"

#include <cmath>

using namespace pwphase;

namespace {

double sinc_ref(double x)
{
    return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
}

// explicit sum for the generalized Laguerre polynomial
long double laguerre_sum(int k, int j, long double t)
{
    long double s = 0.0L;
    for (int m = 0; m <= k; ++m) {
        long double binom = 1.0L;  // C(k+j, k-m)
        for (int i = 1; i <= k - m; ++i) binom = binom * (j + m + i) / i;
        long double term = binom;
        for (int i = 1; i <= m; ++i) term *= -t / i;
        s += term;
    }
    return s;
}

// A w(x, w) = e^{pi i x w} int w(t) conj(w(t - x)) e^{-2 pi i t w} dt, by midpoint sum
cplx ambiguity_oracle(const WindowSpec& w, double x, double omega, double lo, double hi, int n)
{
    const double h = (hi - lo) / n;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = lo + (k + 0.5) * h;
        acc += window_eval(w, t) * std::conj(window_eval(w, t - x)) * std::exp(cplx(0.0, -2.0 * kPi * t * omega));
    }
    return acc * h * std::exp(cplx(0.0, kPi * x * omega));
}

double hermite_integral(int m, int n)
{
    const UniformGrid t = UniformGrid::symmetric(8.0, 1e-3);
    double s = 0.0;
    for (std::size_t i = 0; i < t.count(); ++i) s += hermite_eval(m, t.point(i)) * hermite_eval(n, t.point(i));
    return s * t.step();
}

}  // namespace

TEST_CASE("laguerre polynomials")
{
    CHECK(laguerre_eval(0, 0, 3.7) == 1.0);
    CHECK(laguerre_eval(1, 0, 2.0) == doctest::Approx(-1.0));
    CHECK(laguerre_eval(2, 0, 1.0) == doctest::Approx(-0.5));
    for (int k = 0; k <= 20; ++k) {
        for (int j = 0; j <= 3; ++j) {
            // L_k^(j)(0) = C(k+j, k)
            CHECK(laguerre_eval(k, j, 0.0) == doctest::Approx(static_cast<double>(laguerre_sum(k, j, 0.0L))));
            for (double t : {0.3, 1.0, 2.5, 4.0}) {
                const long double ref = laguerre_sum(k, j, t);
                CHECK(std::abs(laguerre_eval(k, j, t) - static_cast<double>(ref)) <=
                      1e-12 * std::max(1.0L, std::abs(ref)));
            }
        }
    }
    CHECK_THROWS_AS(laguerre_eval(-1, 0, 1.0), Error);
}

TEST_CASE("hermite functions")
{
    CHECK(hermite_eval(0, 0.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(std::abs(hermite_eval(1, 0.0)) < 1e-15);
    CHECK_THROWS_AS(hermite_eval(21, 0.0), Error);
    CHECK_THROWS_AS(WindowSpec::hermite(21), Error);
    CHECK_THROWS_AS(WindowSpec::hermite(-1), Error);
    CHECK_NOTHROW(WindowSpec::hermite(20));

    for (int n = 0; n <= 10; ++n) CHECK(std::abs(hermite_integral(n, n) - 1.0) <= 1e-8);
    for (int m = 0; m <= 6; ++m)
        for (int n = 0; n < m; ++n) CHECK(std::abs(hermite_integral(m, n)) <= 1e-7);
    // parity
    for (int n = 0; n <= 6; ++n)
        CHECK(hermite_eval(n, -0.7) == doctest::Approx((n % 2 ? -1.0 : 1.0) * hermite_eval(n, 0.7)));
}

TEST_CASE("hermite functions are Fourier eigenfunctions")
{
    const UniformGrid t = UniformGrid::symmetric(8.0, 1e-3);
    const UniformGrid xi = UniformGrid::symmetric(3.0, 0.125);
    for (int n = 0; n <= 5; ++n) {
        const auto w = WindowSpec::hermite(n);
        std::vector<cplx> v(t.count());
        for (std::size_t i = 0; i < t.count(); ++i) v[i] = window_eval(w, t.point(i));
        const auto F = fourier_on_grid(t, v, xi);
        double err = 0.0;
        for (std::size_t k = 0; k < xi.count(); ++k) {
            err = std::max(err, std::abs(F.values[k] - window_ft(w, xi.point(k))));
            // (-i)^n h_n written independently
            const cplx ref = std::pow(cplx(0.0, -1.0), n) * hermite_eval(n, xi.point(k));
            err = std::max(err, std::abs(window_ft(w, xi.point(k)) - ref));
        }
        CHECK(err <= 1e-6);
    }
}

TEST_CASE("window evaluation")
{
    const auto g = WindowSpec::gaussian();
    CHECK(window_eval(g, 0.0) == cplx(1.0));
    CHECK(std::abs(window_eval(g, 1.0) - std::exp(-kPi)) < 1e-16);
    const auto r = WindowSpec::rectangular();
    CHECK(window_eval(r, 1.0) == cplx(1.0));
    CHECK(window_eval(r, -1.0) == cplx(1.0));
    CHECK(window_eval(r, 1.0000001) == cplx(0.0));
    const auto h = WindowSpec::hanning();
    CHECK(std::abs(window_eval(h, kPi / 2)) < 1e-30);
    CHECK(window_eval(h, 0.0) == cplx(1.0));
    CHECK(window_eval(h, 2.0) == cplx(0.0));
    CHECK(g.is_real());
    CHECK(h.is_real());
    CHECK(WindowSpec::hermite(3).is_real());
    CHECK(g.family_name() == "gaussian");
    CHECK(r.family_name() == "rect");
}

TEST_CASE("window Fourier transforms")
{
    CHECK(std::abs(window_ft(WindowSpec::gaussian(), 0.5) - std::exp(-kPi / 4)) < 1e-15);
    CHECK(std::abs(window_ft(WindowSpec::rectangular(), 0.0) - 2.0) < 1e-15);
    CHECK(std::abs(window_ft(WindowSpec::rectangular(), 0.3) - 2.0 * sinc_ref(0.6)) < 1e-14);
    CHECK(std::abs(window_ft(WindowSpec::hanning(), 0.0) - kPi / 2) < 1e-6);

    // hanning against a direct numerical transform
    const auto h = WindowSpec::hanning();
    const UniformGrid t = UniformGrid::symmetric(kPi / 2, 1e-4);
    std::vector<cplx> v(t.count());
    for (std::size_t i = 0; i < t.count(); ++i) v[i] = window_eval(h, t.point(i));
    const UniformGrid xi = UniformGrid::symmetric(4.0, 0.1);
    const auto F = fourier_on_grid(t, v, xi);
    double err = 0.0;
    for (std::size_t k = 0; k < xi.count(); ++k) err = std::max(err, std::abs(F.values[k] - window_ft(h, xi.point(k))));
    CHECK(err <= 1e-6);
}

TEST_CASE("ambiguity of the gaussian and hermite windows")
{
    CHECK(std::abs(window_ambiguity(WindowSpec::gaussian(), 0.0, 0.0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    for (int n = 0; n <= 10; ++n) CHECK(std::abs(window_ambiguity(WindowSpec::hermite(n), 0.0, 0.0) - 1.0) < 1e-12);

    const double r = 1.0 / std::sqrt(kPi);
    const auto h1 = WindowSpec::hermite(1);
    for (double th = 0.0; th < 2.0 * kPi; th += 0.3)
        CHECK(std::abs(window_ambiguity(h1, r * std::cos(th), r * std::sin(th))) <= 1e-10);

    for (int n = 0; n <= 5; ++n) {
        const auto w = n == 0 ? WindowSpec::gaussian() : WindowSpec::hermite(n);
        double err = 0.0;
        double asym = 0.0;
        for (double x = -2.0; x <= 2.0; x += 0.5) {
            for (double om = -2.0; om <= 2.0; om += 0.5) {
                const cplx a = window_ambiguity(w, x, om);
                err = std::max(err, std::abs(a - window_ambiguity_quadrature(w, x, om)));
                asym = std::max(asym, std::abs(a - std::conj(window_ambiguity(w, -x, -om))));
            }
        }
        CHECK(err <= 1e-6);
        CHECK(asym <= 1e-12);
    }

    // radial: gaussian closed form
    for (double x : {0.0, 0.4, 1.3})
        for (double om : {-0.7, 0.0, 0.9}) {
            const double ref = std::exp(-kPi * (x * x + om * om) / 2) / std::sqrt(2.0);
            CHECK(std::abs(window_ambiguity(WindowSpec::gaussian(), x, om) - ref) < 1e-14);
        }
}

TEST_CASE("rectangular window ambiguity")
{
    // overlap of two unit boxes has length 2 - |x| centred at x/2
    const auto w = WindowSpec::rectangular();
    CHECK(std::abs(window_ambiguity(w, 0.0, 0.0) - 2.0) < 1e-12);
    double err = 0.0;
    for (double x = -2.5; x <= 2.5; x += 0.25) {
        for (double om = -3.0; om <= 3.0; om += 0.3) {
            const double L = std::max(0.0, 2.0 - std::abs(x));
            const double ref = L * sinc_ref(om * L);
            err = std::max(err, std::abs(window_ambiguity(w, x, om) - ref));
            err = std::max(err, std::abs(window_ambiguity_quadrature(w, x, om) - ref));
        }
    }
    CHECK(err <= 1e-10);
}

TEST_CASE("hanning window ambiguity")
{
    const auto w = WindowSpec::hanning();
    // energy: int cos^4 over [-pi/2, pi/2] = 3 pi / 8
    CHECK(std::abs(window_ambiguity(w, 0.0, 0.0) - 3.0 * kPi / 8.0) < 1e-10);
    double err = 0.0;
    double asym = 0.0;
    for (double x : {-2.0, -0.6, 0.0, 0.3, 1.5})
        for (double om : {-1.5, -0.2, 0.0, 0.8}) {
            const cplx a = window_ambiguity(w, x, om);
            err = std::max(err, std::abs(a - ambiguity_oracle(w, x, om, -kPi / 2, kPi / 2, 40000)));
            asym = std::max(asym, std::abs(a - std::conj(window_ambiguity(w, -x, -om))));
        }
    CHECK(err <= 1e-6);
    CHECK(asym <= 1e-10);
}

TEST_CASE("pw window ambiguity")
{
    PWSignal s(1.0, {{-0.5, 0.25, cplx(1.0, 0.5)}, {0.25, 0.75, cplx(-0.2, 0.3)}});
    const auto w = WindowSpec::from_signal(s);
    CHECK_FALSE(w.is_real());
    CHECK(std::abs(window_ambiguity(w, 0.0, 0.0) - s.energy()) < 1e-12);
    CHECK(window_ft(w, 0.5) == cplx(-0.2, 0.3));
}

TEST_CASE("ambiguity slices")
{
    const UniformGrid axis = UniformGrid::symmetric(2.0, 1.0 / 64.0);
    const auto g = ambiguity_slice(WindowSpec::gaussian(), 0.0, axis);
    CHECK(g.values.size() == axis.count());
    CHECK(std::abs(g.min_modulus - std::exp(-2.0 * kPi) / std::sqrt(2.0)) < 1e-14);

    // step chosen so that the grid hits the zero ring of H_1 at +-1/sqrt(pi)
    const UniformGrid ring_axis = UniformGrid::symmetric(2.0, 1.0 / std::sqrt(kPi) / 64.0);
    const auto h = ambiguity_slice(WindowSpec::hermite(1), 0.0, ring_axis);
    CHECK(h.min_modulus <= 1e-10);

    const auto one = ambiguity_slice(WindowSpec::gaussian(), 0.5, UniformGrid(0.0, 1.0, 1));
    CHECK(one.values.size() == 1);
    CHECK(std::abs(one.values[0] - std::exp(-kPi / 8) / std::sqrt(2.0)) < 1e-15);
}
