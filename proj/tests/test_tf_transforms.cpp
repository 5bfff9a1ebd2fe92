#include "doctest.h"

#include "pwphase/errors.hpp"
#include "pwphase/tf_transforms.hpp"

#include <cmath>

using namespace pwphase;

namespace {

double gauss(double t)
{
    return std::exp(-kPi * t * t);
}

}  // namespace

TEST_CASE("stft of the gaussian against itself")
{
    const UniformGrid ax = UniformGrid::symmetric(2.0, 0.25);
    const auto w = WindowSpec::gaussian();
    const auto V = stft_grid([](double t) { return cplx(gauss(t)); }, w, ax, ax, default_quadrature(w));
    double err = 0.0;
    for (std::size_t i = 0; i < ax.count(); ++i)
        for (std::size_t j = 0; j < ax.count(); ++j) {
            const double x = ax.point(i), om = ax.point(j);
            err = std::max(err, std::abs(std::abs(V.at(i, j)) - gauss(std::sqrt((x * x + om * om) / 2)) / std::sqrt(2.0)));
        }
    CHECK(err <= 1e-6);
}

TEST_CASE("stft of zero is zero")
{
    const UniformGrid ax = UniformGrid::symmetric(1.0, 0.5);
    PWSignal zero(1.0, {});
    for (const auto& w : {WindowSpec::gaussian(), WindowSpec::rectangular(), WindowSpec::hermite(2)}) {
        const auto V = stft_grid(zero, w, ax, ax, default_quadrature(w));
        CHECK(V.max_abs() == 0.0);
    }
}

TEST_CASE("stft of a pw signal matches direct quadrature")
{
    const auto f = random_pw_signal(1.0, 4, false, 11);
    const UniformGrid xs = UniformGrid::symmetric(2.0, 0.5);
    const UniformGrid ws = UniformGrid::symmetric(1.5, 0.5);
    for (const auto& w : {WindowSpec::gaussian(), WindowSpec::hermite(3), WindowSpec::rectangular(), WindowSpec::hanning()}) {
        const auto V = stft_grid(f, w, xs, ws, default_quadrature(w));
        double err = 0.0;
        for (std::size_t i = 0; i < xs.count(); ++i)
            for (std::size_t j = 0; j < ws.count(); ++j) {
                // midpoint sum over the window support
                const double x = xs.point(i), om = ws.point(j);
                const int n = 40000;
                const double lo = x - 8.0, h = 16.0 / n;
                cplx acc = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double t = lo + (k + 0.5) * h;
                    acc += eval_time(f, t) * std::conj(window_eval(w, t - x)) * std::exp(cplx(0.0, -2.0 * kPi * t * om));
                }
                err = std::max(err, std::abs(acc * h - V.at(i, j)));
            }
        CHECK_MESSAGE(err <= 1e-4, w.family_name());
    }
}

TEST_CASE("time shift moves the stft modulus")
{
    const auto f = random_pw_signal(1.0, 4, false, 5);
    const double a = 0.75;
    const auto w = WindowSpec::gaussian();
    const UniformGrid xs = UniformGrid::symmetric(2.0, 0.25);
    const UniformGrid shifted(xs.start() - a, xs.step(), xs.count());
    const UniformGrid ws = UniformGrid::symmetric(1.5, 0.25);
    const auto Vs = stft_grid([&](double t) { return eval_time(f, t - a); }, w, xs, ws, default_quadrature(w));
    const auto V = stft_grid(f, w, shifted, ws, default_quadrature(w));
    double err = 0.0;
    for (std::size_t i = 0; i < xs.count(); ++i)
        for (std::size_t j = 0; j < ws.count(); ++j) err = std::max(err, std::abs(std::abs(Vs.at(i, j)) - std::abs(V.at(i, j))));
    CHECK(err <= 1e-8);
}

TEST_CASE("ambiguity grid")
{
    const auto f = random_pw_signal(1.0, 3, true, 2);
    const UniformGrid ax = UniformGrid::symmetric(2.0, 0.5);
    const auto A = ambiguity_grid(f, ax, ax);
    const std::size_t mid = ax.count() / 2;
    CHECK(std::abs(A.at(mid, mid) - f.energy()) < 1e-12);
    double sym = 0.0;
    for (std::size_t i = 0; i < ax.count(); ++i)
        for (std::size_t j = 0; j < ax.count(); ++j) {
            const std::size_t mi = ax.count() - 1 - i, mj = ax.count() - 1 - j;
            sym = std::max(sym, std::abs(A.at(mi, mj) - std::conj(A.at(i, j))));
            // real signal: conjugate under w -> -w alone
            sym = std::max(sym, std::abs(A.at(i, mj) - std::conj(A.at(i, j))));
        }
    CHECK(sym <= 1e-12);
}

TEST_CASE("measurements")
{
    const auto f = random_pw_signal(1.0, 4, false, 3);
    const auto w = WindowSpec::gaussian();
    const UniformGrid xs = UniformGrid::symmetric(3.0, 0.25);
    const UniformGrid ws = UniformGrid::symmetric(2.0, 0.25);
    const auto m = measure_grid(f, w, xs, ws);
    const auto mr = measure_grid(f.scaled(std::exp(cplx(0.0, 2.1))), w, xs, ws);
    double d = 0.0;
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        d = std::max(d, std::abs(m.values[i] - mr.values[i]));
        CHECK(m.values[i] >= 0.0);
    }
    CHECK(d <= 1e-12);

    const auto n1 = measure_grid(f, w, xs, ws, {0.01, 9});
    const auto n2 = measure_grid(f, w, xs, ws, {0.01, 9});
    CHECK(n1.values == n2.values);
    CHECK(n1.values != m.values);
    for (double v : n1.values) CHECK(v >= 0.0);
    CHECK_THROWS_AS(measure_grid(f, w, xs, ws, {-1.0, 0}), Error);

    const auto zs = measure_samples(PWSignal(1.0, {}), w, 16);
    CHECK(zs.values.values.size() == 33);
    for (double v : zs.values.values) CHECK(v == 0.0);
    CHECK(zs.spacing() == 0.25);
    const auto s = measure_samples(f, w, 8);
    CHECK(std::abs(s.values[2] - m.at(14, 8)) < 1e-12);  // x = 0.5, w = 0
}

TEST_CASE("pipeline axes")
{
    const auto ax = pipeline_axes(1.0, WindowSpec::gaussian());
    CHECK(ax.x_axis.step() == 1.0 / 8.0);
    CHECK(ax.x_axis.last() == doctest::Approx(128.0));
    CHECK(ax.omega_axis.last() >= 1.0);
    const auto ah = pipeline_axes(2.0, WindowSpec::hermite(2));
    CHECK(ah.x_axis.step() == 1.0 / 16.0);
}

TEST_CASE("ambiguity relation residual")
{
    const UniformGrid probe = UniformGrid::symmetric(2.0, 0.25);
    const auto [f, g] = counterexample_pair(CounterexampleKind::Real, 1.0);
    const auto r = ambiguity_relation_residual(f, WindowSpec::gaussian(), probe, probe);
    CHECK(r.residual <= 1e-5);
    CHECK_FALSE(r.truncation_warning);

    const auto z = ambiguity_relation_residual(PWSignal(1.0, {}), WindowSpec::gaussian(), probe, probe);
    CHECK(z.residual == 0.0);

    const UniformGrid coarse = UniformGrid::symmetric(2.0, 0.5);
    const auto h = random_pw_signal(1.0, 4, false, 7);
    CHECK(ambiguity_relation_residual(h, WindowSpec::hermite(1), coarse, coarse).residual <= 1e-5);
    CHECK(ambiguity_relation_residual(h, WindowSpec::hanning(), coarse, coarse).residual <= 1e-5);
}

TEST_CASE("relation residual shrinks under refinement")
{
    const auto f = random_pw_signal(1.0, 4, false, 1);
    const UniformGrid xs = UniformGrid::symmetric(1.0, 0.5);
    const UniformGrid as = UniformGrid::symmetric(0.5, 0.5);
    const auto w = WindowSpec::gaussian();
    RelationOptions coarse{1.0, 12.0};
    RelationOptions fine{0.5, 12.0};
    const double rc = ambiguity_relation_residual(f, w, xs, as, coarse).residual;
    const double rf = ambiguity_relation_residual(f, w, xs, as, fine).residual;
    CHECK(rc > 0.0);
    CHECK(rf <= rc / 2.0);
}

TEST_CASE("integral of the squared stft modulus")
{
    // at the origin the left side is the double integral of |V|^2 = |f|^2 |w|^2
    for (std::uint64_t seed : {0u, 4u}) {
        const auto f = random_pw_signal(1.0, 4, false, seed);
        const std::vector<double> origin{0.0};
        const auto g = relation_lhs(f, WindowSpec::gaussian(), 0.0, origin);
        CHECK(std::abs(g[0] - f.energy() / std::sqrt(2.0)) <= 1e-3);
        const auto r = relation_lhs(f, WindowSpec::rectangular(), 0.0, origin);
        CHECK(std::abs(r[0] - 2.0 * f.energy()) <= 1e-3);
    }
}

TEST_CASE("fixed-x identity for the squared modulus")
{
    // int |V(x, w)|^2 e^{2 pi i w x'} dw = int f_x(t) conj(f_x(t - x')) dt, f_x = f conj(w(. - x))
    const auto w = WindowSpec::gaussian();
    for (auto [seed, x] : {std::pair{std::uint64_t{2}, 0.3}, {std::uint64_t{6}, -1.2}}) {
        const auto f = random_pw_signal(1.0, 4, false, seed);
        const UniformGrid om = UniformGrid::symmetric(7.0, 1.0 / 32.0);
        const auto V = stft_grid(f, w, UniformGrid(x, 1.0, 1), om, default_quadrature(w));
        const auto fx = [&](double t) { return eval_time(f, t) * std::conj(window_eval(w, t - x)); };
        for (double xp : {0.0, 0.4, -0.9}) {
            cplx lhs = 0.0;
            for (std::size_t j = 0; j < om.count(); ++j)
                lhs += std::norm(V.at(0, j)) * std::exp(cplx(0.0, 2.0 * kPi * om.point(j) * xp));
            lhs *= om.step();
            cplx rhs = 0.0;
            const double h = 1.0 / 64.0;
            for (double t = x - 8.0; t <= x + 8.0 + std::abs(xp); t += h) rhs += fx(t) * std::conj(fx(t - xp));
            rhs *= h;
            CHECK(std::abs(lhs - rhs) <= 1e-6);
        }
    }
}

TEST_CASE("band support residual")
{
    const std::vector<double> om{-3.0, -2.5, -2.0, 2.0, 2.5, 3.0};
    const std::vector<double> xs{-2.0, -1.0, 0.0, 0.5, 1.0, 2.0};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CHECK(band_support_residual(random_pw_signal(1.0, 4, false, seed), om, xs) <= 1e-6);
        CHECK(band_support_residual(random_pw_signal(1.0, 4, true, seed), om, xs) <= 1e-6);
    }
    const auto [f, g] = counterexample_pair(CounterexampleKind::Real, 1.0);
    CHECK(band_support_residual(f, om, xs) <= 1e-6);
    CHECK(band_support_residual(PWSignal(1.0, {}), om, xs) == 0.0);

    // the gaussian is not band limited; pretending B = 1/4 must show a large residual
    const std::vector<double> small{-1.0, -0.5, 0.5, 1.0};
    const double neg = band_support_residual(
        [](double x, double w) { return window_ambiguity(WindowSpec::gaussian(), x, w); }, 0.25, small, xs);
    CHECK(neg > 1e-2);

    const std::vector<double> inside{1.0};
    CHECK_THROWS_AS(band_support_residual(f, inside, xs), Error);
}
