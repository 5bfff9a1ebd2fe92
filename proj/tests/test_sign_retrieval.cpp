#include "doctest.h"

#include "pwphase/errors.hpp"
#include "pwphase/sign_retrieval.hpp"

#include <cmath>

using namespace pwphase;

namespace {

double sinc_ref(double x)
{
    return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
}

template <class F>
MagnitudeSamples samples_of(F u, double B, long N)
{
    MagnitudeSamples s;
    s.B = B;
    s.values.values.resize(static_cast<std::size_t>(2 * N + 1));
    for (long n = -N; n <= N; ++n) s.values[n] = std::abs(u(n / (4.0 * B)));
    return s;
}

template <class F>
double error_up_to_sign(const SignRetrievalResult& r, F u)
{
    double ep = 0.0, em = 0.0;
    for (std::size_t i = 0; i < r.grid.count(); ++i) {
        const double t = r.grid.point(i);
        ep = std::max(ep, std::abs(r.values[i] - u(t)));
        em = std::max(em, std::abs(r.values[i] + u(t)));
    }
    return std::min(ep, em);
}

}  // namespace

TEST_CASE("nonnegative sinc squared")
{
    auto u = [](double t) { return sinc_ref(t) * sinc_ref(t); };
    const auto s = samples_of(u, 1.0, 256);
    SignRetrievalOptions opt;
    opt.working = UniformGrid::symmetric(5.0, 1.0 / 32.0);
    const auto r = sign_retrieve(s, opt);
    CHECK(error_up_to_sign(r, u) <= 1e-4);
    for (int sg : r.signs) CHECK(sg == 1);
}

TEST_CASE("sinc with sign changes")
{
    auto u = [](double t) { return sinc_ref(2.0 * t); };
    const auto s = samples_of(u, 1.0, 512);
    SignRetrievalOptions opt;
    opt.working = UniformGrid::symmetric(4.0, 1.0 / 32.0);
    const auto r = sign_retrieve(s, opt);
    CHECK(error_up_to_sign(r, u) <= 1e-3);
    CHECK(r.signs.front() == 1);
    CHECK(r.segments() == r.zeros.size() + 1);
    // zeros of sinc(2t) at k/2
    for (double z : r.zeros) CHECK(std::abs(z * 2.0 - std::round(z * 2.0)) < 1e-2);
    CHECK(r.sign_at(0.0) * r.sign_at(0.75) == -1);
}

TEST_CASE("random real signals")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto f = random_pw_signal(1.0, 4, true, seed);
        auto u = [&](double t) { return eval_time(f, t).real(); };
        const auto s = samples_of(u, 1.0, 256);
        SignRetrievalOptions opt;
        opt.working = UniformGrid::symmetric(2.0, 1.0 / 32.0);
        SignRetrievalResult r;
        try {
            r = sign_retrieve(s, opt);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::TooManySegments);
            continue;
        }
        double peak = 0.0;
        for (std::size_t i = 0; i < r.grid.count(); ++i) peak = std::max(peak, std::abs(u(r.grid.point(i))));
        CHECK_MESSAGE(error_up_to_sign(r, u) <= 1e-2 * peak, "seed " << seed);
    }
}

TEST_CASE("blockwise retrieval on a long window")
{
    const auto f = random_pw_signal(1.0, 4, true, 3);
    auto u = [&](double t) { return eval_time(f, t).real(); };
    const auto s = samples_of(u, 1.0, 256);
    SignRetrievalOptions opt;
    opt.working = UniformGrid::symmetric(12.0, 1.0 / 32.0);
    CHECK_THROWS_AS(sign_retrieve(s, opt), Error);
    const auto r = sign_retrieve_blockwise(s, opt);
    double peak = 0.0;
    for (std::size_t i = 0; i < r.grid.count(); ++i) peak = std::max(peak, std::abs(u(r.grid.point(i))));
    CHECK(error_up_to_sign(r, u) <= 1e-2 * peak);
}

TEST_CASE("degenerate inputs")
{
    MagnitudeSamples z;
    z.B = 1.0;
    z.values.values.assign(65, 0.0);
    const auto r = sign_retrieve(z);
    for (double v : r.values) CHECK(v == 0.0);

    auto bad = z;
    bad.values[3] = -0.1;
    CHECK_THROWS_AS(sign_retrieve(bad), Error);
    try {
        sign_retrieve(bad);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoisyMagnitudes);
    }

    // many oscillations on a wide window
    auto u = [](double t) { return sinc_ref(2.0 * t); };
    const auto s = samples_of(u, 1.0, 256);
    SignRetrievalOptions opt;
    opt.working = UniformGrid::symmetric(20.0, 1.0 / 32.0);
    try {
        sign_retrieve(s, opt);
        FAIL("expected TooManySegments");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooManySegments);
    }
}

TEST_CASE("interpolated square matches the samples")
{
    auto u = [](double t) { return sinc_ref(2.0 * t); };
    const auto s = samples_of(u, 1.0, 128);
    const UniformGrid g(-2.0, 0.25, 17);
    const auto q = interpolate_square(s, g);
    for (std::size_t i = 0; i < g.count(); ++i) CHECK(std::abs(q[i] - u(g.point(i)) * u(g.point(i))) < 1e-12);
}
