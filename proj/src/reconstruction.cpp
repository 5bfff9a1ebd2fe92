#include "pwphase/reconstruction.hpp"

#include "pwphase/errors.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

namespace pwphase {

std::string to_string(Resolution r)
{
    return r == Resolution::GlobalSign ? "global_sign" : "global_phase";
}

UniformGrid slice_axis(double B)
{
    return UniformGrid::symmetric(2.0 * B, 1.0 / (256.0 * B));
}

namespace {

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

UniformGrid output_grid(double B, const PipelineOptions& opts)
{
    return opts.output ? *opts.output : default_time_grid(B);
}

void check_band(double B)
{
    if (!(B > 0.0) || !std::isfinite(B)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
}

}  // namespace

RecoveredSlice recover_af_slice(const MagnitudeGrid& m, const WindowSpec& w, double x0, const UniformGrid& omega_axis,
                                double floor)
{
    if (!(floor > 0.0)) throw Error(ErrorKind::InvalidArgument, "slice floor must be positive");
    const auto& xa = m.x_axis;
    const auto& wa = m.omega_axis;
    const auto tx = trapezoid_weights(xa);
    const auto tw = trapezoid_weights(wa);

    // transform in omega' at -x0 first, then in x' at omega
    std::vector<cplx> chirp(wa.count());
    for (std::size_t j = 0; j < wa.count(); ++j) chirp[j] = tw[j] * expi(2.0 * kPi * wa.point(j) * x0);
    std::vector<cplx> lhs(omega_axis.count(), 0.0);
    for (std::size_t i = 0; i < xa.count(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < wa.count(); ++j) {
            const double v = m.at(i, j);
            s += v * v * chirp[j];
        }
        s *= tx[i];
        const double x = xa.point(i);
        cplx p = s * expi(-2.0 * kPi * x * omega_axis.start());
        const cplx step = expi(-2.0 * kPi * x * omega_axis.step());
        for (auto& l : lhs) {
            l += p;
            p *= step;
        }
    }

    RecoveredSlice out{AmbiguitySlice{omega_axis, x0, std::vector<cplx>(omega_axis.count()), 0.0}, 0};
    std::vector<cplx> aw(omega_axis.count());
    double peak = 0.0;
    for (std::size_t k = 0; k < omega_axis.count(); ++k) {
        aw[k] = window_ambiguity(w, x0, omega_axis.point(k));
        peak = std::max(peak, std::abs(aw[k]));
    }
    double min_mod = INFINITY;
    for (std::size_t k = 0; k < omega_axis.count(); ++k) {
        if (std::abs(aw[k]) < floor * peak) {
            ++out.floored_bins;
            out.slice.values[k] = 0.0;
        } else {
            out.slice.values[k] = lhs[k] / std::conj(aw[k]);
        }
        min_mod = std::min(min_mod, std::abs(out.slice.values[k]));
    }
    out.slice.min_modulus = min_mod;
    if (out.floored_bins * 5 > omega_axis.count())
        throw Error(ErrorKind::VanishingAmbiguity, std::to_string(out.floored_bins) + " of " +
                                                       std::to_string(omega_axis.count()) +
                                                       " slice bins below the division floor");
    return out;
}

std::vector<cplx> cross_correlation(const AmbiguitySlice& af_slice, std::span<const double> times)
{
    const auto& ax = af_slice.axis;
    const auto tw = trapezoid_weights(ax);
    std::vector<cplx> g(ax.count());
    for (std::size_t k = 0; k < ax.count(); ++k)
        g[k] = tw[k] * expi(-kPi * af_slice.x0 * ax.point(k)) * af_slice.values[k];
    std::vector<cplx> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        cplx p = expi(2.0 * kPi * ax.start() * t);
        const cplx step = expi(2.0 * kPi * ax.step() * t);
        cplx acc = 0.0;
        for (const auto& v : g) {
            acc += v * p;
            p *= step;
        }
        out[i] = acc;
    }
    return out;
}

CrossCorrelationSlice cross_correlation_slice(const AmbiguitySlice& af_slice, const UniformGrid& t_axis)
{
    const auto ts = t_axis.points();
    return {af_slice.x0, t_axis, cross_correlation(af_slice, ts)};
}

Anchor select_anchor(const std::function<double(double)>& magnitude, double c, long K, int offsets)
{
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "lattice spacing must be positive");
    if (K < 0 || offsets < 1) throw Error(ErrorKind::InvalidArgument, "anchor scan needs K >= 0 and offsets >= 1");
    Anchor best{0.0, -1.0};
    double seen = 0.0;
    for (int j = 0; j < offsets; ++j) {
        const double t0 = c * j / offsets;
        double kappa = INFINITY;
        for (long n = -K; n <= K; ++n) {
            const double v = magnitude(t0 + static_cast<double>(n) * c);
            seen = std::max(seen, v);
            kappa = std::min(kappa, v);
        }
        if (kappa > best.kappa) best = {t0, kappa};
    }
    if (!(seen > 0.0) || best.kappa < 1e-6 * seen)
        throw Error(ErrorKind::NoAnchor, "every scanned lattice offset meets a near-zero of |f|");
    return best;
}

CenteredSequence<cplx> propagate_phase(const CenteredSequence<double>& magnitude, const CenteredSequence<cplx>& r,
                                       long K, double kappa)
{
    if (magnitude.values.size() != r.values.size())
        throw Error(ErrorKind::InvalidArgument, "magnitude and cross-correlation lattices differ in length");
    const long L = static_cast<long>(magnitude.half());
    if (K > L) throw Error(ErrorKind::InvalidArgument, "guard range exceeds the lattice");
    double peak = 0.0;
    for (double v : magnitude.values) peak = std::max(peak, v);

    CenteredSequence<cplx> out;
    out.values.assign(magnitude.values.size(), 0.0);
    out[0] = magnitude[0];

    auto step = [&](long from, long to, bool forward) {
        const long n = std::abs(from);
        const cplx prev = out[from];
        if (n <= K) {
            if (std::abs(prev) < kappa / 2)
                throw Error(ErrorKind::UnstableChain, "lattice divisor at n = " + std::to_string(from) +
                                                          " below half the anchor bound");
        } else if (magnitude[to] < 1e-3 * peak || std::abs(prev) == 0.0) {
            return false;
        }
        const cplx z = forward ? r[to] / std::conj(prev) : std::conj(r[from] / prev);
        if (std::abs(z) == 0.0) {
            if (n <= K) throw Error(ErrorKind::UnstableChain, "vanishing cross-correlation inside the chain");
            return false;
        }
        out[to] = magnitude[to] * z / std::abs(z);
        return true;
    };
    for (long n = 0; n < L; ++n)
        if (!step(n, n + 1, true)) break;
    for (long n = 0; n > -L; --n)
        if (!step(n, n - 1, false)) break;
    return out;
}

namespace {

// |f|^2 recovered from the x0 = 0 slice.
struct SquareModulus {
    const AmbiguitySlice* slice;

    std::vector<cplx> raw(std::span<const double> ts) const { return cross_correlation(*slice, ts); }
    double magnitude(double t) const
    {
        const double tt[1] = {t};
        return std::sqrt(std::max(0.0, raw(tt)[0].real()));
    }
};

// Samples |f(n/(4B))| of a recovered |f|^2; checks the imaginary residue.
MagnitudeSamples modulus_samples(const AmbiguitySlice& s0, double B, long N, double& clamp_mass)
{
    std::vector<double> ts;
    for (long n = -N; n <= N; ++n) ts.push_back(static_cast<double>(n) / (4.0 * B));
    const auto q = cross_correlation(s0, ts);
    double peak = 0.0;
    double imag = 0.0;
    for (const auto& v : q) {
        peak = std::max(peak, std::abs(v));
        imag = std::max(imag, std::abs(v.imag()));
    }
    if (imag > 1e-6 * std::max(peak, 1e-300) && peak > 0.0)
        throw Error(ErrorKind::NotRealConsistent, "recovered |f|^2 has imaginary part " + std::to_string(imag));
    MagnitudeSamples out;
    out.B = B;
    clamp_mass = 0.0;
    for (const auto& v : q) {
        if (v.real() < 0.0) clamp_mass += -v.real();
        out.values.values.push_back(std::sqrt(std::max(0.0, v.real())));
    }
    return out;
}

long sample_half_count(const MagnitudeGrid& m, double B)
{
    const double reach = std::min(std::abs(m.x_axis.start()), std::abs(m.x_axis.last()));
    return std::max(1L, std::min(256L, static_cast<long>(std::floor(2.0 * B * reach))));
}

std::vector<cplx> signed_on_grid(const SignRetrievalResult& sr, const MagnitudeSamples& s, const UniformGrid& grid)
{
    const auto q = interpolate_square(s, grid);
    std::vector<cplx> out(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) out[i] = sr.sign_at(grid.point(i)) * std::sqrt(q[i]);
    return out;
}

// Re-simulated |V_w f| from trapezoid sums over the reconstructed samples.
double simulate(const WindowSpec& w, const UniformGrid& grid, std::span<const cplx> signal, double x, double omega)
{
    const auto tw = trapezoid_weights(grid);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < grid.count(); ++k) {
        const double t = grid.point(k);
        const cplx wv = window_eval(w, t - x);
        if (wv == 0.0) continue;
        acc += tw[k] * signal[k] * std::conj(wv) * expi(-2.0 * kPi * t * omega);
    }
    return std::abs(acc);
}

double interior_reach(const UniformGrid& grid)
{
    return 0.5 * std::min(std::abs(grid.start()), std::abs(grid.last()));
}

}  // namespace

double grid_residual(const MagnitudeGrid& m, const WindowSpec& w, const UniformGrid& grid, std::span<const cplx> signal)
{
    const double reach = interior_reach(grid);
    double peak = 0.0;
    for (double v : m.values) peak = std::max(peak, v);
    if (peak == 0.0) {
        double s = 0.0;
        for (const auto& v : signal) s = std::max(s, std::abs(v));
        return s;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < m.x_axis.count(); ++i) {
        const double x = m.x_axis.point(i);
        if (std::abs(x) > reach) continue;
        for (std::size_t j = 0; j < m.omega_axis.count(); ++j)
            worst = std::max(worst, std::abs(simulate(w, grid, signal, x, m.omega_axis.point(j)) - m.at(i, j)));
    }
    return worst / peak;
}

double samples_residual(const MagnitudeSamples& s, const WindowSpec& w, const UniformGrid& grid,
                        std::span<const cplx> signal)
{
    const double reach = interior_reach(grid);
    double peak = 0.0;
    for (double v : s.values.values) peak = std::max(peak, v);
    if (peak == 0.0) {
        double a = 0.0;
        for (const auto& v : signal) a = std::max(a, std::abs(v));
        return a;
    }
    const long N = static_cast<long>(s.values.half());
    double worst = 0.0;
    for (long n = -N; n <= N; ++n) {
        const double x = static_cast<double>(n) * s.spacing();
        if (std::abs(x) > reach) continue;
        worst = std::max(worst, std::abs(simulate(w, grid, signal, x, 0.0) - s.values[n]));
    }
    return worst / peak;
}

ReconstructionReport reconstruct_real_full(const MagnitudeGrid& m, const WindowSpec& w, double B,
                                           const PipelineOptions& opts)
{
    check_band(B);
    const auto rec = recover_af_slice(m, w, 0.0, slice_axis(B), opts.slice_floor);
    double clamp_mass = 0.0;
    const auto s = modulus_samples(rec.slice, B, sample_half_count(m, B), clamp_mass);

    SignRetrievalOptions so;
    so.working = UniformGrid::symmetric(12.0 / B, 1.0 / (32.0 * B));
    so.block_segments = opts.sign_block_segments;
    so.block_step = opts.sign_block_step;
    const auto sr = sign_retrieve_blockwise(s, so);

    ReconstructionReport rep;
    rep.grid = output_grid(B, opts);
    rep.signal = signed_on_grid(sr, s, rep.grid);
    rep.resolved_up_to = Resolution::GlobalSign;
    rep.floored_bins = rec.floored_bins;
    rep.residual = grid_residual(m, w, rep.grid, rep.signal);
    rep.diagnostics = {{"clamp_mass", clamp_mass},
                       {"sign_segments", static_cast<double>(sr.segments())},
                       {"sample_half_count", static_cast<double>(s.values.half())}};
    return rep;
}

ReconstructionReport reconstruct_real_sampled(const MagnitudeSamples& s, const WindowSpec& w, double B,
                                              const PipelineOptions& opts)
{
    check_band(B);
    if (!w.is_real()) throw Error(ErrorKind::WindowNotReal, "the sampled pipeline needs a real-valued window");
    if (std::abs(s.B - B) > 1e-12 * B) throw Error(ErrorKind::InvalidArgument, "sample rate does not match B");
    if (!(opts.deconv_floor > 0.0)) throw Error(ErrorKind::InvalidArgument, "deconvolution floor must be positive");

    const UniformGrid xi(-B, B / 1024.0, 2049);
    std::vector<cplx> fw(xi.count());
    double peak = 0.0;
    for (std::size_t k = 0; k < xi.count(); ++k) {
        fw[k] = window_ft(w, xi.point(k));
        peak = std::max(peak, std::abs(fw[k]));
    }
    std::size_t floored = 0;
    for (auto& v : fw)
        if (std::abs(v) < opts.deconv_floor * peak) {
            v = 0.0;
            ++floored;
        }
    if (floored * 5 > xi.count())
        throw Error(ErrorKind::SpectrumFloorExceeded, std::to_string(floored) + " of " + std::to_string(xi.count()) +
                                                          " in-band window spectrum bins below the floor");

    const long N = static_cast<long>(s.values.half());
    SignRetrievalOptions so;
    so.working = UniformGrid::symmetric(static_cast<double>(N) / (4.0 * B) + 2.0 / B, 1.0 / (64.0 * B));
    so.block_segments = opts.sign_block_segments;
    so.block_step = opts.sign_block_step;
    const auto sr = sign_retrieve_blockwise(s, so);

    // u at its Nyquist points m / (2B), then the discrete-time transform of those samples
    const long M = N / 2;
    std::vector<double> u(static_cast<std::size_t>(2 * M + 1));
    for (long k = -M; k <= M; ++k)
        u[static_cast<std::size_t>(k + M)] = sr.sign_at(static_cast<double>(k) / (2.0 * B)) * s.values[2 * k];
    std::vector<cplx> ff(xi.count(), 0.0);
    for (std::size_t k = 0; k < xi.count(); ++k) {
        if (fw[k] == 0.0) continue;
        const double x = xi.point(k);
        cplx p = expi(2.0 * kPi * x * static_cast<double>(M) / (2.0 * B));
        const cplx stepk = expi(-2.0 * kPi * x / (2.0 * B));
        cplx acc = 0.0;
        for (double v : u) {
            acc += v * p;
            p *= stepk;
        }
        ff[k] = acc / (2.0 * B) / std::conj(fw[k]);
    }

    ReconstructionReport rep;
    rep.grid = output_grid(B, opts);
    rep.signal.resize(rep.grid.count());
    const auto tw = trapezoid_weights(xi);
    for (std::size_t i = 0; i < rep.grid.count(); ++i) {
        const double t = rep.grid.point(i);
        cplx p = expi(2.0 * kPi * xi.start() * t);
        const cplx stept = expi(2.0 * kPi * xi.step() * t);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < xi.count(); ++k) {
            acc += tw[k] * ff[k] * p;
            p *= stept;
        }
        rep.signal[i] = acc.real();
    }
    rep.resolved_up_to = Resolution::GlobalSign;
    rep.floored_bins = floored;
    rep.residual = samples_residual(s, w, rep.grid, rep.signal);
    rep.diagnostics = {{"sign_segments", static_cast<double>(sr.segments())},
                       {"nyquist_samples", static_cast<double>(u.size())}};
    return rep;
}

void check_slice_offset(double B, double c)
{
    check_band(B);
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "slice offset c must be positive");
    if (c > (1.0 + 1e-12) / (2.0 * B))
        throw Error(ErrorKind::CUpsampleBound, "slice offset c = " + std::to_string(c) + " exceeds 1/(2B)");
}

ReconstructionReport reconstruct_complex_two_slices(const MagnitudeGrid& m, const WindowSpec& w, double B, double c,
                                                    const PipelineOptions& opts)
{
    check_slice_offset(B, c);
    const auto axis = slice_axis(B);
    const auto r0 = recover_af_slice(m, w, 0.0, axis, opts.slice_floor);
    const auto rc = recover_af_slice(m, w, c, axis, opts.slice_floor);
    const SquareModulus q{&r0.slice};

    const long K = static_cast<long>(std::ceil(8.0 * B / c));
    const Anchor anchor = select_anchor([&q](double t) { return q.magnitude(t); }, c, K);

    const long L = 4 * K;
    std::vector<double> ts;
    for (long n = -L; n <= L; ++n) ts.push_back(anchor.t0 + static_cast<double>(n) * c);
    const auto q_lat = q.raw(ts);
    const auto r_lat = cross_correlation(rc.slice, ts);
    CenteredSequence<double> mag;
    CenteredSequence<cplx> r;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mag.values.push_back(std::sqrt(std::max(0.0, q_lat[i].real())));
        r.values.push_back(r_lat[i]);
    }
    const auto lattice = propagate_phase(mag, r, K, anchor.kappa);
    long chain = 0;
    for (long n = -L; n <= L; ++n)
        if (lattice[n] != 0.0) chain = std::max(chain, std::abs(n));

    ReconstructionReport rep;
    rep.grid = output_grid(B, opts);
    rep.signal.resize(rep.grid.count());
    for (std::size_t i = 0; i < rep.grid.count(); ++i)
        rep.signal[i] = wsk_interpolate(lattice, c, rep.grid.point(i) - anchor.t0);
    rep.resolved_up_to = Resolution::GlobalPhase;
    rep.anchor_t0 = anchor.t0;
    rep.c = c;
    rep.floored_bins = r0.floored_bins + rc.floored_bins;
    rep.residual = grid_residual(m, w, rep.grid, rep.signal);
    rep.diagnostics = {{"kappa", anchor.kappa},
                       {"guard_half_count", static_cast<double>(K)},
                       {"chain_half_length", static_cast<double>(chain)},
                       {"wsk_tail", wsk_tail_estimate(lattice)}};
    return rep;
}

UniformGrid default_strip_scan(double B)
{
    return UniformGrid::covering(0.0, 2.0 / B, 1.0 / 128.0);
}

StripEstimate estimate_strip(const WindowSpec& w, double B, const UniformGrid& scan)
{
    check_band(B);
    const auto axis = slice_axis(B);
    std::vector<double> a(axis.count());
    for (std::size_t k = 0; k < axis.count(); ++k) a[k] = std::abs(window_ambiguity(w, 0.0, axis.point(k)));
    const double peak = *std::max_element(a.begin(), a.end());
    double dmin = *std::min_element(a.begin(), a.end());
    if (!(peak > 0.0)) throw Error(ErrorKind::StripNotFound, "window ambiguity vanishes on the slice");

    // grid minima can straddle an isolated zero; polish every interior local minimum
    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        if (!(a[k] <= a[k - 1] && a[k] <= a[k + 1])) continue;
        const auto res = boost::math::tools::brent_find_minima(
            [&w](double om) { return std::abs(window_ambiguity(w, 0.0, om)); }, axis.point(k - 1), axis.point(k + 1),
            52);
        dmin = std::min(dmin, res.second);
    }
    if (dmin < 1e-8 * peak)
        throw Error(ErrorKind::StripNotFound, "A w(0, omega) vanishes inside [-2B, 2B]");

    StripEstimate est;
    est.delta_hat = dmin;
    for (std::size_t i = 0; i < scan.count(); ++i) {
        const double x = scan.point(i);
        double mn = INFINITY;
        for (std::size_t k = 0; k < axis.count(); ++k) mn = std::min(mn, std::abs(window_ambiguity(w, x, axis.point(k))));
        if (mn < dmin / 2) break;
        est.delta = x;
    }
    if (!(est.delta > 0.0)) throw Error(ErrorKind::StripNotFound, "no strip of positive width on the scan");
    est.c = std::min(est.delta, 1.0 / (2.0 * B));
    return est;
}

ReconstructionReport reconstruct_complex_strip(const MagnitudeGrid& m, const WindowSpec& w, double B,
                                               const UniformGrid& scan, const PipelineOptions& opts)
{
    const auto est = estimate_strip(w, B, scan);
    auto rep = reconstruct_complex_two_slices(m, w, B, est.c, opts);
    rep.diagnostics.emplace_back("delta_hat", est.delta_hat);
    rep.diagnostics.emplace_back("delta", est.delta);
    return rep;
}

}  // namespace pwphase
