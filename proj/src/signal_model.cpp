#include "pwphase/signal_model.hpp"

#include "pwphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pwphase {

namespace {

constexpr double kEdgeTol = 1e-12;

// Adjacent equal-valued pieces merged, zero pieces dropped.
std::vector<SpectrumPiece> canonical(const std::vector<SpectrumPiece>& pieces)
{
    std::vector<SpectrumPiece> out;
    for (const auto& p : pieces) {
        if (p.value == 0.0) continue;
        if (!out.empty() && std::abs(out.back().b - p.a) <= kEdgeTol && out.back().value == p.value)
            out.back().b = p.b;
        else
            out.push_back(p);
    }
    return out;
}

bool is_hermitian(const std::vector<SpectrumPiece>& pieces)
{
    const auto c = canonical(pieces);
    std::vector<SpectrumPiece> mirror;
    for (auto it = c.rbegin(); it != c.rend(); ++it) mirror.push_back({-it->b, -it->a, std::conj(it->value)});
    if (mirror.size() != c.size()) return false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double scale = std::max(1.0, std::abs(c[i].value));
        if (std::abs(c[i].a - mirror[i].a) > kEdgeTol || std::abs(c[i].b - mirror[i].b) > kEdgeTol ||
            std::abs(c[i].value - mirror[i].value) > 1e-12 * scale)
            return false;
    }
    return true;
}

// integral of e^{2 pi i x xi} over [l, u]
cplx chirp_integral(double x, double l, double u)
{
    const double len = u - l;
    const double ph = kPi * x * (u + l);
    return len * cplx(std::cos(ph), std::sin(ph)) * sinc(x * len);
}

}  // namespace

PWSignal::PWSignal(double B, std::vector<SpectrumPiece> pieces, bool real_on_line)
    : B_(B), pieces_(std::move(pieces)), real_(real_on_line)
{
    if (!(B > 0.0) || !std::isfinite(B)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
    std::sort(pieces_.begin(), pieces_.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!(p.a < p.b)) throw Error(ErrorKind::InvalidArgument, "spectrum piece with a >= b");
        if (p.a < -B * (1 + kEdgeTol) || p.b > B * (1 + kEdgeTol))
            throw Error(ErrorKind::InvalidArgument, "spectrum piece outside [-B, B]");
        if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
            throw Error(ErrorKind::InvalidArgument, "non-finite spectrum value");
        if (i > 0 && p.a < pieces_[i - 1].b - kEdgeTol)
            throw Error(ErrorKind::InvalidArgument, "overlapping spectrum pieces");
    }
    if (real_ && !is_hermitian(pieces_))
        throw Error(ErrorKind::InvalidArgument, "real_on_line requires a Hermitian spectrum");
}

double PWSignal::energy() const
{
    double e = 0.0;
    for (const auto& p : pieces_) e += std::norm(p.value) * (p.b - p.a);
    return e;
}

double PWSignal::spectrum_l1() const
{
    double e = 0.0;
    for (const auto& p : pieces_) e += std::abs(p.value) * (p.b - p.a);
    return e;
}

PWSignal PWSignal::scaled(cplx factor) const
{
    auto ps = pieces_;
    for (auto& p : ps) p.value *= factor;
    const bool still_real = real_ && factor.imag() == 0.0;
    return PWSignal(B_, std::move(ps), still_real);
}

cplx eval_time(const PWSignal& f, double t)
{
    cplx acc = 0.0;
    for (const auto& p : f.pieces()) acc += p.value * chirp_integral(t, p.a, p.b);
    return acc;
}

cplx eval_spectrum(const PWSignal& f, double xi)
{
    for (const auto& p : f.pieces())
        if (xi >= p.a && xi < p.b) return p.value;
    return 0.0;
}

std::vector<cplx> sample(const PWSignal& f, const UniformGrid& grid)
{
    std::vector<cplx> out(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) out[i] = eval_time(f, grid.point(i));
    return out;
}

cplx pw_cross_stft(const PWSignal& f, const PWSignal& w, double x, double omega)
{
    cplx acc = 0.0;
    for (const auto& pf : f.pieces()) {
        for (const auto& pw : w.pieces()) {
            const double l = std::max(pf.a, pw.a + omega);
            const double u = std::min(pf.b, pw.b + omega);
            if (u > l) acc += pf.value * std::conj(pw.value) * chirp_integral(x, l, u);
        }
    }
    const double ph = -2.0 * kPi * x * omega;
    return acc * cplx(std::cos(ph), std::sin(ph));
}

cplx pw_ambiguity(const PWSignal& f, double x, double omega)
{
    const double ph = kPi * x * omega;
    return cplx(std::cos(ph), std::sin(ph)) * pw_cross_stft(f, f, x, omega);
}

PWSignal random_pw_signal(double B, int piece_count, bool real_on_line, std::uint64_t seed)
{
    if (piece_count < 1) throw Error(ErrorKind::InvalidArgument, "piece_count must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(real_on_line ? 0.0 : -B, B);
    std::normal_distribution<double> normal;

    std::vector<double> edges(static_cast<std::size_t>(piece_count) + 1);
    for (auto& e : edges) e = unif(rng);
    std::sort(edges.begin(), edges.end());

    std::vector<SpectrumPiece> pieces;
    double energy = 0.0;
    for (int i = 0; i < piece_count; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        const SpectrumPiece p{edges[i], edges[i + 1], cplx(re, im)};
        if (!(p.a < p.b)) continue;
        pieces.push_back(p);
        energy += std::norm(p.value) * (p.b - p.a);
        if (real_on_line) {
            pieces.push_back({-p.b, -p.a, std::conj(p.value)});
            energy += std::norm(p.value) * (p.b - p.a);
        }
    }
    if (energy == 0.0) throw Error(ErrorKind::InvalidArgument, "degenerate random spectrum");
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& p : pieces) p.value *= scale;
    return PWSignal(B, std::move(pieces), real_on_line);
}

UniformGrid default_time_grid(double B)
{
    const double step = std::min(1e-2, 1.0 / (32.0 * B));
    return UniformGrid::symmetric(8.0 / B, step);
}

double grid_norm(std::span<const cplx> f, double step)
{
    double acc = 0.0;
    for (const auto& v : f) acc += std::norm(v);
    return std::sqrt(acc * step);
}

PhaseDistance distance_up_to_phase(std::span<const cplx> f, std::span<const cplx> g, double step)
{
    if (f.size() != g.size()) throw Error(ErrorKind::InvalidArgument, "distance needs equal-length inputs");
    cplx ip = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) ip += f[i] * std::conj(g[i]);
    PhaseDistance out;
    out.alpha = std::arg(ip);
    // summed directly; the expanded form |f|^2 + |g|^2 - 2|<f,g>| cancels badly near 0
    const cplx rot = std::polar(1.0, out.alpha);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::norm(f[i] - rot * g[i]);
    out.distance = std::sqrt(acc * step);
    return out;
}

PhaseDistance distance_up_to_phase(const PWSignal& f, const PWSignal& g, const UniformGrid& grid)
{
    const auto fs = sample(f, grid);
    const auto gs = sample(g, grid);
    return distance_up_to_phase(fs, gs, grid.step());
}

std::pair<PWSignal, PWSignal> counterexample_pair(CounterexampleKind kind, double B, std::optional<double> eps)
{
    if (!(B > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
    if (kind == CounterexampleKind::Real) {
        if (eps) throw Error(ErrorKind::BadEpsilon, "eps applies only to the complex pair");
        PWSignal f(B, {{-B / 2, B / 2, 1.0 / B}}, true);
        PWSignal g(B, {{0.0, B, 1.0 / B}}, false);
        return {f, g};
    }
    if (!eps || !(*eps > 0.0) || !(*eps < 2.0 * B))
        throw Error(ErrorKind::BadEpsilon, "complex pair needs 0 < eps < 2B");
    const double e = *eps;
    PWSignal f(B, {{B - e, B, 1.0 / e}}, false);
    PWSignal g(B, {{-B, -B + e, 1.0 / e}}, false);
    return {f, g};
}

double counterexample_shift(double B, double eps)
{
    return 1.0 / (2.0 * B - eps);
}

LatticeSamples sample_lattice(const PWSignal& f, double spacing, double offset, long half_count)
{
    if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "lattice spacing must be positive");
    LatticeSamples out;
    out.spacing = spacing;
    out.offset = offset;
    out.values.values.resize(static_cast<std::size_t>(2 * half_count + 1));
    for (long n = -half_count; n <= half_count; ++n) out.values[n] = eval_time(f, out.time(n));
    return out;
}

}  // namespace pwphase
