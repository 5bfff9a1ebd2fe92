#include "pwphase/sign_retrieval.hpp"

#include "pwphase/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace pwphase {

int SignRetrievalResult::sign_at(double t) const
{
    const auto seg = std::upper_bound(zeros.begin(), zeros.end(), t) - zeros.begin();
    return signs[static_cast<std::size_t>(seg)];
}

std::vector<double> interpolate_square(const MagnitudeSamples& s, const UniformGrid& grid)
{
    CenteredSequence<double> sq;
    sq.values.reserve(s.values.values.size());
    for (double v : s.values.values) sq.values.push_back(v * v);
    std::vector<double> q(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i)
        q[i] = std::max(0.0, wsk_interpolate(sq, s.spacing(), grid.point(i)));
    return q;
}

namespace {

void check_samples(const MagnitudeSamples& s)
{
    if (!(s.B > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
    for (double v : s.values.values)
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::NoisyMagnitudes, "magnitude samples must be >= 0");
}

UniformGrid working_grid(const MagnitudeSamples& s, const SignRetrievalOptions& opts)
{
    if (opts.working) return *opts.working;
    return UniformGrid::symmetric(8.0 / s.B, 1.0 / (32.0 * s.B));
}

// Local minima of q below the threshold, refined by a parabola through the
// three neighbouring nodes.
std::vector<double> find_zeros(const UniformGrid& grid, const std::vector<double>& q, double threshold)
{
    const double peak = *std::max_element(q.begin(), q.end());
    std::vector<double> zeros;
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        const bool is_min = q[i] - q[i - 1] < 0.0 && q[i + 1] - q[i] >= 0.0;
        if (!is_min || q[i] > threshold * peak) continue;
        const double den = q[i - 1] - 2.0 * q[i] + q[i + 1];
        const double d = den > 0.0 ? 0.5 * (q[i - 1] - q[i + 1]) / den : 0.0;
        zeros.push_back(grid.point(i) + d * grid.step());
    }
    return zeros;
}

// Segment boundaries as grid indices: node i lies in segment #(zeros <= t_i).
std::vector<std::size_t> segment_edges(const UniformGrid& grid, const std::vector<double>& zeros)
{
    std::vector<std::size_t> edges{0};
    for (double z : zeros) {
        const double pos = std::ceil((z - grid.start()) / grid.step());
        edges.push_back(static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(grid.count()))));
    }
    edges.push_back(grid.count());
    return edges;
}

// Orthonormal basis for band-B functions seen on the nodes: left singular
// vectors of an oversampled sinc dictionary reaching 2/B past both ends.
Eigen::MatrixXd band_basis(const UniformGrid& grid, double B)
{
    const double sp = 1.0 / (4.0 * B);
    const double ext = 2.0 / B;
    const long k0 = static_cast<long>(std::floor((grid.start() - ext) / sp));
    const long k1 = static_cast<long>(std::ceil((grid.last() + ext) / sp));
    Eigen::MatrixXd A(static_cast<Eigen::Index>(grid.count()), k1 - k0 + 1);
    for (std::size_t i = 0; i < grid.count(); ++i)
        for (long k = k0; k <= k1; ++k)
            A(static_cast<Eigen::Index>(i), k - k0) = sinc(2.0 * B * (grid.point(i) - static_cast<double>(k) * sp));
    // BDCSVD loses accuracy in U on this nearly rank-deficient dictionary
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
    const auto& S = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < S.size() && S(rank) > 1e-10 * S(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

// Exhaustive minimization of sigma^T G sigma with sigma_0 = +1, Gray-code order.
std::vector<int> best_pattern(const Eigen::MatrixXd& G)
{
    const int m = static_cast<int>(G.rows());
    std::vector<int> sigma(static_cast<std::size_t>(m), 1);
    if (m <= 1) return sigma;
    Eigen::VectorXd h = G.rowwise().sum();
    double energy = h.sum();
    double best = energy;
    std::vector<int> best_sigma = sigma;
    const std::uint64_t states = std::uint64_t{1} << (m - 1);
    for (std::uint64_t g = 1; g < states; ++g) {
        const int k = 1 + std::countr_zero(g);
        const double sk = sigma[static_cast<std::size_t>(k)];
        energy -= 4.0 * sk * (h(k) - G(k, k) * sk);
        h -= 2.0 * sk * G.col(k);
        sigma[static_cast<std::size_t>(k)] = -sigma[static_cast<std::size_t>(k)];
        if (energy < best) {
            best = energy;
            best_sigma = sigma;
        }
    }
    return best_sigma;
}

// Signs for the segments of amp on grid, split at edges (size m + 1).
std::vector<int> solve_block(const UniformGrid& grid, std::span<const double> amp,
                             const std::vector<std::size_t>& edges, double B)
{
    const std::size_t m = edges.size() - 1;
    const Eigen::Index n = static_cast<Eigen::Index>(grid.count());
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = edges[j]; i < edges[j + 1]; ++i)
            U(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = amp[i];
    const Eigen::MatrixXd Q = band_basis(grid, B);
    const Eigen::MatrixXd R = U - Q * (Q.transpose() * U);
    return best_pattern(R.transpose() * R);
}

SignRetrievalResult assemble(const UniformGrid& grid, const std::vector<double>& amp, std::vector<double> zeros,
                             const std::vector<std::size_t>& edges, std::vector<int> signs)
{
    SignRetrievalResult out;
    out.grid = grid;
    out.values.resize(grid.count());
    for (std::size_t j = 0; j + 1 < edges.size(); ++j)
        for (std::size_t i = edges[j]; i < edges[j + 1]; ++i) out.values[i] = signs[j] * amp[i];
    out.zeros = std::move(zeros);
    out.signs = std::move(signs);
    return out;
}

struct Prepared {
    UniformGrid grid;
    std::vector<double> amp;
    std::vector<double> zeros;
    std::vector<std::size_t> edges;
    bool all_zero = false;
};

Prepared prepare(const MagnitudeSamples& s, const SignRetrievalOptions& opts)
{
    check_samples(s);
    Prepared p{working_grid(s, opts), {}, {}, {}, false};
    const auto q = interpolate_square(s, p.grid);
    p.amp.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) p.amp[i] = std::sqrt(q[i]);
    if (*std::max_element(q.begin(), q.end()) == 0.0) {
        p.all_zero = true;
        p.edges = {0, p.grid.count()};
        return p;
    }
    // two extra nodes per side so that a minimum just inside an end is still seen
    const UniformGrid padded(p.grid.start() - 2.0 * p.grid.step(), p.grid.step(), p.grid.count() + 4);
    for (double z : find_zeros(padded, interpolate_square(s, padded), opts.zero_threshold))
        if (z > p.grid.start() && z <= p.grid.last()) p.zeros.push_back(z);
    p.edges = segment_edges(p.grid, p.zeros);
    return p;
}

}  // namespace

SignRetrievalResult sign_retrieve(const MagnitudeSamples& s, const SignRetrievalOptions& opts)
{
    auto p = prepare(s, opts);
    if (p.all_zero) return assemble(p.grid, p.amp, {}, p.edges, {1});
    const std::size_t m = p.edges.size() - 1;
    if (m > static_cast<std::size_t>(kMaxSignSegments))
        throw Error(ErrorKind::TooManySegments, std::to_string(m) + " sign segments exceed the cap of 20");
    auto signs = solve_block(p.grid, p.amp, p.edges, s.B);
    return assemble(p.grid, p.amp, std::move(p.zeros), p.edges, std::move(signs));
}

SignRetrievalResult sign_retrieve_blockwise(const MagnitudeSamples& s, const SignRetrievalOptions& opts)
{
    const std::size_t S = static_cast<std::size_t>(opts.block_segments);
    const std::size_t step = static_cast<std::size_t>(opts.block_step);
    if (S < 2 || S > static_cast<std::size_t>(kMaxSignSegments) || step < 1 || step >= S)
        throw Error(ErrorKind::InvalidArgument, "block size must be in [2, 20] with 1 <= step < size");
    auto p = prepare(s, opts);
    if (p.all_zero) return assemble(p.grid, p.amp, {}, p.edges, {1});
    const std::size_t m = p.edges.size() - 1;
    if (m <= S) {
        auto signs = solve_block(p.grid, p.amp, p.edges, s.B);
        return assemble(p.grid, p.amp, std::move(p.zeros), p.edges, std::move(signs));
    }

    std::vector<double> seg_energy(m, 0.0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = p.edges[j]; i < p.edges[j + 1]; ++i) seg_energy[j] += p.amp[i] * p.amp[i];

    std::vector<std::size_t> starts;
    for (std::size_t st = 0; st + S <= m; st += step) starts.push_back(st);
    if (starts.back() != m - S) starts.push_back(m - S);

    std::vector<int> signs(m, 0);
    std::vector<double> centrality(m, -1.0);
    std::size_t prev_end = 0;
    for (std::size_t st : starts) {
        const std::size_t lo = p.edges[st];
        const std::size_t hi = p.edges[st + S];
        std::vector<int> sg(S, 1);
        if (hi > lo) {
            const UniformGrid sub(p.grid.point(lo), p.grid.step(), hi - lo);
            std::vector<std::size_t> sub_edges;
            for (std::size_t j = st; j <= st + S; ++j) sub_edges.push_back(p.edges[j] - lo);
            sg = solve_block(sub, std::span<const double>(p.amp).subspan(lo, hi - lo), sub_edges, s.B);
        }
        double vote = 0.0;
        for (std::size_t j = st; j < prev_end; ++j) vote += signs[j] * sg[j - st] * seg_energy[j];
        if (vote < 0.0)
            for (auto& v : sg) v = -v;
        for (std::size_t j = 0; j < S; ++j) {
            const double c = static_cast<double>(S) - std::abs(static_cast<double>(j) - (S - 1) / 2.0);
            if (c > centrality[st + j]) {
                centrality[st + j] = c;
                signs[st + j] = sg[j];
            }
        }
        prev_end = st + S;
    }
    if (signs[0] < 0)
        for (auto& v : signs) v = -v;
    return assemble(p.grid, p.amp, std::move(p.zeros), p.edges, std::move(signs));
}

}  // namespace pwphase
