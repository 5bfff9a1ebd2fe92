#pragma once

#include "pwphase/core_numerics.hpp"
#include "pwphase/tf_transforms.hpp"

#include <optional>
#include <vector>

namespace pwphase {

inline constexpr int kMaxSignSegments = 20;

struct SignRetrievalOptions {
    /// Grid on which u is rebuilt; default [-8/B, 8/B] with step 1/(32B).
    std::optional<UniformGrid> working;
    /// Local minima of u^2 at or below this fraction of its peak count as zeros.
    double zero_threshold = 0.05;
    /// Blockwise variant only: segments per exhaustive block and block stride.
    int block_segments = 12;
    int block_step = 4;
};

struct SignRetrievalResult {
    UniformGrid grid{0.0, 1.0, 1};
    std::vector<double> values;  // +u or -u on grid
    std::vector<double> zeros;   // refined segment boundaries, ascending
    std::vector<int> signs;      // one per segment, first is +1

    std::size_t segments() const noexcept { return signs.size(); }
    /// Sign of the segment containing t.
    int sign_at(double t) const;
};

/// Rebuilds a real bandlimited u (band B) from |u(n/(4B))|, up to one global
/// sign. u^2 is interpolated at its own Nyquist rate, split at its zeros,
/// and the segment sign pattern minimizing the part of the signed candidate
/// not explained by band-B functions on the window is chosen by exhaustive
/// search. Throws TooManySegments above 20 segments, NoisyMagnitudes on
/// negative or non-finite samples.
SignRetrievalResult sign_retrieve(const MagnitudeSamples& s, const SignRetrievalOptions& opts = {});

/// Same criterion applied to overlapping blocks of segments, stitched by an
/// energy-weighted vote on the overlaps. Used when a window holds many zeros.
SignRetrievalResult sign_retrieve_blockwise(const MagnitudeSamples& s, const SignRetrievalOptions& opts = {});

/// u^2 at t from the squared samples, clamped at 0.
std::vector<double> interpolate_square(const MagnitudeSamples& s, const UniformGrid& grid);

}  // namespace pwphase
