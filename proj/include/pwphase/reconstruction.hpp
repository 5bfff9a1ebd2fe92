#pragma once

#include "pwphase/core_numerics.hpp"
#include "pwphase/sign_retrieval.hpp"
#include "pwphase/tf_transforms.hpp"
#include "pwphase/windows.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace pwphase {

enum class Resolution { GlobalSign, GlobalPhase };

std::string to_string(Resolution r);

struct ReconstructionReport {
    UniformGrid grid{0.0, 1.0, 1};
    std::vector<cplx> signal;
    Resolution resolved_up_to = Resolution::GlobalSign;
    /// Max deviation of re-simulated measurements from the input, relative
    /// to the largest input magnitude, over interior nodes.
    double residual = 0.0;
    double anchor_t0 = std::nan("");
    double c = std::nan("");
    std::size_t floored_bins = 0;
    bool truncation_warning = false;
    std::vector<std::pair<std::string, double>> diagnostics;
};

struct PipelineOptions {
    /// Slice division floor, relative to the largest |A w| on the slice axis.
    double slice_floor = 1e-8;
    /// Deconvolution floor, relative to the largest in-band |F w|.
    double deconv_floor = 1e-6;
    /// Output grid; default [-8/B, 8/B] with step min(1e-2, 1/(32B)).
    std::optional<UniformGrid> output;
    int sign_block_segments = 12;
    int sign_block_step = 4;
};

/// Frequency axis used for slice recovery: [-2B, 2B] with step 1/(256B).
UniformGrid slice_axis(double B);

struct RecoveredSlice {
    AmbiguitySlice slice;
    std::size_t floored_bins = 0;
};

/// A f(x0, .) = F(|V_w f|^2)(., -x0) / conj(A w(x0, .)). Bins with
/// |A w| below floor * max |A w| are zeroed. Throws VanishingAmbiguity if
/// more than 20% of bins are floored.
RecoveredSlice recover_af_slice(const MagnitudeGrid& m, const WindowSpec& w, double x0, const UniformGrid& omega_axis,
                                double floor = 1e-8);

/// Inverse transform of an ambiguity slice at offset c, giving
/// r_c(t) = f(t) conj(f(t - c)) at the requested times.
std::vector<cplx> cross_correlation(const AmbiguitySlice& af_slice, std::span<const double> times);

struct CrossCorrelationSlice {
    double c = 0.0;
    UniformGrid t_axis{0.0, 1.0, 1};
    std::vector<cplx> values;
};

CrossCorrelationSlice cross_correlation_slice(const AmbiguitySlice& af_slice, const UniformGrid& t_axis);

struct Anchor {
    double t0 = 0.0;
    double kappa = 0.0;
};

/// Scans `offsets` points in [0, c) for the one maximizing
/// min_{|n| <= K} |f(t0 + n c)|. Throws NoAnchor when the best minimum is
/// below 1e-6 of the largest magnitude seen.
Anchor select_anchor(const std::function<double(double)>& magnitude, double c, long K, int offsets = 64);

/// Walks the lattice t0 + n c outward from the anchor, which is fixed to
/// |f(t0)|. Phases follow r_c(t_{n+1}) / conj(f(t_n)); moduli are taken from
/// `magnitude`. Throws UnstableChain if a divisor inside |n| <= K falls below
/// kappa / 2. Beyond K the chain stops at the first magnitude under
/// 1e-3 of the largest one and the remaining values are set to 0.
CenteredSequence<cplx> propagate_phase(const CenteredSequence<double>& magnitude, const CenteredSequence<cplx>& r,
                                       long K, double kappa);

ReconstructionReport reconstruct_real_full(const MagnitudeGrid& m, const WindowSpec& w, double B,
                                           const PipelineOptions& opts = {});

ReconstructionReport reconstruct_real_sampled(const MagnitudeSamples& s, const WindowSpec& w, double B,
                                              const PipelineOptions& opts = {});

/// Throws CUpsampleBound unless 0 < c <= 1/(2B).
void check_slice_offset(double B, double c);

/// Requires 0 < c <= 1/(2B); otherwise CUpsampleBound before any work.
ReconstructionReport reconstruct_complex_two_slices(const MagnitudeGrid& m, const WindowSpec& w, double B, double c,
                                                    const PipelineOptions& opts = {});

struct StripEstimate {
    double delta_hat = 0.0;  // min |A w(0, omega)| over [-2B, 2B]
    double delta = 0.0;      // largest strip half-width found
    double c = 0.0;          // min(delta, 1/(2B))
};

/// Checks |A w(0, .)| on [-2B, 2B] and scans x along `scan` for the strip
/// where the minimum stays above delta_hat / 2. Throws StripNotFound when
/// A w(0, .) vanishes somewhere in the band.
StripEstimate estimate_strip(const WindowSpec& w, double B, const UniformGrid& scan);

/// Default scan: x in [0, 2/B] with step 1/128.
UniformGrid default_strip_scan(double B);

ReconstructionReport reconstruct_complex_strip(const MagnitudeGrid& m, const WindowSpec& w, double B,
                                               const UniformGrid& scan, const PipelineOptions& opts = {});

/// Interior self-consistency check used for the report residual.
double grid_residual(const MagnitudeGrid& m, const WindowSpec& w, const UniformGrid& grid,
                     std::span<const cplx> signal);
double samples_residual(const MagnitudeSamples& s, const WindowSpec& w, const UniformGrid& grid,
                        std::span<const cplx> signal);

}  // namespace pwphase
