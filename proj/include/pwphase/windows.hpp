#pragma once

#include "pwphase/core_numerics.hpp"
#include "pwphase/signal_model.hpp"

#include <optional>
#include <string>

namespace pwphase {

enum class WindowFamily { Gaussian, Hermite, Rectangular, Hanning, FromSignal };

inline constexpr int kHermiteMaxIndex = 20;

/// Gaussian e^{-pi t^2}; Hermite function H_n; indicator of [-1, 1];
/// cos^2 on [-pi/2, pi/2]; or a piecewise-constant-spectrum signal.
class WindowSpec {
public:
    static WindowSpec gaussian();
    /// Throws IndexTooLarge for n > 20 and InvalidArgument for n < 0.
    static WindowSpec hermite(int n);
    static WindowSpec rectangular();
    static WindowSpec hanning();
    static WindowSpec from_signal(PWSignal signal);

    WindowFamily family() const noexcept { return family_; }
    int index() const noexcept { return n_; }
    const PWSignal* signal() const noexcept { return signal_ ? &*signal_ : nullptr; }
    bool is_real() const;
    /// "gaussian", "hermite", "rect", "hanning" or "pw"
    std::string family_name() const;

private:
    explicit WindowSpec(WindowFamily family, int n = 0) : family_(family), n_(n) {}

    WindowFamily family_;
    int n_;
    std::optional<PWSignal> signal_;
};

/// L_k^{(j)}(t) by the standard three-term recurrence.
double laguerre_eval(int k, int j, double t);

/// L2-normalized Hermite function with H_0(t) = 2^{1/4} e^{-pi t^2}.
double hermite_eval(int n, double t);

cplx window_eval(const WindowSpec& w, double t);
cplx window_ft(const WindowSpec& w, double xi);

/// Closed forms for Gaussian and Hermite, exact piece sums for FromSignal,
/// quadrature for the compactly supported windows.
cplx window_ambiguity(const WindowSpec& w, double x, double omega);

/// e^{pi i x omega} V_w w(x, omega) by quadrature, for every family except
/// FromSignal (which has no quadrature path and falls back to the exact sum).
cplx window_ambiguity_quadrature(const WindowSpec& w, double x, double omega);

struct AmbiguitySlice {
    UniformGrid axis;
    double x0 = 0.0;
    std::vector<cplx> values;
    double min_modulus = 0.0;
};

AmbiguitySlice ambiguity_slice(const WindowSpec& w, double x0, const UniformGrid& axis);

}  // namespace pwphase
