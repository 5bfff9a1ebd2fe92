#include "pwphase/cli.hpp"

#include "pwphase/errors.hpp"
#include "pwphase/io.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace pwphase {

namespace {

struct Sink {
    std::ostream& out;

    void emit(const std::optional<std::string>& path, const std::string& text) const
    {
        if (path)
            write_text(*path, text);
        else
            out << text;
    }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

PWSignal load_signal(const std::string& arg, double B, int pieces, bool real)
{
    if (arg.rfind("random:", 0) == 0) {
        const auto seed_text = arg.substr(7);
        if (seed_text.empty() || !std::all_of(seed_text.begin(), seed_text.end(), ::isdigit))
            throw Error(ErrorKind::Config, "random signals are written random:SEED");
        return random_pw_signal(B, pieces, real, std::stoull(seed_text));
    }
    return signal_from_json(read_json(arg));
}

// ---- generate

struct GenerateArgs {
    double B = 1.0;
    int pieces = 4;
    bool real = false;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

int cmd_generate(const GenerateArgs& a, const Sink& sink)
{
    sink.emit(a.out, dump(signal_to_json(random_pw_signal(a.B, a.pieces, a.real, a.seed))));
    return kExitOk;
}

// ---- ambiguity

struct AmbiguityArgs {
    std::string window;
    double x_half = 3.0;
    double omega_half = 3.0;
    double step = 1.0 / 32.0;
    std::optional<std::string> out;
};

int cmd_ambiguity(const AmbiguityArgs& a, const Sink& sink)
{
    const auto w = parse_window_arg(a.window);
    const auto xs = UniformGrid::symmetric(a.x_half, a.step);
    const auto ws = UniformGrid::symmetric(a.omega_half, a.step);
    ComplexField2D g(xs, ws);
    for (std::size_t i = 0; i < xs.count(); ++i)
        for (std::size_t j = 0; j < ws.count(); ++j) g.at(i, j) = window_ambiguity(w, xs.point(i), ws.point(j));
    std::ostringstream os;
    write_complex_grid(os, g);
    sink.emit(a.out, os.str());
    return kExitOk;
}

// ---- measure

struct MeasureArgs {
    std::string signal;
    std::string window;
    std::string geometry = "grid";
    long N = 256;
    std::optional<double> x_half, x_step, omega_half, omega_step;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

int cmd_measure(const MeasureArgs& a, const Sink& sink)
{
    const auto f = load_signal(a.signal, 1.0, 4, false);
    const auto w = parse_window_arg(a.window);
    const NoiseModel noise{a.noise, a.seed};
    std::ostringstream os;
    if (a.geometry == "samples") {
        write_samples(os, measure_samples(f, w, a.N, noise));
    } else {
        const auto def = pipeline_axes(f.band(), w);
        const auto xs = UniformGrid::symmetric(a.x_half.value_or(-def.x_axis.start()),
                                               a.x_step.value_or(def.x_axis.step()));
        const auto ws = UniformGrid::symmetric(a.omega_half.value_or(-def.omega_axis.start()),
                                               a.omega_step.value_or(def.omega_axis.step()));
        write_magnitude_grid(os, measure_grid(f, w, xs, ws, noise));
    }
    sink.emit(a.out, os.str());
    return kExitOk;
}

// ---- reconstruct

struct ReconstructArgs {
    std::string method;
    std::optional<std::string> input;
    std::string window = "gaussian";
    double B = 1.0;
    std::optional<double> c;
    double slice_floor = 1e-8;
    double deconv_floor = 1e-6;
    std::optional<std::string> out;
};

MagnitudeGrid load_grid(const std::string& path)
{
    std::istringstream is(read_text(path));
    return read_magnitude_grid(is);
}

int cmd_reconstruct(const ReconstructArgs& a, const Sink& sink)
{
    if (a.method == "complex-two") {
        if (!a.c) throw Error(ErrorKind::Config, "complex-two needs --c");
        check_slice_offset(a.B, *a.c);
    }
    if (!a.input) throw Error(ErrorKind::Config, "--input is required");
    const auto w = parse_window_arg(a.window);
    PipelineOptions opts;
    opts.slice_floor = a.slice_floor;
    opts.deconv_floor = a.deconv_floor;

    ReconstructionReport rep;
    if (a.method == "real-full") {
        rep = reconstruct_real_full(load_grid(*a.input), w, a.B, opts);
    } else if (a.method == "real-sampled") {
        std::istringstream is(read_text(*a.input));
        rep = reconstruct_real_sampled(read_samples(is, a.B), w, a.B, opts);
    } else if (a.method == "complex-two") {
        rep = reconstruct_complex_two_slices(load_grid(*a.input), w, a.B, *a.c, opts);
    } else {
        rep = reconstruct_complex_strip(load_grid(*a.input), w, a.B, default_strip_scan(a.B), opts);
    }
    auto j = report_to_json(rep);
    Json tol{{"slice_floor", a.slice_floor}, {"deconv_floor", a.deconv_floor}};
    j["method"] = a.method;
    j["tolerances"] = tol;
    sink.emit(a.out, dump(j));
    return kExitOk;
}

// ---- verify

struct VerifyArgs {
    std::string window = "gaussian";
    std::string signal;
    double B = 1.0;
    int pieces = 4;
    bool real = false;
    std::optional<std::string> out;
};

int cmd_verify(const VerifyArgs& a, const Sink& sink)
{
    const auto w = parse_window_arg(a.window);
    const auto f = load_signal(a.signal, a.B, a.pieces, a.real);
    const double B = f.band();
    Json checks = Json::array();
    bool ok = true;
    auto check = [&](const std::string& name, double value, double tol) {
        const bool pass = std::isfinite(value) && value <= tol;
        ok = ok && pass;
        checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
    };

    const auto probe = UniformGrid::symmetric(2.0, 0.5);
    const auto rel = ambiguity_relation_residual(f, w, probe, probe);
    check("ambiguity_relation_residual", rel.residual, 1e-5);

    const std::vector<double> band_probe{-3 * B, -2.5 * B, -2 * B, 2 * B, 2.5 * B, 3 * B};
    const auto xp = probe.points();
    check("band_support_residual", band_support_residual(f, band_probe, xp), 1e-6);

    check("ambiguity_origin_energy", std::abs(pw_ambiguity(f, 0.0, 0.0) - f.energy()), 1e-10);

    // interpolation from Nyquist samples
    const auto lat = sample_lattice(f, 1.0 / (2.0 * B), 0.0, 512);
    double wsk_err = 0.0;
    for (const double t : UniformGrid::symmetric(4.0, 1.0 / 64.0).points())
        wsk_err = std::max(wsk_err, std::abs(wsk_interpolate(lat.values, lat.spacing, t) - eval_time(f, t)));
    check("wsk_consistency", wsk_err, 1e-4);

    if (f.real_on_line()) {
        double im = 0.0;
        for (const double t : UniformGrid::symmetric(5.0, 1.0 / 64.0).points())
            im = std::max(im, std::abs(eval_time(f, t).imag()));
        check("real_on_line_imaginary", im, 1e-12 * std::max(1.0, f.spectrum_l1()));
    }
    if (w.is_real()) {
        double sym = 0.0;
        for (const double x : xp)
            for (const double om : xp)
                sym = std::max(sym, std::abs(window_ambiguity(w, -x, -om) - std::conj(window_ambiguity(w, x, om))));
        check("window_ambiguity_symmetry", sym, 1e-8);
    }

    Json j{{"schema", 1},
           {"command", "verify"},
           {"signal", signal_to_json(f)},
           {"window", window_to_json(w)},
           {"ambiguity_relation_residual", rel.residual},
           {"truncation_warning", rel.truncation_warning},
           {"checks", checks},
           {"pass", ok}};
    sink.emit(a.out, dump(j));
    return ok ? kExitOk : kExitFailure;
}

// ---- counterexample

struct CounterexampleArgs {
    std::string kind;
    double B = 1.0;
    std::optional<double> eps;
    std::string out_dir;
};

int cmd_counterexample(const CounterexampleArgs& a, const Sink& sink)
{
    const bool complex = a.kind == "complex";
    const auto [f, g] = counterexample_pair(complex ? CounterexampleKind::Complex : CounterexampleKind::Real, a.B,
                                            a.eps);
    const auto grid = default_time_grid(a.B);
    const auto fs = sample(f, grid);
    const auto gs = sample(g, grid);
    double mod_diff = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) mod_diff = std::max(mod_diff, std::abs(std::abs(fs[i]) - std::abs(gs[i])));
    const auto dist = distance_up_to_phase(fs, gs, grid.step());
    const double fnorm = grid_norm(fs, grid.step());

    Json report{{"schema", 1},
                {"command", "counterexample"},
                {"kind", a.kind},
                {"B", a.B},
                {"grid", {{"start", grid.start()}, {"step", grid.step()}, {"count", grid.count()}}},
                {"max_modulus_difference", mod_diff},
                {"distance_up_to_phase", dist.distance},
                {"relative_distance", fnorm > 0.0 ? dist.distance / fnorm : 0.0}};
    if (complex) {
        const double c = counterexample_shift(a.B, *a.eps);
        double rc_diff = 0.0;
        for (std::size_t i = 0; i < grid.count(); ++i) {
            const double t = grid.point(i);
            const cplx rf = fs[i] * std::conj(eval_time(f, t - c));
            const cplx rg = gs[i] * std::conj(eval_time(g, t - c));
            rc_diff = std::max(rc_diff, std::abs(rf - rg));
        }
        report["eps"] = *a.eps;
        report["c"] = c;
        report["max_cross_correlation_difference"] = rc_diff;
    }

    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path dir(a.out_dir);
    write_text((dir / "f.json").string(), dump(signal_to_json(f)));
    write_text((dir / "g.json").string(), dump(signal_to_json(g)));
    write_text((dir / "report.json").string(), dump(report));
    sink.emit(std::nullopt, dump(report));
    return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Phase retrieval for bandlimited signals from STFT magnitudes", "pwphase"};
    app.require_subcommand(1);
    const Sink sink{out};

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a random signal spec");
    generate->add_option("--B", gen.B, "Bandwidth")->check(CLI::PositiveNumber);
    generate->add_option("--pieces", gen.pieces, "Spectrum pieces")->check(CLI::Range(1, 1000));
    generate->add_flag("--real", gen.real, "Hermitian spectrum");
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--out", gen.out, "Output JSON path (stdout if absent)");

    AmbiguityArgs amb;
    auto* ambiguity = app.add_subcommand("ambiguity", "Dump a window ambiguity grid as CSV");
    ambiguity->add_option("--window", amb.window, "gaussian | hermite:N | rect | hanning | window JSON")->required();
    ambiguity->add_option("--x-half", amb.x_half, "Half-width of the x axis")->check(CLI::PositiveNumber);
    ambiguity->add_option("--omega-half", amb.omega_half, "Half-width of the omega axis")->check(CLI::PositiveNumber);
    ambiguity->add_option("--step", amb.step, "Grid step")->check(CLI::PositiveNumber);
    ambiguity->add_option("--out", amb.out, "Output CSV path");

    MeasureArgs mea;
    auto* measure = app.add_subcommand("measure", "Simulate STFT magnitude measurements");
    measure->add_option("--signal", mea.signal, "Signal JSON or random:SEED")->required();
    measure->add_option("--window", mea.window, "Window")->required();
    measure->add_option("--geometry", mea.geometry, "grid | samples")->check(CLI::IsMember({"grid", "samples"}));
    measure->add_option("--N", mea.N, "Sample half-count for --geometry samples")->check(CLI::NonNegativeNumber);
    measure->add_option("--x-half", mea.x_half, "x half-width")->check(CLI::PositiveNumber);
    measure->add_option("--x-step", mea.x_step, "x step")->check(CLI::PositiveNumber);
    measure->add_option("--omega-half", mea.omega_half, "omega half-width")->check(CLI::PositiveNumber);
    measure->add_option("--omega-step", mea.omega_step, "omega step")->check(CLI::PositiveNumber);
    measure->add_option("--noise", mea.noise, "Additive noise sigma")->check(CLI::NonNegativeNumber);
    measure->add_option("--seed", mea.seed, "Noise seed");
    measure->add_option("--out", mea.out, "Output CSV path");

    ReconstructArgs rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "Recover a signal from measurement files");
    reconstruct->add_option("--method", rec.method, "Pipeline")
        ->required()
        ->check(CLI::IsMember({"real-full", "real-sampled", "complex-two", "complex-strip"}));
    reconstruct->add_option("--input", rec.input, "Measurement CSV");
    reconstruct->add_option("--window", rec.window, "Window used for the measurements");
    reconstruct->add_option("--B", rec.B, "Bandwidth")->check(CLI::PositiveNumber);
    reconstruct->add_option("--c", rec.c, "Slice offset for complex-two");
    reconstruct->add_option("--slice-floor", rec.slice_floor, "Relative slice division floor")
        ->check(CLI::PositiveNumber);
    reconstruct->add_option("--deconv-floor", rec.deconv_floor, "Relative deconvolution floor")
        ->check(CLI::PositiveNumber);
    reconstruct->add_option("--out", rec.out, "Report JSON path");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite on a signal and window");
    verify->add_option("--window", ver.window, "Window");
    verify->add_option("--signal", ver.signal, "Signal JSON or random:SEED")->required();
    verify->add_option("--B", ver.B, "Bandwidth for random signals")->check(CLI::PositiveNumber);
    verify->add_option("--pieces", ver.pieces, "Pieces for random signals")->check(CLI::Range(1, 1000));
    verify->add_flag("--real", ver.real, "Random signal with Hermitian spectrum");
    verify->add_option("--out", ver.out, "Report JSON path");

    CounterexampleArgs cex;
    auto* counterexample = app.add_subcommand("counterexample", "Write a non-uniqueness pair and its data report");
    counterexample->add_option("--kind", cex.kind, "real | complex")
        ->required()
        ->check(CLI::IsMember({"real", "complex"}));
    counterexample->add_option("--B", cex.B, "Bandwidth")->check(CLI::PositiveNumber);
    counterexample->add_option("--eps", cex.eps, "Spectral width for the complex pair");
    counterexample->add_option("--out-dir", cex.out_dir, "Directory for f.json, g.json, report.json")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(gen, sink);
        if (*ambiguity) return cmd_ambiguity(amb, sink);
        if (*measure) return cmd_measure(mea, sink);
        if (*reconstruct) return cmd_reconstruct(rec, sink);
        if (*verify) return cmd_verify(ver, sink);
        if (*counterexample) return cmd_counterexample(cex, sink);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return (e.kind() == ErrorKind::Io || e.kind() == ErrorKind::Config) ? kExitUsage : kExitFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: Io: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace pwphase
