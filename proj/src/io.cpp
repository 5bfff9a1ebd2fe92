#include "pwphase/io.hpp"

#include "pwphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace pwphase {

namespace {

void require_keys(const Json& j, const std::set<std::string>& required, const std::set<std::string>& optional,
                  const std::string& what)
{
    if (!j.is_object()) throw Error(ErrorKind::Config, what + " must be a JSON object");
    for (const auto& k : required)
        if (!j.contains(k)) throw Error(ErrorKind::Config, what + " is missing \"" + k + "\"");
    for (const auto& [k, v] : j.items())
        if (!required.count(k) && !optional.count(k)) throw Error(ErrorKind::Config, what + " has unknown key \"" + k + "\"");
}

double number(const Json& j, const std::string& key)
{
    const auto& v = j.at(key);
    if (!v.is_number()) throw Error(ErrorKind::Config, "\"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace

Json signal_to_json(const PWSignal& f)
{
    Json pieces = Json::array();
    for (const auto& p : f.pieces())
        pieces.push_back({{"a", p.a}, {"b", p.b}, {"re", p.value.real()}, {"im", p.value.imag()}});
    return {{"B", f.band()}, {"real_on_line", f.real_on_line()}, {"pieces", pieces}};
}

PWSignal signal_from_json(const Json& j)
{
    require_keys(j, {"B", "pieces"}, {"real_on_line"}, "signal spec");
    const double B = number(j, "B");
    bool real = false;
    if (j.contains("real_on_line")) {
        if (!j["real_on_line"].is_boolean()) throw Error(ErrorKind::Config, "\"real_on_line\" must be a boolean");
        real = j["real_on_line"].get<bool>();
    }
    if (!j["pieces"].is_array()) throw Error(ErrorKind::Config, "\"pieces\" must be an array");
    std::vector<SpectrumPiece> pieces;
    for (const auto& p : j["pieces"]) {
        require_keys(p, {"a", "b", "re"}, {"im"}, "spectrum piece");
        const double im = p.contains("im") ? number(p, "im") : 0.0;
        pieces.push_back({number(p, "a"), number(p, "b"), cplx(number(p, "re"), im)});
    }
    try {
        return PWSignal(B, std::move(pieces), real);
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
}

Json window_to_json(const WindowSpec& w)
{
    Json j{{"family", w.family_name()}};
    if (w.family() == WindowFamily::Hermite) j["n"] = w.index();
    if (w.family() == WindowFamily::FromSignal) j["signal"] = signal_to_json(*w.signal());
    return j;
}

WindowSpec window_from_json(const Json& j)
{
    require_keys(j, {"family"}, {"n", "signal"}, "window spec");
    if (!j["family"].is_string()) throw Error(ErrorKind::Config, "\"family\" must be a string");
    const auto fam = j["family"].get<std::string>();
    if (fam == "hermite") {
        if (!j.contains("n") || !j["n"].is_number_integer())
            throw Error(ErrorKind::Config, "hermite window needs an integer \"n\"");
        return WindowSpec::hermite(j["n"].get<int>());
    }
    if (j.contains("n")) throw Error(ErrorKind::Config, "\"n\" applies only to hermite windows");
    if (fam == "pw") {
        if (!j.contains("signal")) throw Error(ErrorKind::Config, "pw window needs \"signal\"");
        return WindowSpec::from_signal(signal_from_json(j["signal"]));
    }
    if (j.contains("signal")) throw Error(ErrorKind::Config, "\"signal\" applies only to pw windows");
    if (fam == "gaussian") return WindowSpec::gaussian();
    if (fam == "rect") return WindowSpec::rectangular();
    if (fam == "hanning") return WindowSpec::hanning();
    throw Error(ErrorKind::Config, "unknown window family \"" + fam + "\"");
}

WindowSpec parse_window_arg(const std::string& arg)
{
    if (arg == "gaussian") return WindowSpec::gaussian();
    if (arg == "rect") return WindowSpec::rectangular();
    if (arg == "hanning") return WindowSpec::hanning();
    if (arg.rfind("hermite:", 0) == 0) {
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(arg.substr(8), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != arg.size() - 8) throw Error(ErrorKind::Config, "bad Hermite index in \"" + arg + "\"");
        return WindowSpec::hermite(n);
    }
    return window_from_json(read_json(arg));
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

Json read_json(const std::string& path)
{
    const auto text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Config, path + ": " + e.what());
    }
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_magnitude_grid(std::ostream& os, const MagnitudeGrid& m)
{
    os << "x,omega,magnitude\n";
    for (std::size_t i = 0; i < m.x_axis.count(); ++i)
        for (std::size_t j = 0; j < m.omega_axis.count(); ++j)
            os << format_number(m.x_axis.point(i)) << ',' << format_number(m.omega_axis.point(j)) << ','
               << format_number(m.at(i, j)) << '\n';
}

namespace {

std::vector<std::vector<double>> read_csv(std::istream& is, const std::string& header)
{
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorKind::Config, "empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw Error(ErrorKind::Config, "expected CSV header \"" + header + "\"");
    const std::size_t cols = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || *end != '\0' || !std::isfinite(v))
                throw Error(ErrorKind::Config, "bad number on CSV line " + std::to_string(lineno));
            row.push_back(v);
        }
        if (row.size() != cols) throw Error(ErrorKind::Config, "wrong column count on CSV line " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::Config, "CSV has no data rows");
    return rows;
}

UniformGrid infer_axis(const std::vector<double>& pts)
{
    if (pts.size() == 1) return UniformGrid(pts[0], 1.0, 1);
    const double step = (pts.back() - pts.front()) / static_cast<double>(pts.size() - 1);
    if (!(step > 0.0)) throw Error(ErrorKind::Config, "grid axis must be increasing");
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (std::abs(pts[i] - (pts.front() + static_cast<double>(i) * step)) > 1e-9 * step)
            throw Error(ErrorKind::Config, "grid axis is not uniform");
    return UniformGrid(pts.front(), step, pts.size());
}

}  // namespace

MagnitudeGrid read_magnitude_grid(std::istream& is)
{
    const auto rows = read_csv(is, "x,omega,magnitude");
    std::vector<double> omegas;
    for (const auto& r : rows) {
        if (r[0] != rows[0][0]) break;
        omegas.push_back(r[1]);
    }
    const std::size_t nw = omegas.size();
    if (rows.size() % nw != 0) throw Error(ErrorKind::Config, "magnitude grid is not rectangular");
    std::vector<double> xs;
    for (std::size_t i = 0; i < rows.size(); i += nw) xs.push_back(rows[i][0]);
    MagnitudeGrid m{infer_axis(xs), infer_axis(omegas), std::vector<double>(rows.size())};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0] != xs[i / nw] || rows[i][1] != omegas[i % nw])
            throw Error(ErrorKind::Config, "magnitude grid rows out of order");
        if (rows[i][2] < 0.0) throw Error(ErrorKind::Config, "negative magnitude in grid");
        m.values[i] = rows[i][2];
    }
    return m;
}

void write_samples(std::ostream& os, const MagnitudeSamples& s)
{
    os << "n,magnitude\n";
    const long N = static_cast<long>(s.values.half());
    for (long n = -N; n <= N; ++n) os << n << ',' << format_number(s.values[n]) << '\n';
}

MagnitudeSamples read_samples(std::istream& is, double B)
{
    if (!(B > 0.0)) throw Error(ErrorKind::Config, "sample files need B > 0");
    const auto rows = read_csv(is, "n,magnitude");
    if (rows.size() % 2 == 0) throw Error(ErrorKind::Config, "sample index range must be symmetric");
    const long N = static_cast<long>(rows.size() / 2);
    MagnitudeSamples s;
    s.B = B;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0] != static_cast<double>(static_cast<long>(i) - N))
            throw Error(ErrorKind::Config, "sample indices must run -N..N in order");
        s.values.values.push_back(rows[i][1]);
    }
    return s;
}

void write_complex_grid(std::ostream& os, const ComplexField2D& g)
{
    os << "x,omega,re,im\n";
    for (std::size_t i = 0; i < g.x_axis().count(); ++i)
        for (std::size_t j = 0; j < g.y_axis().count(); ++j)
            os << format_number(g.x_axis().point(i)) << ',' << format_number(g.y_axis().point(j)) << ','
               << format_number(g.at(i, j).real()) << ',' << format_number(g.at(i, j).imag()) << '\n';
}

Json report_to_json(const ReconstructionReport& r)
{
    auto maybe = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(v); };
    Json signal = Json::array();
    for (std::size_t i = 0; i < r.grid.count(); ++i)
        signal.push_back({{"t", r.grid.point(i)}, {"re", r.signal[i].real()}, {"im", r.signal[i].imag()}});
    Json diag = Json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = v;
    diag["truncation_warning"] = r.truncation_warning;
    return {{"schema", 1},
            {"resolved_up_to", to_string(r.resolved_up_to)},
            {"residual", r.residual},
            {"anchor_t0", maybe(r.anchor_t0)},
            {"c", maybe(r.c)},
            {"floored_bins", r.floored_bins},
            {"diagnostics", diag},
            {"signal", signal}};
}

}  // namespace pwphase
