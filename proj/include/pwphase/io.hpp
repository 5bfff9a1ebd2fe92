#pragma once

#include "pwphase/reconstruction.hpp"
#include "pwphase/signal_model.hpp"
#include "pwphase/tf_transforms.hpp"
#include "pwphase/windows.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>

namespace pwphase {

using Json = nlohmann::ordered_json;

/// {"B", "real_on_line", "pieces": [{"a", "b", "re", "im"}]}; numbers are
/// written in shortest round-trip form, so read(write(f)) == f.
Json signal_to_json(const PWSignal& f);
/// Throws Config on missing or unknown keys and invalid values.
PWSignal signal_from_json(const Json& j);

/// {"family": "gaussian"|"hermite"|"rect"|"hanning"|"pw", "n"?, "signal"?}
Json window_to_json(const WindowSpec& w);
WindowSpec window_from_json(const Json& j);

/// "gaussian", "rect", "hanning", "hermite:N", or a path to a window JSON file.
WindowSpec parse_window_arg(const std::string& arg);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);
Json read_json(const std::string& path);

/// %.17g, enough to round-trip a double.
std::string format_number(double v);

/// header x,omega,magnitude; row-major in x then omega
void write_magnitude_grid(std::ostream& os, const MagnitudeGrid& m);
MagnitudeGrid read_magnitude_grid(std::istream& is);

/// header n,magnitude; n runs -N..N
void write_samples(std::ostream& os, const MagnitudeSamples& s);
MagnitudeSamples read_samples(std::istream& is, double B);

/// header x,omega,re,im
void write_complex_grid(std::ostream& os, const ComplexField2D& g);

Json report_to_json(const ReconstructionReport& r);

}  // namespace pwphase
