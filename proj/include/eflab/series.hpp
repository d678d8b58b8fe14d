#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eflab/common.hpp"

namespace eflab {

/// A sampled real-valued function of time: strictly increasing times with
/// one value per time. This is the exchange type between the integrator's
/// dense output, CSV files, and the growth classifier.
struct SampleSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string source_label;

    SampleSeries() = default;
    SampleSeries(std::vector<double> t, std::vector<double> v, std::string label = "")
        : times(std::move(t)), values(std::move(v)), source_label(std::move(label)) {
        validate();
    }

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }

    void validate() const {
        if (times.size() != values.size())
            throw ConfigError("SampleSeries: times and values differ in length");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(times[i]))
                throw ConfigError("SampleSeries: non-finite time at index " + std::to_string(i));
            if (!std::isfinite(values[i]))
                throw ConfigError("SampleSeries: non-finite value at index " + std::to_string(i));
            if (i > 0 && times[i] <= times[i - 1])
                throw ConfigError("SampleSeries: times not strictly increasing at index " +
                                  std::to_string(i));
        }
    }
};

/// Tabulates f on the given grid.
inline SampleSeries sample_function(const std::function<double(double)>& f,
                                    const std::vector<double>& grid,
                                    const std::string& label = "") {
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (double t : grid) vals.push_back(f(t));
    return SampleSeries(grid, std::move(vals), label);
}

namespace csv {

/// Reads a two-column (time,value) CSV. A first line whose fields do not
/// both parse as numbers is treated as a header and skipped.
inline SampleSeries read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file: " + path);
    std::vector<double> ts, vs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string a, b;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            // also accept whitespace-separated columns
            std::istringstream ss(line);
            ss >> a >> b;
        } else {
            a = line.substr(0, comma);
            b = line.substr(comma + 1);
        }
        try {
            std::size_t pa = 0, pb = 0;
            double t = std::stod(a, &pa);
            double v = std::stod(b, &pb);
            ts.push_back(t);
            vs.push_back(v);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header row
            throw ConfigError(path + ": unparseable CSV row at line " + std::to_string(lineno));
        }
    }
    if (ts.empty()) throw ConfigError(path + ": no data rows");
    return SampleSeries(std::move(ts), std::move(vs), path);
}

/// RFC-4180 field quoting: quote when the field contains comma, quote or newline.
inline std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace csv
}  // namespace eflab
