#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qdimer::io {

using Json = nlohmann::ordered_json;

// 12 significant digits; enough to make CSV outputs byte-stable across runs
// while resolving Hz-scale structure on GHz-scale numbers.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Frequency with a human unit tag, for JSON reports spanning Hz to GHz.
inline Json frequency_json(double ghz) {
    const double abs = std::abs(ghz);
    const char* unit = "GHz";
    double value = ghz;
    if (abs < 1e-9) {
        unit = "Hz";
        value = ghz * 1e9;
    } else if (abs < 1e-6) {
        unit = "kHz";
        value = ghz * 1e6;
    } else if (abs < 1e-3) {
        unit = "MHz";
        value = ghz * 1e3;
    }
    return Json{{"value", value}, {"unit", unit}, {"ghz", ghz}};
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qdimer::io
