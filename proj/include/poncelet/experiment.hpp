#pragma once

// Batch experiment driver: flat key=value configs, experiment dispatch,
// JSON/CSV reports and deterministic SVG figures.

#include <map>
#include <string>
#include <vector>

#include "poncelet/spherical.hpp"

namespace poncelet {

struct ConfigError : GeometryError {
    using GeometryError::GeometryError;
};

// Flat dotted key=value config; values are kept verbatim so emit/parse
// round-trips exactly.
struct ExperimentConfig {
    std::map<std::string, std::string> entries;

    static ExperimentConfig parse(const std::string& text);  // throws ConfigError
    static ExperimentConfig load(const std::string& path);   // throws ConfigError
    std::string emit() const;  // canonical text (sorted keys)
    std::string hash() const;  // FNV-1a of the canonical text, hex

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    std::string get(const std::string& key) const;               // throws ConfigError
    std::string get_or(const std::string& key, std::string fallback) const;
    double number(const std::string& key) const;                 // throws ConfigError
    double number_or(const std::string& key, double fallback) const;
    int integer_or(const std::string& key, int fallback) const;

    // conic under the dotted prefix: `<prefix>.kind` in {circle, ellipse,
    // coeffs} with the matching parameter keys
    Conic conic(const std::string& prefix) const;
};

struct RunResult {
    std::string report_json;  // pretty-printed report
    std::string csv;          // per-sample table
    std::string svg;          // figure (may be empty unless requested)
    bool check_failed = false;
    bool input_error = false;
};

// Executes the experiment named by `experiment = ...`; never throws — errors
// land in the report with the matching flag set.
RunResult run_experiment(const ExperimentConfig& cfg, bool want_svg);

// Parse + semantic checks only; throws ConfigError with a message.
void validate_config(const ExperimentConfig& cfg);

// Deterministic SVG: fixed viewBox from the data bounding box plus a 5%
// margin; conics drawn as 256-segment polylines. Throws EmptyDataset.
std::string emit_svg(const std::vector<Polygon>& polygons, const std::vector<Conic>& conics,
                     const std::vector<CPoint>& points);

}  // namespace poncelet
