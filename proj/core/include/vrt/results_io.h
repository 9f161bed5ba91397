#ifndef VRT_RESULTS_IO_H
#define VRT_RESULTS_IO_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrt/simulation.h"
#include "vrt/sweep.h"

namespace vrt {

// Stable float formatting (shortest round-trip via %.17g); all emitters go
// through this so identical inputs produce byte-identical files.
std::string format_double(double v);

// RFC-4180 style quoting: fields containing comma, quote, CR or LF are
// wrapped in double quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

// Scalar metrics extracted from one run, keyed by metric name. Undefined
// metrics (zero denominators) are absent values.
std::map<std::string, std::optional<double>> run_metrics(const RunResult& r);

// Single-run summary as one JSON object (pretty-printed, stable key order).
std::string run_result_json(const RunResult& r);

// Sweep rows as CSV with a header line, or as JSON lines (one row object
// per line).
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_jsonl(const std::vector<SweepRow>& rows);

}  // namespace vrt

#endif
