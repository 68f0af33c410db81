#pragma once

// On-disk formats: distribution JSON, Hamiltonian JSON, series CSV with its
// alphabet sidecar, and metric reports.

#include <string>

#include <json.hpp>

#include "hoi/dist.hpp"
#include "hoi/estimation.hpp"
#include "hoi/generators.hpp"
#include "hoi/metrics.hpp"

namespace hoi {

// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::string& path);

// Rounds to `digits` significant digits (reports use 12).
double round_sig(double x, int digits = 12);

// {"shape":[...], "probs":[...], "labels":[...]}; labels optional.
// Throws ParseError naming the offending field, or the make_joint errors.
JointTable distribution_from_json(const std::string& text);
nlohmann::json distribution_to_json(const JointTable& t);

// {"n":5, "terms":[{"gamma":[0,1],"J":0.37}, ...]}
Hamiltonian hamiltonian_from_json(const std::string& text);
nlohmann::json hamiltonian_to_json(const Hamiltonian& h);

// Series CSV (header = channel names, one row per step) resolved against the
// alphabet sidecar {"channels":[{"name":..., "alphabet":[...]}, ...]}.
// Columns are matched to sidecar channels by name.
SeriesTable series_from_csv(const std::string& csv_text, const std::string& alphabet_json);

// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(const std::string& line);

nlohmann::json report_to_json(const MetricReport& r);
// Two columns, field,value; vectors flattened as name[i] / name[i][j].
std::string report_to_csv(const MetricReport& r);

}  // namespace hoi
