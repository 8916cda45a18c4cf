#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spontaneous/clustering.hpp"
#include "spontaneous/simulate.hpp"

namespace spont::io {

using nlohmann::json;

/// Comma-separated numeric rows, one observation per row. With `header` the
/// first row supplies feature names. Throws InvalidInput on ragged rows or
/// non-numeric cells.
DataSet parse_csv(std::istream& in, bool header = true);
DataSet read_csv(const std::filesystem::path& path, bool header = true);

/// One category identifier per non-empty line, surrounding blanks trimmed.
std::vector<std::string> read_labels(const std::filesystem::path& path);

json model_to_json(const ClusterModel& model, const Partition* partition = nullptr);
/// Parses a model document. Labels, when present, are returned in `labels`.
ClusterModel model_from_json(const json& j, std::vector<int>* labels = nullptr);

/// An experiment config document. `"preset": "five_cluster" | "two_cluster"`
/// starts from the corresponding design; every other field overrides it.
ExperimentConfig config_from_json(const json& j);

json outcome_to_json(const RunOutcome& o);
json report_to_json(const ExperimentReport& report);

/// Writes report.json and runs.jsonl (one outcome per line) into dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

json read_json(const std::filesystem::path& path);

}  // namespace spont::io
