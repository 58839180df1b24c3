#pragma once

#include <string>

#include <json.hpp>

#include "hcstab/dendrogram.hpp"
#include "hcstab/metric.hpp"

namespace hcstab {

using json = nlohmann::json;

// Matrix format: {"labels":[...],"dist":[[...],...]}. JSON numbers are
// emitted with shortest round-trip precision so golden files are bit-exact.
json matrix_to_json(const FiniteMetricSpace& m);
FiniteMetricSpace matrix_from_json(const json& j, const MetricOptions& options = {});

// CSV: header row of labels, then a square numeric body.
std::string matrix_to_csv(const FiniteMetricSpace& m);
FiniteMetricSpace matrix_from_csv(const std::string& text, const MetricOptions& options = {});

// {"labels":[...],"breakpoints":[...],"partitions":[[["a","b"],["c"]],...]}
json dendrogram_to_json(const Dendrogram& theta);
Dendrogram dendrogram_from_json(const json& j);

json merge_table_to_json(const MergeTable& table);
std::string merge_table_to_csv(const MergeTable& table);

/// Loads a distance matrix from a .json or .csv file (by extension).
FiniteMetricSpace load_matrix(const std::string& path, const MetricOptions& options = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hcstab
