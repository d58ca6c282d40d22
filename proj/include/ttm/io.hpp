#pragma once

#include <string>

#include "ttm/analysis.hpp"
#include "ttm/metric.hpp"
#include "ttm/model.hpp"

namespace ttm {

/// Parses a schemaVersion-1 network document (UTF-8 JSON). Structure only;
/// consistency is left to validate_network. Applies the half-tick scaling.
/// Throws parse_error naming the offending path.
Network load_network(const std::string& text);

/// Inverse of load_network; deterministic byte output,
/// load_network(serialize_network(net)) == net.
std::string serialize_network(const Network& net);

enum class BuiltinExample { MinMinCounterexample, BoundaryExample, IntegralViolation };

/// Canonical encodings of the worked examples (reverse segments added with
/// the forward off-peak constants so the quoted directed values are
/// unchanged).
Network builtin_example(BuiltinExample which);

enum class MatrixFormat { CSV, JSONDocument };

/// CSV: header row of location ids, one row of durations per origin, in
/// input tick units ("x.5" halves, "inf" sentinel). JSON: values plus
/// aggregator/period/regularized metadata. Deterministic bytes.
std::string write_matrix(const MetricMatrix& m, MatrixFormat format);

MetricMatrix read_matrix_json(const std::string& text);

CapacityScenario load_scenario(const std::string& text);

std::string validation_report_json(const ValidationReport& report);

}  // namespace ttm
